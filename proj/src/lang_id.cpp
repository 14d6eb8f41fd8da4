#include "census/lang_id.hpp"

#include "census/util.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace census {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim_right(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line_no, const std::string& what) {
    throw FatalError(origin + ":" + std::to_string(line_no) + ": " + what);
}

} // namespace

std::size_t ExtensionMap::language_count() const {
    std::set<std::string> names;
    for (const auto& [ext, lang] : by_extension) names.insert(lang);
    for (const auto& [name, lang] : by_filename) names.insert(lang);
    return names.size();
}

ExtensionMap parse_map(std::istream& in, const std::string& origin) {
    // ext claims may legitimately collide across languages; overrides resolve them.
    std::map<std::string, std::set<std::string>> claims;
    std::map<std::string, std::string> overrides;
    std::map<std::string, std::string> filenames;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_right(line);
        if (line.empty() || line[0] == '#') continue;

        std::size_t sp1 = line.find(' ');
        if (sp1 == std::string::npos) fail(origin, line_no, "expected 'kind key language'");
        std::string kind = line.substr(0, sp1);
        std::size_t sp2 = line.find(' ', sp1 + 1);
        if (sp2 == std::string::npos) fail(origin, line_no, "missing language name");
        std::string key = line.substr(sp1 + 1, sp2 - sp1 - 1);
        std::string language = line.substr(sp2 + 1);
        if (key.empty()) fail(origin, line_no, "empty key");
        if (language.empty()) fail(origin, line_no, "empty language name");

        if (kind == "ext" || kind == "override") {
            if (key[0] != '.' || key.size() < 2) {
                fail(origin, line_no, "extension must start with '.': " + key);
            }
            std::string ext = to_lower(key);
            if (kind == "ext") {
                claims[ext].insert(language);
            } else {
                auto [it, fresh] = overrides.emplace(ext, language);
                if (!fresh && it->second != language) {
                    fail(origin, line_no,
                         "conflicting overrides for " + ext + ": " + it->second + " vs " + language);
                }
            }
        } else if (kind == "file") {
            auto [it, fresh] = filenames.emplace(key, language);
            if (!fresh && it->second != language) {
                fail(origin, line_no,
                     "filename " + key + " claimed by both " + it->second + " and " + language);
            }
        } else {
            fail(origin, line_no, "unknown rule kind: " + kind);
        }
    }

    ExtensionMap map;
    for (const auto& [ext, lang] : overrides) map.by_extension[ext] = lang;
    for (const auto& [ext, langs] : claims) {
        if (map.by_extension.count(ext)) continue; // resolved by override
        if (langs.size() > 1) {
            auto it = langs.begin();
            std::string a = *it++;
            std::string b = *it;
            throw FatalError(origin + ": extension " + ext + " claimed by both " + a + " and " +
                             b + " with no override");
        }
        map.by_extension[ext] = *langs.begin();
    }
    for (const auto& [name, lang] : filenames) map.by_filename[name] = lang;

    for (const auto& [ext, lang] : map.by_extension) {
        if (ext.find('.', 1) != std::string::npos) map.compound_extensions.push_back(ext);
    }
    std::sort(map.compound_extensions.begin(), map.compound_extensions.end(),
              [](const std::string& a, const std::string& b) {
                  return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
    return map;
}

ExtensionMap load_map(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FatalError("cannot open language map: " + file.string());
    return parse_map(in, file.filename().string());
}

std::optional<std::string> identify(std::string_view path, const ExtensionMap& map) {
    std::size_t slash = path.rfind('/');
    std::string_view base = slash == std::string_view::npos ? path : path.substr(slash + 1);
    if (base.empty()) return std::nullopt;

    if (auto it = map.by_filename.find(std::string(base)); it != map.by_filename.end()) {
        return it->second;
    }

    std::string lower = to_lower(base);
    for (const std::string& compound : map.compound_extensions) {
        if (lower.size() >= compound.size() && lower.ends_with(compound)) {
            return map.by_extension.at(compound);
        }
    }

    std::size_t dot = lower.rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    if (auto it = map.by_extension.find(lower.substr(dot)); it != map.by_extension.end()) {
        return it->second;
    }
    return std::nullopt;
}

} // namespace census
