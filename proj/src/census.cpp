#include "census/census.hpp"

#include "census/util.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

namespace census {

void CensusCounts::add(const TokenCount& tc) {
    tokens = checked_add(tokens, tc.tokens);
    files = checked_add(files, 1);
    lines = checked_add(lines, tc.lines);
    bytes = checked_add(bytes, tc.bytes);
}

void CensusCounts::add(const CensusCounts& other) {
    tokens = checked_add(tokens, other.tokens);
    files = checked_add(files, other.files);
    lines = checked_add(lines, other.lines);
    bytes = checked_add(bytes, other.bytes);
}

void LanguageCensus::record(const std::optional<std::string>& label, const TokenCount& tc) {
    if (label) {
        entries[*label].add(tc);
    } else {
        unknown.add(tc);
    }
}

LanguageCensus merge(const LanguageCensus& a, const LanguageCensus& b) {
    LanguageCensus out = a;
    for (const auto& [language, counts] : b.entries) {
        out.entries[language].add(counts);
    }
    out.unknown.add(b.unknown);
    return out;
}

std::vector<CensusRow> snapshot(const LanguageCensus& census) {
    std::vector<CensusRow> rows;
    rows.reserve(census.entries.size());
    for (const auto& [language, counts] : census.entries) {
        rows.push_back({language, counts});
    }
    std::sort(rows.begin(), rows.end(), [](const CensusRow& a, const CensusRow& b) {
        if (a.counts.tokens != b.counts.tokens) return a.counts.tokens > b.counts.tokens;
        return a.language < b.language;
    });
    return rows;
}

namespace {

const char kCensusHeader[] = "language,tokens,files,lines,bytes";

void check_language_name(const std::string& name) {
    if (name.empty() || name.find_first_of(",\r\n") != std::string::npos) {
        throw FatalError("language name not representable in census CSV: '" + name + "'");
    }
}

std::uint64_t parse_u64_field(const std::string& origin, std::size_t line_no,
                              std::string_view field) {
    if (field.empty()) {
        throw FatalError(origin + ":" + std::to_string(line_no) + ": empty numeric field");
    }
    std::uint64_t value = 0;
    for (char c : field) {
        if (c < '0' || c > '9') {
            throw FatalError(origin + ":" + std::to_string(line_no) +
                             ": malformed numeric field: " + std::string(field));
        }
        std::uint64_t d = static_cast<std::uint64_t>(c - '0');
        if (value > (UINT64_MAX - d) / 10) {
            throw FatalError(origin + ":" + std::to_string(line_no) + ": numeric field overflow");
        }
        value = value * 10 + d;
    }
    return value;
}

} // namespace

void write_census_csv(std::ostream& out, const std::vector<CensusRow>& rows) {
    out << kCensusHeader << '\n';
    for (const CensusRow& row : rows) {
        check_language_name(row.language);
        out << row.language << ',' << row.counts.tokens << ',' << row.counts.files << ','
            << row.counts.lines << ',' << row.counts.bytes << '\n';
    }
}

std::vector<CensusRow> read_census_csv(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw FatalError(origin + ": empty census file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCensusHeader) {
        throw FatalError(origin + ":1: expected header '" + kCensusHeader + "'");
    }

    std::vector<CensusRow> rows;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        // Split off the four numeric fields from the right; the language name
        // is whatever precedes them (names never contain commas on write, but
        // reading this way keeps the parse unambiguous).
        std::array<std::size_t, 4> commas{};
        std::size_t pos = line.size();
        for (int i = 3; i >= 0; --i) {
            pos = line.rfind(',', pos == 0 ? 0 : pos - 1);
            if (pos == std::string::npos) {
                throw FatalError(origin + ":" + std::to_string(line_no) + ": expected 5 fields");
            }
            commas[static_cast<std::size_t>(i)] = pos;
        }
        CensusRow row;
        row.language = line.substr(0, commas[0]);
        if (row.language.empty()) {
            throw FatalError(origin + ":" + std::to_string(line_no) + ": empty language name");
        }
        std::string_view view = line;
        row.counts.tokens =
            parse_u64_field(origin, line_no, view.substr(commas[0] + 1, commas[1] - commas[0] - 1));
        row.counts.files =
            parse_u64_field(origin, line_no, view.substr(commas[1] + 1, commas[2] - commas[1] - 1));
        row.counts.lines =
            parse_u64_field(origin, line_no, view.substr(commas[2] + 1, commas[3] - commas[2] - 1));
        row.counts.bytes = parse_u64_field(origin, line_no, view.substr(commas[3] + 1));
        if (!seen.insert(row.language).second) {
            throw FatalError(origin + ":" + std::to_string(line_no) +
                             ": duplicate language: " + row.language);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CensusRow> read_census_csv_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FatalError("cannot open census file: " + file.string());
    return read_census_csv(in, file.filename().string());
}

} // namespace census
