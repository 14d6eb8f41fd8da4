#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace census {

// Validated extension/filename rules. Immutable after load; identify() is
// safe to call from any number of threads.
struct ExtensionMap {
    // Keys are lowercased and carry the leading dot. Compound extensions
    // (".blade.php") live here too and win over single-part matches.
    std::unordered_map<std::string, std::string> by_extension;
    std::unordered_map<std::string, std::string> by_filename; // exact final component
    std::vector<std::string> compound_extensions;             // sorted by length, longest first

    std::size_t language_count() const;
};

// Map file format, one rule per line:
//   ext <.extension> <language>
//   file <filename> <language>
//   override <.extension> <language>
// '#' starts a comment line; language names run to end of line.
// An extension claimed by two languages without an override is fatal.
ExtensionMap load_map(const std::filesystem::path& file);
ExtensionMap parse_map(std::istream& in, const std::string& origin);

// Path-based language lookup. Filename rules dominate extension rules;
// compound extensions are matched longest-suffix-first; the single-part
// extension is everything after the final dot of the final component,
// lowercased. Returns nullopt for unmatched paths (the Unknown label).
std::optional<std::string> identify(std::string_view path, const ExtensionMap& map);

} // namespace census
