#pragma once

#include "census/bpe.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace census {

struct CensusCounts {
    std::uint64_t tokens = 0;
    std::uint64_t files = 0;
    std::uint64_t lines = 0;
    std::uint64_t bytes = 0;

    bool operator==(const CensusCounts&) const = default;
    void add(const TokenCount& tc);
    void add(const CensusCounts& other);
};

// Per-language counters. record() is single-owner; combine instances only
// via merge(), which is commutative and associative with the empty census
// as identity, so results are independent of work partitioning.
struct LanguageCensus {
    std::map<std::string, CensusCounts> entries;
    CensusCounts unknown; // measured but excluded from classification

    // nullopt labels route to the unknown bundle.
    void record(const std::optional<std::string>& label, const TokenCount& tc);
};

LanguageCensus merge(const LanguageCensus& a, const LanguageCensus& b);

struct CensusRow {
    std::string language;
    CensusCounts counts;

    bool operator==(const CensusRow&) const = default;
};

// Deterministic table: descending tokens, ties broken by ascending name.
std::vector<CensusRow> snapshot(const LanguageCensus& census);

// CSV with header "language,tokens,files,lines,bytes", rows in snapshot order.
void write_census_csv(std::ostream& out, const std::vector<CensusRow>& rows);
std::vector<CensusRow> read_census_csv(std::istream& in, const std::string& origin);
std::vector<CensusRow> read_census_csv_file(const std::filesystem::path& file);

} // namespace census
