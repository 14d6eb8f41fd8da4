#pragma once

#include "census/census.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace census {

// Four-tier boundaries, inclusive on the lower edge. Defaults: 100B / 10B / 1B.
struct TierThresholds {
    std::uint64_t t3_min = 100'000'000'000ull;
    std::uint64_t t2_min = 10'000'000'000ull;
    std::uint64_t t1_min = 1'000'000'000ull;

    void validate() const; // throws ConfigError unless t3 > t2 > t1 > 0
};

// 3 = High, 2 = Medium, 1 = Low, 0 = Scarce.
int assign_tier(std::uint64_t tokens, const TierThresholds& th);
const char* tier_name(int tier);

struct TierBucket {
    std::uint64_t n_languages = 0;
    std::uint64_t total_tokens = 0;
    double language_share = 0.0;
    double token_share = 0.0;
};

struct TierSummary {
    std::array<TierBucket, 4> tiers; // indexed by tier number
    std::uint64_t total_languages = 0;
    std::uint64_t total_tokens = 0;
};

// Shares are relative to the classified languages in the table. Empty table
// is an error; a zero grand total leaves all token shares at zero.
TierSummary tier_summary(const std::vector<CensusRow>& table, const TierThresholds& th);

// Population Gini over non-negative values; at least one must be positive.
double gini(const std::vector<std::uint64_t>& values);

// Population standard deviation over mean; mean must be positive.
double coefficient_of_variation(const std::vector<std::uint64_t>& values);

// (arithmetic mean, median); median averages the two middle values for even n.
std::pair<double, double> mean_median(std::vector<std::uint64_t> values);

struct LorenzPoint {
    double population_share;
    double token_share;
};

// Ascending-sorted cumulative shares from (0,0) to (1,1); total must be > 0.
std::vector<LorenzPoint> lorenz_points(std::vector<std::uint64_t> values);

struct SurvivalPoint {
    double threshold;
    double surviving_fraction;
};

// Fraction of values >= each threshold. Grid must be non-empty, strictly
// increasing, and positive.
std::vector<SurvivalPoint> ecdf_survival(const std::vector<std::uint64_t>& values,
                                         const std::vector<double>& grid);

// Log-spaced thresholds 1e6..1e12, five per decade.
std::vector<double> default_survival_grid();

struct RankedRow {
    std::uint64_t rank; // 1-based within the snapshot order
    std::string language;
    std::uint64_t tokens;
    int tier;
};

// First and last k rows of the snapshot-ordered table (whole table when k
// exceeds its size). k must be >= 1.
std::pair<std::vector<RankedRow>, std::vector<RankedRow>>
top_bottom(const std::vector<CensusRow>& table, std::uint64_t k, const TierThresholds& th);

// Per-grouping statistics bundle. A grouping with no values or a zero total
// is reported absent rather than failing.
struct StatsSummary {
    bool present = false;
    std::uint64_t n_languages = 0;
    std::uint64_t total_tokens = 0;
    double gini = 0.0;
    double cv = 0.0;
    double mean = 0.0;
    double median = 0.0;
    std::vector<LorenzPoint> lorenz;
    std::vector<SurvivalPoint> survival;
};

StatsSummary group_stats(const std::vector<std::uint64_t>& values,
                         const std::vector<double>& grid);

} // namespace census
