#include "census/stats.hpp"

#include "census/util.hpp"

#include <algorithm>
#include <cmath>

namespace census {

void TierThresholds::validate() const {
    if (!(t3_min > t2_min && t2_min > t1_min && t1_min > 0)) {
        throw ConfigError("tier thresholds must satisfy t3 > t2 > t1 > 0 (got " +
                          std::to_string(t3_min) + " / " + std::to_string(t2_min) + " / " +
                          std::to_string(t1_min) + ")");
    }
}

int assign_tier(std::uint64_t tokens, const TierThresholds& th) {
    if (tokens >= th.t3_min) return 3;
    if (tokens >= th.t2_min) return 2;
    if (tokens >= th.t1_min) return 1;
    return 0;
}

const char* tier_name(int tier) {
    switch (tier) {
    case 0: return "Scarce";
    case 1: return "Low";
    case 2: return "Medium";
    case 3: return "High";
    default: throw ConfigError("tier out of range: " + std::to_string(tier));
    }
}

TierSummary tier_summary(const std::vector<CensusRow>& table, const TierThresholds& th) {
    th.validate();
    if (table.empty()) throw FatalError("tier summary over an empty census");
    TierSummary out;
    out.total_languages = table.size();
    for (const CensusRow& row : table) {
        int tier = assign_tier(row.counts.tokens, th);
        TierBucket& bucket = out.tiers[static_cast<std::size_t>(tier)];
        bucket.n_languages += 1;
        bucket.total_tokens = checked_add(bucket.total_tokens, row.counts.tokens);
        out.total_tokens = checked_add(out.total_tokens, row.counts.tokens);
    }
    for (TierBucket& bucket : out.tiers) {
        bucket.language_share =
            static_cast<double>(bucket.n_languages) / static_cast<double>(out.total_languages);
        bucket.token_share = out.total_tokens == 0
                                 ? 0.0
                                 : static_cast<double>(bucket.total_tokens) /
                                       static_cast<double>(out.total_tokens);
    }
    return out;
}

namespace {

std::uint64_t sum_checked(const std::vector<std::uint64_t>& values) {
    std::uint64_t total = 0;
    for (std::uint64_t v : values) total = checked_add(total, v);
    return total;
}

} // namespace

double gini(const std::vector<std::uint64_t>& values) {
    if (values.empty()) throw FatalError("gini of an empty list");
    std::uint64_t total = sum_checked(values);
    if (total == 0) throw FatalError("gini undefined for all-zero values");
    std::vector<std::uint64_t> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        // 1-based index in the ascending order
        double weight = 2.0 * static_cast<double>(i + 1) - n - 1.0;
        acc += weight * static_cast<double>(sorted[i]);
    }
    return acc / (n * static_cast<double>(total));
}

double coefficient_of_variation(const std::vector<std::uint64_t>& values) {
    if (values.empty()) throw FatalError("coefficient of variation of an empty list");
    std::uint64_t total = sum_checked(values);
    if (total == 0) throw FatalError("coefficient of variation undefined for zero mean");
    const double n = static_cast<double>(values.size());
    const double mean = static_cast<double>(total) / n;
    double sq = 0.0;
    for (std::uint64_t v : values) {
        double d = static_cast<double>(v) - mean;
        sq += d * d;
    }
    return std::sqrt(sq / n) / mean;
}

std::pair<double, double> mean_median(std::vector<std::uint64_t> values) {
    if (values.empty()) throw FatalError("mean/median of an empty list");
    std::uint64_t total = sum_checked(values);
    double mean = static_cast<double>(total) / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    double median;
    if (n % 2 == 1) {
        median = static_cast<double>(values[n / 2]);
    } else {
        median = (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
    }
    return {mean, median};
}

std::vector<LorenzPoint> lorenz_points(std::vector<std::uint64_t> values) {
    if (values.empty()) throw FatalError("Lorenz curve of an empty list");
    std::uint64_t total = sum_checked(values);
    if (total == 0) throw FatalError("Lorenz curve undefined for zero total");
    std::sort(values.begin(), values.end());
    std::vector<LorenzPoint> points;
    points.reserve(values.size() + 1);
    points.push_back({0.0, 0.0});
    std::uint64_t cumulative = 0;
    const double n = static_cast<double>(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        cumulative += values[k];
        points.push_back({static_cast<double>(k + 1) / n,
                          static_cast<double>(cumulative) / static_cast<double>(total)});
    }
    return points;
}

std::vector<SurvivalPoint> ecdf_survival(const std::vector<std::uint64_t>& values,
                                         const std::vector<double>& grid) {
    if (values.empty()) throw FatalError("survival curve of an empty list");
    if (grid.empty()) throw FatalError("survival grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0.0 || (i > 0 && grid[i] <= grid[i - 1])) {
            throw FatalError("survival grid must be strictly increasing and positive");
        }
    }
    std::vector<SurvivalPoint> points;
    points.reserve(grid.size());
    const double n = static_cast<double>(values.size());
    for (double threshold : grid) {
        std::uint64_t surviving = 0;
        for (std::uint64_t v : values) {
            // long double holds every uint64 exactly on x86-64
            if (static_cast<long double>(v) >= static_cast<long double>(threshold)) ++surviving;
        }
        points.push_back({threshold, static_cast<double>(surviving) / n});
    }
    return points;
}

std::vector<double> default_survival_grid() {
    std::vector<double> grid;
    // 1e6 .. 1e12, five points per decade
    for (int step = 0; step <= 30; ++step) {
        grid.push_back(std::pow(10.0, 6.0 + static_cast<double>(step) / 5.0));
    }
    return grid;
}

std::pair<std::vector<RankedRow>, std::vector<RankedRow>>
top_bottom(const std::vector<CensusRow>& table, std::uint64_t k, const TierThresholds& th) {
    th.validate();
    if (k < 1) throw ConfigError("top/bottom k must be >= 1");
    auto ranked = [&](std::size_t index) {
        const CensusRow& row = table[index];
        return RankedRow{index + 1, row.language, row.counts.tokens,
                         assign_tier(row.counts.tokens, th)};
    };
    std::size_t take = std::min<std::size_t>(table.size(), k);
    std::vector<RankedRow> top, bottom;
    for (std::size_t i = 0; i < take; ++i) top.push_back(ranked(i));
    for (std::size_t i = table.size() - take; i < table.size(); ++i) bottom.push_back(ranked(i));
    return {std::move(top), std::move(bottom)};
}

StatsSummary group_stats(const std::vector<std::uint64_t>& values,
                         const std::vector<double>& grid) {
    StatsSummary out;
    out.n_languages = values.size();
    if (values.empty()) return out;
    out.total_tokens = sum_checked(values);
    if (out.total_tokens == 0) return out; // degenerate grouping, reported absent
    out.present = true;
    out.gini = gini(values);
    out.cv = coefficient_of_variation(values);
    std::tie(out.mean, out.median) = mean_median(values);
    out.lorenz = lorenz_points(values);
    out.survival = ecdf_survival(values, grid);
    return out;
}

} // namespace census
