#pragma once

#include "census/pipeline.hpp"
#include "census/stats.hpp"

#include <filesystem>
#include <vector>

namespace census {

extern const char kToolName[];
extern const char kToolVersion[];

struct ScanCommand {
    ScanConfig scan;
    std::filesystem::path out_dir;
};

struct ClassifyCommand {
    std::filesystem::path census_file;
    TierThresholds thresholds;
    std::uint64_t top_bottom_k = 10;
    std::filesystem::path out_dir;
};

struct StatsCommand {
    std::filesystem::path census_file;
    TierThresholds thresholds;
    std::vector<double> survival_grid; // empty -> default grid
    std::filesystem::path out_dir;
};

struct ReportCommand {
    std::filesystem::path census_file;
    TierThresholds thresholds;
    std::uint64_t top_bottom_k = 10;
    std::filesystem::path out_dir;
};

// Writes census.csv, dedup_stats.json and run_manifest.json into out_dir.
void cmd_scan(const ScanCommand& cmd);

// Writes classification.csv, tier_summary.csv and top_bottom.csv.
void cmd_classify(const ClassifyCommand& cmd);

// Writes stats_summary.csv plus lorenz_<group>.dat / survival_<group>.dat
// for every non-degenerate grouping (overall and each populated tier).
void cmd_stats(const StatsCommand& cmd);

// classify + stats + a combined human-readable report.txt.
void cmd_report(const ReportCommand& cmd);

} // namespace census
