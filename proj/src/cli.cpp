#include "census/cli.hpp"

#include "census/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace census {

const char kToolName[] = "code-census";
const char kToolVersion[] = "0.1.0";

namespace {

std::ofstream open_output(const fs::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw FatalError("cannot write output file: " + file.string());
    return out;
}

void write_text_file(const fs::path& file, const std::string& text) {
    auto out = open_output(file);
    out << text;
    if (!out) throw FatalError("write error: " + file.string());
}

std::string lower_name(int tier) {
    std::string name = tier_name(tier);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return name;
}

// Percent of a ratio, rounded half-up to one decimal (summary precision).
std::string percent1(double ratio) {
    return format_fixed(round_half_up(ratio * 100.0, 1), 1);
}

std::string percent4(double ratio) {
    return format_fixed(ratio * 100.0, 4);
}

ordered_json counts_json(const CensusCounts& c) {
    return ordered_json{{"tokens", c.tokens}, {"files", c.files}, {"lines", c.lines},
                        {"bytes", c.bytes}};
}

ordered_json counter_map_json(const std::map<std::string, std::uint64_t>& m) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, value] : m) out[key] = value;
    return out;
}

void dump_json(const fs::path& file, const ordered_json& j) {
    auto out = open_output(file);
    out << j.dump(2) << '\n';
    if (!out) throw FatalError("write error: " + file.string());
}

struct GroupValues {
    std::string name; // "overall", "high", "medium", "low", "scarce"
    std::vector<std::uint64_t> values;
};

std::vector<GroupValues> make_groupings(const std::vector<CensusRow>& table,
                                        const TierThresholds& th) {
    std::vector<GroupValues> groups(5);
    groups[0].name = "overall";
    for (int tier = 3; tier >= 0; --tier) {
        groups[static_cast<std::size_t>(4 - tier)].name = lower_name(tier);
    }
    for (const CensusRow& row : table) {
        groups[0].values.push_back(row.counts.tokens);
        int tier = assign_tier(row.counts.tokens, th);
        groups[static_cast<std::size_t>(4 - tier)].values.push_back(row.counts.tokens);
    }
    return groups;
}

} // namespace

void cmd_scan(const ScanCommand& cmd) {
    cmd.scan.validate();
    fs::create_directories(cmd.out_dir);

    ScanOutcome outcome = run_scan(cmd.scan);
    auto rows = snapshot(outcome.census);

    {
        auto out = open_output(cmd.out_dir / "census.csv");
        write_census_csv(out, rows);
        if (!out) throw FatalError("write error: census.csv");
    }

    ordered_json dedup_stats{
        {"dedup",
         {{"total_seen", outcome.dedup.total_seen},
          {"unique", outcome.dedup.unique},
          {"duplicates", outcome.dedup.duplicates},
          {"duplicates_per_corpus", counter_map_json(outcome.dedup.duplicates_per_corpus)}}},
        {"ingest",
         {{"files_emitted", outcome.ingest.files_emitted},
          {"files_skipped", outcome.ingest.files_skipped},
          {"decode_errors", outcome.ingest.decode_errors},
          {"per_corpus", counter_map_json(outcome.ingest.per_corpus)}}},
        {"unknown", counts_json(outcome.census.unknown)},
        {"tokenizer", outcome.tokenizer_kind}};
    dump_json(cmd.out_dir / "dedup_stats.json", dedup_stats);

    ordered_json corpora = ordered_json::array();
    for (const CorpusBinding& binding : cmd.scan.corpora) {
        corpora.push_back({{"id", binding.id},
                           {"kind", binding.kind == CorpusBinding::Kind::kDirectory
                                        ? "directory"
                                        : "records"},
                           {"source", binding.source.string()}});
    }
    ordered_json tokenizer;
    if (cmd.scan.vocab_file) {
        tokenizer = ordered_json{
            {"kind", "bpe"},
            {"vocab",
             {{"path", cmd.scan.vocab_file->string()},
              {"sha256", to_hex(digest_file(*cmd.scan.vocab_file))}}},
            {"merges",
             {{"path", cmd.scan.merges_file->string()},
              {"sha256", to_hex(digest_file(*cmd.scan.merges_file))}}}};
    } else {
        tokenizer = ordered_json{{"kind", "whitespace"}};
    }
    ordered_json manifest{
        {"tool", kToolName},
        {"version", kToolVersion},
        {"corpora", corpora},
        {"map",
         {{"path", cmd.scan.map_file.string()}, {"sha256", to_hex(digest_file(cmd.scan.map_file))}}},
        {"tokenizer", tokenizer},
        {"max_file_bytes", cmd.scan.max_file_bytes},
        {"workers", cmd.scan.workers},
        {"dedup_shards", cmd.scan.dedup_shards},
        {"outputs", {{"census", "census.csv"}, {"dedup_stats", "dedup_stats.json"}}}};
    dump_json(cmd.out_dir / "run_manifest.json", manifest);
}

namespace {

std::string classification_csv(const std::vector<CensusRow>& rows, const TierThresholds& th,
                               const TierSummary& summary) {
    std::ostringstream out;
    out << "rank,language,tokens,tier,resource,token_share_pct,tier_share_pct\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const CensusRow& row = rows[i];
        int tier = assign_tier(row.counts.tokens, th);
        const TierBucket& bucket = summary.tiers[static_cast<std::size_t>(tier)];
        double overall = summary.total_tokens == 0
                             ? 0.0
                             : static_cast<double>(row.counts.tokens) /
                                   static_cast<double>(summary.total_tokens);
        double within = bucket.total_tokens == 0
                            ? 0.0
                            : static_cast<double>(row.counts.tokens) /
                                  static_cast<double>(bucket.total_tokens);
        out << (i + 1) << ',' << row.language << ',' << row.counts.tokens << ',' << tier << ','
            << tier_name(tier) << ',' << percent4(overall) << ',' << percent4(within) << '\n';
    }
    return out.str();
}

std::string tier_summary_csv(const TierSummary& summary) {
    std::ostringstream out;
    out << "tier,resource,languages,tokens,language_share_pct,token_share_pct\n";
    for (int tier = 3; tier >= 0; --tier) {
        const TierBucket& bucket = summary.tiers[static_cast<std::size_t>(tier)];
        out << tier << ',' << tier_name(tier) << ',' << bucket.n_languages << ','
            << bucket.total_tokens << ',' << percent1(bucket.language_share) << ','
            << percent1(bucket.token_share) << '\n';
    }
    return out.str();
}

std::string top_bottom_csv(const std::vector<CensusRow>& rows, std::uint64_t k,
                           const TierThresholds& th) {
    auto [top, bottom] = top_bottom(rows, k, th);
    std::ostringstream out;
    out << "section,rank,language,tokens,tier,resource\n";
    for (const RankedRow& row : top) {
        out << "top," << row.rank << ',' << row.language << ',' << row.tokens << ',' << row.tier
            << ',' << tier_name(row.tier) << '\n';
    }
    for (const RankedRow& row : bottom) {
        out << "bottom," << row.rank << ',' << row.language << ',' << row.tokens << ',' << row.tier
            << ',' << tier_name(row.tier) << '\n';
    }
    return out.str();
}

} // namespace

void cmd_classify(const ClassifyCommand& cmd) {
    cmd.thresholds.validate();
    fs::create_directories(cmd.out_dir);
    auto rows = read_census_csv_file(cmd.census_file);
    if (rows.empty()) throw FatalError("census has no classified languages: nothing to classify");
    TierSummary summary = tier_summary(rows, cmd.thresholds);

    write_text_file(cmd.out_dir / "classification.csv",
                    classification_csv(rows, cmd.thresholds, summary));
    write_text_file(cmd.out_dir / "tier_summary.csv", tier_summary_csv(summary));
    write_text_file(cmd.out_dir / "top_bottom.csv",
                    top_bottom_csv(rows, cmd.top_bottom_k, cmd.thresholds));
}

namespace {

std::string stats_summary_csv(const std::vector<GroupValues>& groups,
                              const std::vector<StatsSummary>& stats) {
    std::ostringstream out;
    out << "grouping,n_languages,total_tokens,status,gini,cv,mean,median\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const StatsSummary& s = stats[i];
        out << groups[i].name << ',' << s.n_languages << ',' << s.total_tokens << ',';
        if (s.present) {
            out << "present," << format_fixed(s.gini, 6) << ',' << format_fixed(s.cv, 6) << ','
                << format_fixed(s.mean, 3) << ',' << format_fixed(s.median, 3);
        } else {
            out << "absent,,,,";
        }
        out << '\n';
    }
    return out.str();
}

std::string lorenz_dat(const StatsSummary& s) {
    std::ostringstream out;
    for (const LorenzPoint& p : s.lorenz) {
        out << format_fixed(p.population_share, 12) << ' ' << format_fixed(p.token_share, 12)
            << '\n';
    }
    return out.str();
}

std::string survival_dat(const StatsSummary& s) {
    std::ostringstream out;
    char threshold[40];
    for (const SurvivalPoint& p : s.survival) {
        std::snprintf(threshold, sizeof(threshold), "%.10e", p.threshold);
        out << threshold << ' ' << format_fixed(p.surviving_fraction, 12) << '\n';
    }
    return out.str();
}

void run_stats(const StatsCommand& cmd) {
    cmd.thresholds.validate();
    fs::create_directories(cmd.out_dir);
    auto rows = read_census_csv_file(cmd.census_file);
    if (rows.empty()) throw FatalError("census has no classified languages: nothing to analyze");
    std::vector<double> grid = cmd.survival_grid.empty() ? default_survival_grid()
                                                         : cmd.survival_grid;

    auto groups = make_groupings(rows, cmd.thresholds);
    std::vector<StatsSummary> stats;
    stats.reserve(groups.size());
    for (const GroupValues& group : groups) stats.push_back(group_stats(group.values, grid));

    write_text_file(cmd.out_dir / "stats_summary.csv", stats_summary_csv(groups, stats));
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (!stats[i].present) continue;
        write_text_file(cmd.out_dir / ("lorenz_" + groups[i].name + ".dat"), lorenz_dat(stats[i]));
        write_text_file(cmd.out_dir / ("survival_" + groups[i].name + ".dat"),
                        survival_dat(stats[i]));
    }
}

} // namespace

void cmd_stats(const StatsCommand& cmd) { run_stats(cmd); }

void cmd_report(const ReportCommand& cmd) {
    ClassifyCommand classify{cmd.census_file, cmd.thresholds, cmd.top_bottom_k, cmd.out_dir};
    cmd_classify(classify);
    StatsCommand stats{cmd.census_file, cmd.thresholds, {}, cmd.out_dir};
    cmd_stats(stats);

    auto rows = read_census_csv_file(cmd.census_file);
    TierSummary summary = tier_summary(rows, cmd.thresholds);
    auto groups = make_groupings(rows, cmd.thresholds);
    auto grid = default_survival_grid();

    std::ostringstream out;
    out << kToolName << " report\n";
    out << "========================\n\n";
    out << "Languages: " << summary.total_languages << "\n";
    out << "Total tokens: " << summary.total_tokens << "\n\n";

    out << "Tier summary (languages / tokens / language share / token share)\n";
    for (int tier = 3; tier >= 0; --tier) {
        const TierBucket& bucket = summary.tiers[static_cast<std::size_t>(tier)];
        out << "  " << tier << " " << tier_name(tier) << ": " << bucket.n_languages << " / "
            << bucket.total_tokens << " / " << percent1(bucket.language_share) << "% / "
            << percent1(bucket.token_share) << "%\n";
    }
    out << '\n';

    auto [top, bottom] = top_bottom(rows, cmd.top_bottom_k, cmd.thresholds);
    out << "Top " << top.size() << " languages by tokens\n";
    for (const RankedRow& row : top) {
        out << "  " << row.rank << ". " << row.language << " (" << row.tokens << ", "
            << tier_name(row.tier) << ")\n";
    }
    out << "Bottom " << bottom.size() << " languages by tokens\n";
    for (const RankedRow& row : bottom) {
        out << "  " << row.rank << ". " << row.language << " (" << row.tokens << ", "
            << tier_name(row.tier) << ")\n";
    }
    out << '\n';

    out << "Within-group statistics\n";
    for (const GroupValues& group : groups) {
        StatsSummary s = group_stats(group.values, grid);
        out << "  " << group.name << ": ";
        if (s.present) {
            out << "n=" << s.n_languages << " tokens=" << s.total_tokens
                << " gini=" << format_fixed(s.gini, 4) << " cv=" << format_fixed(s.cv, 4)
                << " mean=" << format_fixed(s.mean, 1) << " median=" << format_fixed(s.median, 1)
                << "\n";
        } else {
            out << "absent (no languages with tokens)\n";
        }
    }

    write_text_file(cmd.out_dir / "report.txt", out.str());
}

} // namespace census
