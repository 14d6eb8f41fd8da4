#include "census/cli.hpp"
#include "census/util.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace {

unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// "id=path" -> binding. The id must be non-empty and free of '='.
census::CorpusBinding parse_binding(const std::string& value,
                                    census::CorpusBinding::Kind kind) {
    std::size_t eq = value.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= value.size()) {
        throw census::ConfigError("expected id=path, got: " + value);
    }
    census::CorpusBinding binding;
    binding.kind = kind;
    binding.id = value.substr(0, eq);
    binding.source = value.substr(eq + 1);
    return binding;
}

// Corpora must be processed in the order the bindings appear on the command
// line, across both flag kinds. CLI11 keeps per-option order only, so the
// interleaved order is recovered from argv.
std::vector<census::CorpusBinding> bindings_in_argv_order(int argc, char** argv) {
    std::vector<census::CorpusBinding> out;
    for (int i = 0; i < argc; ++i) {
        std::string arg = argv[i];
        census::CorpusBinding::Kind kind;
        std::string value;
        if (arg == "--corpus" || arg == "--records") {
            kind = arg == "--corpus" ? census::CorpusBinding::Kind::kDirectory
                                     : census::CorpusBinding::Kind::kRecordDump;
            if (i + 1 >= argc) throw census::ConfigError(arg + " requires a value");
            value = argv[++i];
        } else if (arg.starts_with("--corpus=")) {
            kind = census::CorpusBinding::Kind::kDirectory;
            value = arg.substr(9);
        } else if (arg.starts_with("--records=")) {
            kind = census::CorpusBinding::Kind::kRecordDump;
            value = arg.substr(10);
        } else {
            continue;
        }
        out.push_back(parse_binding(value, kind));
    }
    return out;
}

census::TierThresholds parse_thresholds(const std::string& t3, const std::string& t2,
                                        const std::string& t1) {
    census::TierThresholds th;
    if (!t3.empty()) th.t3_min = census::parse_token_count(t3);
    if (!t2.empty()) th.t2_min = census::parse_token_count(t2);
    if (!t1.empty()) th.t1_min = census::parse_token_count(t1);
    th.validate();
    return th;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus resource accounting: dedup, tag, count, classify."};
    app.set_version_flag("--version", std::string(census::kToolVersion));
    app.require_subcommand(1);

    // scan
    auto* scan = app.add_subcommand("scan", "Dedup, tag and token-count corpora into a census");
    std::vector<std::string> corpus_flags, records_flags;
    scan->add_option("--corpus", corpus_flags, "Directory corpus binding id=path");
    scan->add_option("--records", records_flags, "Record-dump corpus binding id=path");
    std::string scan_map;
    scan->add_option("--map", scan_map, "Language map file")->envname("CODE_CENSUS_MAP");
    std::string vocab, merges;
    scan->add_option("--vocab", vocab, "BPE vocab file (token<TAB>id per line)");
    scan->add_option("--merges", merges, "BPE merges file (left right per line)");
    unsigned workers = default_workers();
    scan->add_option("--workers", workers, "Parallel workers");
    std::uint64_t max_file_bytes = census::kDefaultMaxFileBytes;
    scan->add_option("--max-file-bytes", max_file_bytes, "Skip files larger than this");
    std::size_t dedup_shards = 256;
    scan->add_option("--dedup-shards", dedup_shards, "Dedup ledger shard count");
    std::string ledger_dir;
    scan->add_option("--ledger", ledger_dir,
                     "Ledger directory: preloaded if present, saved after the scan");
    std::string scan_out = ".";
    scan->add_option("--out", scan_out, "Output directory");

    // shared classify/stats/report options
    std::string census_file, t3, t2, t1;
    std::string out_dir = ".";
    std::uint64_t top_k = 10;
    auto add_common = [&](CLI::App* sub, bool with_k) {
        sub->add_option("census", census_file, "Census CSV produced by scan")->required();
        sub->add_option("--tier3", t3, "High-tier minimum tokens (default 100B)");
        sub->add_option("--tier2", t2, "Medium-tier minimum tokens (default 10B)");
        sub->add_option("--tier1", t1, "Low-tier minimum tokens (default 1B)");
        sub->add_option("--out", out_dir, "Output directory");
        if (with_k) sub->add_option("--top-k", top_k, "Rows in the top/bottom table");
    };
    auto* classify = app.add_subcommand("classify", "Assign tiers and summarize them");
    add_common(classify, true);
    auto* stats = app.add_subcommand("stats", "Inequality statistics per tier and overall");
    add_common(stats, false);
    auto* report = app.add_subcommand("report", "classify + stats + readable summary");
    add_common(report, true);

    try {
        app.parse(argc, argv);

        if (scan->parsed()) {
            census::ScanCommand cmd;
            cmd.scan.corpora = bindings_in_argv_order(argc, argv);
            cmd.scan.map_file = scan_map;
            if (!vocab.empty()) cmd.scan.vocab_file = vocab;
            if (!merges.empty()) cmd.scan.merges_file = merges;
            cmd.scan.workers = workers;
            cmd.scan.max_file_bytes = max_file_bytes;
            cmd.scan.dedup_shards = dedup_shards;
            if (!ledger_dir.empty()) cmd.scan.ledger_dir = ledger_dir;
            cmd.out_dir = scan_out;
            census::cmd_scan(cmd);
        } else if (classify->parsed()) {
            census::ClassifyCommand cmd;
            cmd.census_file = census_file;
            cmd.thresholds = parse_thresholds(t3, t2, t1);
            cmd.top_bottom_k = top_k;
            cmd.out_dir = out_dir;
            census::cmd_classify(cmd);
        } else if (stats->parsed()) {
            census::StatsCommand cmd;
            cmd.census_file = census_file;
            cmd.thresholds = parse_thresholds(t3, t2, t1);
            cmd.out_dir = out_dir;
            census::cmd_stats(cmd);
        } else if (report->parsed()) {
            census::ReportCommand cmd;
            cmd.census_file = census_file;
            cmd.thresholds = parse_thresholds(t3, t2, t1);
            cmd.top_bottom_k = top_k;
            cmd.out_dir = out_dir;
            census::cmd_report(cmd);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit clean; bad flags are config errors
    } catch (const census::ConfigError& e) {
        std::cerr << census::kToolName << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << census::kToolName << ": " << e.what() << '\n';
        return 1;
    }
}
