#include "census/pipeline.hpp"

#include "census/bpe.hpp"
#include "census/lang_id.hpp"
#include "census/util.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <memory>
#include <thread>

namespace census {

void ScanConfig::validate() const {
    if (corpora.empty()) throw ConfigError("at least one corpus binding is required");
    if (workers < 1) throw ConfigError("worker count must be >= 1");
    if (vocab_file.has_value() != merges_file.has_value()) {
        throw ConfigError("--vocab and --merges must be given together");
    }
    if (map_file.empty()) throw ConfigError("no language map configured");
}

namespace {

constexpr std::size_t kBatchItems = 512;
constexpr std::uint64_t kBatchBytes = 64ull << 20;

// Runs fn(index, worker) over [0, n) on up to `workers` threads. Which worker
// takes which index is unspecified; callers must only combine worker-local
// state with order-independent merges.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, unsigned)>& fn) {
    if (n == 0) return;
    unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (used <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> threads;
    threads.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
                fn(i, w);
            }
        });
    }
    for (std::thread& t : threads) t.join();
}

std::unique_ptr<RecordSource> open_source(const CorpusBinding& binding,
                                          std::uint64_t max_file_bytes) {
    switch (binding.kind) {
    case CorpusBinding::Kind::kDirectory:
        return std::make_unique<DirectorySource>(binding.source, binding.id, max_file_bytes);
    case CorpusBinding::Kind::kRecordDump:
        return std::make_unique<RecordDumpSource>(binding.source, binding.id);
    }
    throw ConfigError("unknown corpus binding kind");
}

} // namespace

ScanOutcome run_scan(const ScanConfig& config) {
    config.validate();

    ExtensionMap map = load_map(config.map_file);
    std::optional<BpeModel> model;
    if (config.vocab_file) {
        model = BpeModel::load(*config.vocab_file, *config.merges_file);
    }

    DedupLedger ledger(config.dedup_shards);
    if (config.ledger_dir && std::filesystem::is_directory(*config.ledger_dir)) {
        ledger.preload(*config.ledger_dir);
    }

    std::vector<LanguageCensus> worker_census(config.workers);
    ScanOutcome outcome;

    for (const CorpusBinding& binding : config.corpora) {
        auto source = open_source(binding, config.max_file_bytes);

        bool exhausted = false;
        while (!exhausted) {
            std::vector<FileRecord> batch;
            std::uint64_t batch_bytes = 0;
            while (batch.size() < kBatchItems && batch_bytes < kBatchBytes) {
                auto rec = source->next();
                if (!rec) {
                    exhausted = true;
                    break;
                }
                batch_bytes += rec->byte_size();
                batch.push_back(std::move(*rec));
            }
            if (batch.empty()) break;

            std::vector<ContentDigest> digests(batch.size());
            parallel_for(batch.size(), config.workers,
                         [&](std::size_t i, unsigned) { digests[i] = digest(batch[i].content); });

            // Admission happens in stream order: first-seen attribution is
            // deterministic regardless of worker count.
            std::vector<char> admitted(batch.size(), 0);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                admitted[i] = ledger.admit(digests[i], binding.id) ? 1 : 0;
            }

            parallel_for(batch.size(), config.workers, [&](std::size_t i, unsigned w) {
                if (!admitted[i]) return;
                const FileRecord& rec = batch[i];
                TokenCount tc = model ? model->count_tokens(rec.content)
                                      : count_tokens_whitespace(rec.content);
                worker_census[w].record(identify(rec.path, map), tc);
            });
        }

        outcome.ingest.merge(source->stats());
    }

    LanguageCensus total;
    for (const LanguageCensus& part : worker_census) total = merge(total, part);
    outcome.census = std::move(total);
    outcome.dedup = ledger.stats();
    outcome.tokenizer_kind = model ? "bpe" : "whitespace";

    if (config.ledger_dir) ledger.save(*config.ledger_dir);
    return outcome;
}

} // namespace census
