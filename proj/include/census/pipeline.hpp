#pragma once

#include "census/census.hpp"
#include "census/dedup.hpp"
#include "census/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace census {

struct CorpusBinding {
    enum class Kind { kDirectory, kRecordDump };
    Kind kind;
    std::string id;
    std::filesystem::path source;
};

struct ScanConfig {
    std::vector<CorpusBinding> corpora; // processed in this order
    std::filesystem::path map_file;
    std::optional<std::filesystem::path> vocab_file;
    std::optional<std::filesystem::path> merges_file;
    std::uint64_t max_file_bytes = kDefaultMaxFileBytes;
    unsigned workers = 1;
    std::size_t dedup_shards = 256;
    std::optional<std::filesystem::path> ledger_dir; // resume/extend across runs

    void validate() const; // throws ConfigError
};

struct ScanOutcome {
    LanguageCensus census;
    DedupStats dedup;
    IngestStats ingest;
    std::string tokenizer_kind; // "bpe" or "whitespace"
};

// Runs S1-S3 over all corpora: dedup by content hash (first seen wins, in
// corpus order), tag admitted files by path, count tokens. Hashing and
// token counting fan out across workers; admission is sequential in stream
// order, so outputs are byte-identical for any worker count.
ScanOutcome run_scan(const ScanConfig& config);

} // namespace census
