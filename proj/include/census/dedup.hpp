#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace census {

// 32-byte SHA-256 of file content. Path and corpus never affect it.
struct ContentDigest {
    std::array<unsigned char, 32> bytes{};

    bool operator==(const ContentDigest&) const = default;
    bool operator<(const ContentDigest& other) const { return bytes < other.bytes; }
};

ContentDigest digest(std::string_view content);
ContentDigest digest_file(const std::filesystem::path& file);
std::string to_hex(const ContentDigest& d);

struct DedupStats {
    std::uint64_t total_seen = 0;
    std::uint64_t unique = 0;
    std::uint64_t duplicates = 0;
    std::map<std::string, std::uint64_t> duplicates_per_corpus;
};

// Exact-dedup ledger sharded by digest prefix. admit() is safe under
// concurrent calls; each distinct digest yields true exactly once.
class DedupLedger {
public:
    explicit DedupLedger(std::size_t shard_count = 256);

    // True iff this digest has never been admitted before.
    bool admit(const ContentDigest& d, const std::string& corpus_id);

    DedupStats stats() const;
    std::size_t shard_count() const { return shards_.size(); }
    std::uint64_t size() const; // digests held, including preloaded ones

    // Persisted form: one file per shard, digests sorted and concatenated raw.
    void save(const std::filesystem::path& dir) const;
    // Loads digests from a saved ledger directory into this ledger without
    // touching the per-run stats; later admits of those digests return false.
    void preload(const std::filesystem::path& dir);

private:
    struct DigestHash {
        std::size_t operator()(const ContentDigest& d) const;
    };
    struct Shard {
        mutable std::mutex mu;
        std::unordered_set<ContentDigest, DigestHash> seen;
        std::uint64_t total_seen = 0;
        std::uint64_t unique = 0;
        std::uint64_t duplicates = 0;
        std::map<std::string, std::uint64_t> duplicates_per_corpus;
    };

    Shard& shard_for(const ContentDigest& d);
    std::vector<std::unique_ptr<Shard>> shards_;
};

} // namespace census
