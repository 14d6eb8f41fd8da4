#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace census {

// One source file in flight. Content is raw bytes; no encoding normalization.
struct FileRecord {
    std::string corpus_id;
    std::string path; // relative, '/'-separated, non-empty, no NUL bytes
    std::string content;

    std::uint64_t byte_size() const { return content.size(); }
};

struct IngestStats {
    std::uint64_t files_emitted = 0;
    std::uint64_t files_skipped = 0;
    std::uint64_t decode_errors = 0;
    std::map<std::string, std::uint64_t> per_corpus; // corpus_id -> emitted

    void merge(const IngestStats& other);
};

// Pull-style record stream. next() returns records until exhausted.
class RecordSource {
public:
    virtual ~RecordSource() = default;
    virtual std::optional<FileRecord> next() = 0;
    const IngestStats& stats() const { return stats_; }

protected:
    IngestStats stats_;
};

// Emits every regular file under root exactly once, ordered lexicographically
// by relative path. Symlinks are not followed; directories named ".git" are
// skipped; files over max_file_bytes (or unreadable ones) are counted as
// skipped. A nonexistent root is fatal.
class DirectorySource final : public RecordSource {
public:
    DirectorySource(std::filesystem::path root, std::string corpus_id,
                    std::uint64_t max_file_bytes);
    std::optional<FileRecord> next() override;

private:
    std::filesystem::path root_;
    std::string corpus_id_;
    std::uint64_t max_file_bytes_;
    std::vector<std::string> relative_paths_;
    std::size_t index_ = 0;
};

// Reads newline-delimited JSON records: {"path": ..., "content": ...} or
// {"path": ..., "content_b64": ...}. Malformed records are skipped and
// counted as decode errors; order of valid records is preserved.
class RecordDumpSource final : public RecordSource {
public:
    RecordDumpSource(const std::filesystem::path& file, std::string corpus_id);
    std::optional<FileRecord> next() override;

private:
    std::ifstream in_;
    std::string corpus_id_;
};

// Convenience wrapper used by tests: drain a directory walk into a vector.
std::vector<FileRecord> walk_directory(const std::filesystem::path& root,
                                       const std::string& corpus_id, IngestStats& stats,
                                       std::uint64_t max_file_bytes = 1 << 20);

constexpr std::uint64_t kDefaultMaxFileBytes = 1 << 20; // 1 MiB

} // namespace census
