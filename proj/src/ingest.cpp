#include "census/ingest.hpp"

#include "census/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <system_error>

namespace fs = std::filesystem;

namespace census {

void IngestStats::merge(const IngestStats& other) {
    files_emitted += other.files_emitted;
    files_skipped += other.files_skipped;
    decode_errors += other.decode_errors;
    for (const auto& [corpus, n] : other.per_corpus) per_corpus[corpus] += n;
}

namespace {

// Collects relative paths of all regular files under root. Depth-first with
// error tolerance: an unlistable directory counts as one skipped item.
void list_files(const fs::path& root, const fs::path& rel, std::vector<std::string>& out,
                std::uint64_t& skipped) {
    std::error_code ec;
    fs::directory_iterator it(root / rel, ec);
    if (ec) {
        ++skipped;
        return;
    }
    for (const auto& entry : it) {
        std::error_code sec;
        const fs::path sub = rel / entry.path().filename();
        if (entry.is_symlink(sec) || sec) continue; // never follow links
        if (entry.is_directory(sec) && !sec) {
            if (entry.path().filename() == ".git") continue;
            list_files(root, sub, out, skipped);
        } else if (entry.is_regular_file(sec) && !sec) {
            out.push_back(sub.generic_string());
        }
        // other kinds (fifo, socket, ...) are not source files; ignore
    }
}

} // namespace

DirectorySource::DirectorySource(fs::path root, std::string corpus_id,
                                 std::uint64_t max_file_bytes)
    : root_(std::move(root)), corpus_id_(std::move(corpus_id)), max_file_bytes_(max_file_bytes) {
    if (!fs::is_directory(root_)) {
        throw FatalError("corpus root is not a readable directory: " + root_.string());
    }
    list_files(root_, fs::path(), relative_paths_, stats_.files_skipped);
    // Global lexicographic order on the generic relative path, not per-directory
    // order, so the stream is deterministic across filesystems.
    std::sort(relative_paths_.begin(), relative_paths_.end());
}

std::optional<FileRecord> DirectorySource::next() {
    while (index_ < relative_paths_.size()) {
        const std::string& rel = relative_paths_[index_++];
        fs::path full = root_ / fs::path(rel);
        std::error_code ec;
        std::uintmax_t sz = fs::file_size(full, ec);
        if (ec || sz > max_file_bytes_) {
            ++stats_.files_skipped;
            continue;
        }
        std::ifstream in(full, std::ios::binary);
        if (!in) {
            ++stats_.files_skipped;
            continue;
        }
        FileRecord rec;
        rec.corpus_id = corpus_id_;
        rec.path = rel;
        rec.content.resize(sz);
        in.read(rec.content.data(), static_cast<std::streamsize>(sz));
        if (static_cast<std::uintmax_t>(in.gcount()) != sz) {
            ++stats_.files_skipped;
            continue;
        }
        ++stats_.files_emitted;
        ++stats_.per_corpus[corpus_id_];
        return rec;
    }
    return std::nullopt;
}

RecordDumpSource::RecordDumpSource(const fs::path& file, std::string corpus_id)
    : in_(file, std::ios::binary), corpus_id_(std::move(corpus_id)) {
    if (!in_) throw FatalError("cannot open record dump: " + file.string());
}

std::optional<FileRecord> RecordDumpSource::next() {
    std::string line;
    while (std::getline(in_, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue; // blank framing line, not a record

        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            ++stats_.decode_errors;
            continue;
        }
        auto path_it = rec.find("path");
        if (path_it == rec.end() || !path_it->is_string()) {
            ++stats_.decode_errors;
            continue;
        }
        std::string path = path_it->get<std::string>();
        if (path.empty() || path.find('\0') != std::string::npos) {
            ++stats_.decode_errors;
            continue;
        }
        auto content_it = rec.find("content");
        auto b64_it = rec.find("content_b64");
        bool has_text = content_it != rec.end();
        bool has_b64 = b64_it != rec.end();
        if (has_text == has_b64) { // both or neither
            ++stats_.decode_errors;
            continue;
        }
        std::string content;
        if (has_text) {
            if (!content_it->is_string()) {
                ++stats_.decode_errors;
                continue;
            }
            content = content_it->get<std::string>();
        } else {
            if (!b64_it->is_string()) {
                ++stats_.decode_errors;
                continue;
            }
            auto decoded = base64_decode(b64_it->get<std::string>());
            if (!decoded) {
                ++stats_.decode_errors;
                continue;
            }
            content = std::move(*decoded);
        }
        FileRecord out;
        out.corpus_id = corpus_id_;
        out.path = std::move(path);
        out.content = std::move(content);
        ++stats_.files_emitted;
        ++stats_.per_corpus[corpus_id_];
        return out;
    }
    return std::nullopt;
}

std::vector<FileRecord> walk_directory(const fs::path& root, const std::string& corpus_id,
                                       IngestStats& stats, std::uint64_t max_file_bytes) {
    DirectorySource source(root, corpus_id, max_file_bytes);
    std::vector<FileRecord> out;
    while (auto rec = source.next()) out.push_back(std::move(*rec));
    stats.merge(source.stats());
    return out;
}

} // namespace census
