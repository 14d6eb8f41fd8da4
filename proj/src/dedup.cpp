#include "census/dedup.hpp"

#include "census/util.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace census {

namespace {

struct EvpCtx {
    EVP_MD_CTX* ctx;
    EvpCtx() : ctx(EVP_MD_CTX_new()) {
        if (!ctx) throw FatalError("failed to allocate digest context");
    }
    ~EvpCtx() { EVP_MD_CTX_free(ctx); }
    EvpCtx(const EvpCtx&) = delete;
    EvpCtx& operator=(const EvpCtx&) = delete;
};

} // namespace

ContentDigest digest(std::string_view content) {
    EvpCtx c;
    ContentDigest out;
    unsigned int len = 0;
    if (EVP_DigestInit_ex(c.ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(c.ctx, content.data(), content.size()) != 1 ||
        EVP_DigestFinal_ex(c.ctx, out.bytes.data(), &len) != 1 || len != out.bytes.size()) {
        throw FatalError("SHA-256 computation failed");
    }
    return out;
}

ContentDigest digest_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FatalError("cannot open file for hashing: " + file.string());
    EvpCtx c;
    if (EVP_DigestInit_ex(c.ctx, EVP_sha256(), nullptr) != 1) {
        throw FatalError("SHA-256 computation failed");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize n = in.gcount();
        if (n > 0 && EVP_DigestUpdate(c.ctx, buf, static_cast<std::size_t>(n)) != 1) {
            throw FatalError("SHA-256 computation failed");
        }
    }
    if (in.bad()) throw FatalError("read error while hashing: " + file.string());
    ContentDigest out;
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(c.ctx, out.bytes.data(), &len) != 1 || len != out.bytes.size()) {
        throw FatalError("SHA-256 computation failed");
    }
    return out;
}

std::string to_hex(const ContentDigest& d) {
    return hex_encode(d.bytes.data(), d.bytes.size());
}

std::size_t DedupLedger::DigestHash::operator()(const ContentDigest& d) const {
    // SHA-256 output is uniform; the first 8 bytes already make a good hash.
    std::size_t h;
    std::memcpy(&h, d.bytes.data(), sizeof(h));
    return h;
}

DedupLedger::DedupLedger(std::size_t shard_count) {
    if (shard_count < 1 || shard_count > 65536) {
        throw ConfigError("shard count must be in [1, 65536], got " + std::to_string(shard_count));
    }
    shards_.reserve(shard_count);
    for (std::size_t i = 0; i < shard_count; ++i) {
        shards_.push_back(std::make_unique<Shard>());
    }
}

DedupLedger::Shard& DedupLedger::shard_for(const ContentDigest& d) {
    std::size_t prefix = (static_cast<std::size_t>(d.bytes[0]) << 8) | d.bytes[1];
    return *shards_[prefix % shards_.size()];
}

bool DedupLedger::admit(const ContentDigest& d, const std::string& corpus_id) {
    Shard& s = shard_for(d);
    std::lock_guard<std::mutex> lock(s.mu);
    ++s.total_seen;
    bool fresh = s.seen.insert(d).second;
    if (fresh) {
        ++s.unique;
    } else {
        ++s.duplicates;
        ++s.duplicates_per_corpus[corpus_id];
    }
    return fresh;
}

DedupStats DedupLedger::stats() const {
    DedupStats out;
    for (const auto& s : shards_) {
        std::lock_guard<std::mutex> lock(s->mu);
        out.total_seen += s->total_seen;
        out.unique += s->unique;
        out.duplicates += s->duplicates;
        for (const auto& [corpus, n] : s->duplicates_per_corpus) {
            out.duplicates_per_corpus[corpus] += n;
        }
    }
    return out;
}

std::uint64_t DedupLedger::size() const {
    std::uint64_t n = 0;
    for (const auto& s : shards_) {
        std::lock_guard<std::mutex> lock(s->mu);
        n += s->seen.size();
    }
    return n;
}

namespace {

std::string shard_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "shard_%05zu.digests", index);
    return buf;
}

} // namespace

void DedupLedger::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < shards_.size(); ++i) {
        std::vector<ContentDigest> digests;
        {
            std::lock_guard<std::mutex> lock(shards_[i]->mu);
            digests.assign(shards_[i]->seen.begin(), shards_[i]->seen.end());
        }
        std::sort(digests.begin(), digests.end());
        std::filesystem::path file = dir / shard_file_name(i);
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) throw FatalError("cannot write ledger shard: " + file.string());
        for (const ContentDigest& d : digests) {
            out.write(reinterpret_cast<const char*>(d.bytes.data()),
                      static_cast<std::streamsize>(d.bytes.size()));
        }
        if (!out) throw FatalError("write error on ledger shard: " + file.string());
    }
}

void DedupLedger::preload(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw FatalError("ledger directory not found: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (!name.starts_with("shard_") || !name.ends_with(".digests")) continue;
        std::uintmax_t sz = entry.file_size();
        if (sz % 32 != 0) {
            throw FatalError("corrupt ledger shard (size not a multiple of 32): " +
                             entry.path().string());
        }
        std::ifstream in(entry.path(), std::ios::binary);
        if (!in) throw FatalError("cannot read ledger shard: " + entry.path().string());
        ContentDigest d;
        while (in.read(reinterpret_cast<char*>(d.bytes.data()),
                       static_cast<std::streamsize>(d.bytes.size()))) {
            Shard& s = shard_for(d);
            std::lock_guard<std::mutex> lock(s.mu);
            s.seen.insert(d);
        }
        if (in.bad()) throw FatalError("read error on ledger shard: " + entry.path().string());
    }
}

} // namespace census
