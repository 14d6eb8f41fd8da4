#include "census/bpe.hpp"

#include "census/util.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

namespace census {

std::uint64_t count_lines(std::string_view content) {
    std::uint64_t newlines = 0;
    for (char c : content) {
        if (c == '\n') ++newlines;
    }
    if (!content.empty() && content.back() != '\n') ++newlines;
    return newlines;
}

std::string byte_symbol(unsigned char b) {
    if (b >= 0x21 && b <= 0x7e) return std::string(1, static_cast<char>(b));
    // U+0100 + b is always in [U+0100, U+01FF]: two UTF-8 bytes.
    unsigned int cp = 0x100u + b;
    std::string out;
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    return out;
}

namespace {

enum class ByteClass { kWhitespace, kWord, kOther };

ByteClass classify(unsigned char b) {
    switch (b) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
        return ByteClass::kWhitespace;
    default:
        break;
    }
    if ((b >= '0' && b <= '9') || (b >= 'A' && b <= 'Z') || (b >= 'a' && b <= 'z') || b == '_') {
        return ByteClass::kWord;
    }
    return ByteClass::kOther;
}

} // namespace

std::vector<std::pair<std::size_t, std::size_t>> pre_tokenize(std::string_view content) {
    std::vector<std::pair<std::size_t, std::size_t>> pieces;
    std::size_t i = 0;
    const std::size_t n = content.size();
    while (i < n) {
        std::size_t start = i;
        ByteClass cls = classify(static_cast<unsigned char>(content[i]));
        while (i < n && classify(static_cast<unsigned char>(content[i])) == cls) ++i;
        if (cls == ByteClass::kWhitespace && i < n) {
            // Attach the whitespace run to the run that follows it.
            ByteClass next_cls = classify(static_cast<unsigned char>(content[i]));
            while (i < n && classify(static_cast<unsigned char>(content[i])) == next_cls) ++i;
        }
        pieces.emplace_back(start, i);
    }
    return pieces;
}

void BpeModel::intern_byte_symbols() {
    for (unsigned int b = 0; b < 256; ++b) {
        byte_ids_[b] = intern(byte_symbol(static_cast<unsigned char>(b)));
    }
}

std::uint32_t BpeModel::intern(const std::string& symbol) {
    auto it = symbol_ids_.find(symbol);
    if (it != symbol_ids_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(symbols_.size());
    symbols_.push_back(symbol);
    symbol_ids_.emplace(symbol, id);
    return id;
}

BpeModel BpeModel::byte_fallback() {
    BpeModel model;
    model.intern_byte_symbols();
    for (unsigned int b = 0; b < 256; ++b) {
        std::string sym = byte_symbol(static_cast<unsigned char>(b));
        model.vocab_.emplace(sym, b);
    }
    return model;
}

namespace {

[[noreturn]] void fail_at(const std::filesystem::path& file, std::size_t line_no,
                          const std::string& what) {
    throw FatalError(file.filename().string() + ":" + std::to_string(line_no) + ": " + what);
}

} // namespace

BpeModel BpeModel::load(const std::filesystem::path& vocab_file,
                        const std::filesystem::path& merges_file) {
    BpeModel model;

    std::ifstream vin(vocab_file, std::ios::binary);
    if (!vin) throw FatalError("cannot open vocab file: " + vocab_file.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(vin, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            fail_at(vocab_file, line_no, "expected <token><TAB><id>");
        }
        std::string token = line.substr(0, tab);
        std::string id_text = line.substr(tab + 1);
        if (id_text.empty()) fail_at(vocab_file, line_no, "missing id");
        std::uint64_t id = 0;
        for (char c : id_text) {
            if (c < '0' || c > '9') fail_at(vocab_file, line_no, "malformed id: " + id_text);
            id = id * 10 + static_cast<std::uint64_t>(c - '0');
        }
        if (!model.vocab_.emplace(token, id).second) {
            fail_at(vocab_file, line_no, "duplicate vocab entry: " + token);
        }
    }

    model.intern_byte_symbols();

    std::ifstream min(merges_file, std::ios::binary);
    if (!min) throw FatalError("cannot open merges file: " + merges_file.string());
    line_no = 0;
    std::uint32_t rank = 0;
    bool in_header = true;
    while (std::getline(min, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (in_header && !line.empty() && line[0] == '#') continue;
        in_header = false;
        std::size_t sp = line.find(' ');
        if (sp == std::string::npos || sp == 0 || sp + 1 >= line.size() ||
            line.find(' ', sp + 1) != std::string::npos) {
            fail_at(merges_file, line_no, "expected <left> <right>");
        }
        std::string left = line.substr(0, sp);
        std::string right = line.substr(sp + 1);
        std::string merged = left + right;
        if (!model.vocab_.count(left)) {
            fail_at(merges_file, line_no,
                    "merge rule " + std::to_string(rank) + " references token absent from vocab: " + left);
        }
        if (!model.vocab_.count(right)) {
            fail_at(merges_file, line_no,
                    "merge rule " + std::to_string(rank) + " references token absent from vocab: " + right);
        }
        if (!model.vocab_.count(merged)) {
            fail_at(merges_file, line_no,
                    "merge rule " + std::to_string(rank) + " result absent from vocab: " + merged);
        }
        std::uint32_t left_id = model.intern(left);
        std::uint32_t right_id = model.intern(right);
        std::uint32_t result_id = model.intern(merged);
        std::uint64_t key = (static_cast<std::uint64_t>(left_id) << 32) | right_id;
        if (!model.merge_rules_.emplace(key, MergeRule{rank, result_id}).second) {
            fail_at(merges_file, line_no, "duplicate merge pair: " + left + " " + right);
        }
        ++rank;
    }
    return model;
}

// Greedy merge over one pre-token: repeatedly apply the lowest-rank rule,
// leftmost occurrence first, until no rule applies. A min-heap keyed on
// (rank, position) over a doubly linked list gives O(n log n); stale heap
// entries are detected by re-checking the rank of the pair at that position.
std::uint64_t BpeModel::count_pre_token(std::string_view piece) const {
    const std::size_t n = piece.size();
    if (n == 0) return 0;
    if (n == 1 || merge_rules_.empty()) return n;

    std::vector<std::uint32_t> sym(n);
    std::vector<std::uint32_t> prev(n), next(n);
    std::vector<bool> alive(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        sym[i] = byte_ids_[static_cast<unsigned char>(piece[i])];
        prev[i] = static_cast<std::uint32_t>(i == 0 ? n : i - 1);
        next[i] = static_cast<std::uint32_t>(i + 1 == n ? n : i + 1);
    }
    const std::uint32_t kNone = static_cast<std::uint32_t>(n);

    using HeapEntry = std::pair<std::uint32_t, std::uint32_t>; // (rank, left position)
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;

    auto rank_of = [this](std::uint32_t left, std::uint32_t right)
        -> std::optional<std::uint32_t> {
        std::uint64_t key = (static_cast<std::uint64_t>(left) << 32) | right;
        auto it = merge_rules_.find(key);
        if (it == merge_rules_.end()) return std::nullopt;
        return it->second.rank;
    };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (auto r = rank_of(sym[i], sym[i + 1])) {
            heap.emplace(*r, static_cast<std::uint32_t>(i));
        }
    }

    std::uint64_t units = n;
    while (!heap.empty()) {
        auto [rank, pos] = heap.top();
        heap.pop();
        if (!alive[pos] || next[pos] == kNone) continue;
        std::uint32_t right_pos = next[pos];
        auto current = rank_of(sym[pos], sym[right_pos]);
        if (!current || *current != rank) continue; // stale entry

        std::uint64_t key = (static_cast<std::uint64_t>(sym[pos]) << 32) | sym[right_pos];
        sym[pos] = merge_rules_.at(key).result;
        alive[right_pos] = false;
        next[pos] = next[right_pos];
        if (next[pos] != kNone) prev[next[pos]] = pos;
        --units;

        if (prev[pos] != kNone) {
            if (auto r = rank_of(sym[prev[pos]], sym[pos])) heap.emplace(*r, prev[pos]);
        }
        if (next[pos] != kNone) {
            if (auto r = rank_of(sym[pos], sym[next[pos]])) heap.emplace(*r, pos);
        }
    }
    return units;
}

TokenCount BpeModel::count_tokens(std::string_view content) const {
    TokenCount tc;
    tc.bytes = content.size();
    tc.lines = count_lines(content);
    for (const auto& [begin, end] : pre_tokenize(content)) {
        tc.tokens += count_pre_token(content.substr(begin, end - begin));
    }
    return tc;
}

TokenCount count_tokens(std::string_view content, const BpeModel& model) {
    return model.count_tokens(content);
}

TokenCount count_tokens_whitespace(std::string_view content) {
    TokenCount tc;
    tc.bytes = content.size();
    tc.lines = count_lines(content);
    bool in_run = false;
    for (char c : content) {
        bool ws = classify(static_cast<unsigned char>(c)) == ByteClass::kWhitespace;
        if (!ws && !in_run) ++tc.tokens;
        in_run = !ws;
    }
    return tc;
}

} // namespace census
