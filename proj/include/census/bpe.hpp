#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace census {

struct TokenCount {
    std::uint64_t tokens = 0;
    std::uint64_t lines = 0;
    std::uint64_t bytes = 0;

    bool operator==(const TokenCount&) const = default;
};

// Newline-byte count, plus one for a non-empty input without a trailing newline.
std::uint64_t count_lines(std::string_view content);

// Fixed byte-to-symbol bijection: printable ASCII 0x21..0x7E maps to itself,
// every other byte value b maps to code point U+0100+b (UTF-8 encoded).
// The full table ships as data/byte_alphabet.txt.
std::string byte_symbol(unsigned char b);

// Pre-token split: maximal runs of whitespace / word ([0-9A-Za-z_]) / other
// bytes, with each whitespace run attached to the run that follows it.
// Returns [begin, end) byte ranges; a trailing whitespace run stands alone.
std::vector<std::pair<std::size_t, std::size_t>> pre_tokenize(std::string_view content);

// Byte-level BPE model: vocabulary plus ranked merge rules. Immutable after
// load; count_tokens is pure and safe to call concurrently.
class BpeModel {
public:
    // vocab file:  <token><TAB><id> per line.
    // merges file: <left><SPACE><right> per line, rank = position;
    //              '#' comment lines allowed only before the first merge.
    static BpeModel load(const std::filesystem::path& vocab_file,
                         const std::filesystem::path& merges_file);

    // Degenerate model with the 256 byte symbols and no merges.
    static BpeModel byte_fallback();

    TokenCount count_tokens(std::string_view content) const;

    std::size_t vocab_size() const { return vocab_.size(); }
    std::size_t merge_count() const { return merge_rules_.size(); }

private:
    BpeModel() = default;
    void intern_byte_symbols();
    std::uint32_t intern(const std::string& symbol);
    std::uint64_t count_pre_token(std::string_view piece) const;

    struct MergeRule {
        std::uint32_t rank;
        std::uint32_t result;
    };

    std::unordered_map<std::string, std::uint64_t> vocab_;
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, std::uint32_t> symbol_ids_;
    std::array<std::uint32_t, 256> byte_ids_{};
    std::unordered_map<std::uint64_t, MergeRule> merge_rules_; // key: left<<32 | right
};

TokenCount count_tokens(std::string_view content, const BpeModel& model);

// Fallback measurement when no model is supplied: tokens are maximal runs
// of non-whitespace bytes.
TokenCount count_tokens_whitespace(std::string_view content);

} // namespace census
