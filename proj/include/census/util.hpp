#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace census {

// Fatal input error (unreadable/malformed inputs). The CLI maps this to exit code 1.
class FatalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration (bad flags, inconsistent options). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sum two counters, failing loudly instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

std::string hex_encode(const unsigned char* data, std::size_t len);

// Strict RFC 4648 decoder: canonical padding required, no whitespace,
// leftover pad bits must be zero. Returns nullopt on any violation.
std::optional<std::string> base64_decode(std::string_view in);

// Parses a token count such as "100B", "10K" or "123456". Suffixes K/M/B/T
// denote powers of ten (1e3..1e12) and are case-insensitive.
std::uint64_t parse_token_count(std::string_view text);

// Rounds half-up to the given number of decimals (non-negative inputs).
double round_half_up(double x, int decimals);

// Fixed-point formatting, deterministic across runs.
std::string format_fixed(double x, int decimals);

} // namespace census
