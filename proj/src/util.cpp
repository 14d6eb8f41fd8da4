#include "census/util.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace census {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        throw FatalError("counter overflow: " + std::to_string(a) + " + " + std::to_string(b));
    }
    return a + b;
}

std::string hex_encode(const unsigned char* data, std::size_t len) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

namespace {

int base64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

} // namespace

std::optional<std::string> base64_decode(std::string_view in) {
    if (in.size() % 4 != 0) return std::nullopt;
    std::string out;
    out.reserve(in.size() / 4 * 3);
    for (std::size_t i = 0; i < in.size(); i += 4) {
        int pad = 0;
        std::array<int, 4> v{};
        for (std::size_t j = 0; j < 4; ++j) {
            char c = in[i + j];
            if (c == '=') {
                // '=' only valid in the last group, positions 2 and/or 3.
                if (i + 4 != in.size() || j < 2) return std::nullopt;
                ++pad;
                v[j] = 0;
            } else {
                if (pad > 0) return std::nullopt; // data after padding
                v[j] = base64_value(c);
                if (v[j] < 0) return std::nullopt;
            }
        }
        std::uint32_t group = (static_cast<std::uint32_t>(v[0]) << 18) |
                              (static_cast<std::uint32_t>(v[1]) << 12) |
                              (static_cast<std::uint32_t>(v[2]) << 6) |
                              static_cast<std::uint32_t>(v[3]);
        out.push_back(static_cast<char>((group >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<char>((group >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<char>(group & 0xff));
        // Canonical form: unused bits in the final group must be zero.
        if (pad == 1 && (group & 0xff) != 0) return std::nullopt;
        if (pad == 2 && (group & 0xffff) != 0) return std::nullopt;
    }
    return out;
}

std::uint64_t parse_token_count(std::string_view text) {
    if (text.empty()) throw ConfigError("empty token count");
    std::uint64_t multiplier = 1;
    char last = text.back();
    std::string_view digits = text;
    switch (last) {
    case 'k': case 'K': multiplier = 1000ull; break;
    case 'm': case 'M': multiplier = 1000000ull; break;
    case 'b': case 'B': multiplier = 1000000000ull; break;
    case 't': case 'T': multiplier = 1000000000000ull; break;
    default: break;
    }
    if (multiplier != 1) digits.remove_suffix(1);
    if (digits.empty()) throw ConfigError("malformed token count: " + std::string(text));
    std::uint64_t value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') {
            throw ConfigError("malformed token count: " + std::string(text));
        }
        std::uint64_t d = static_cast<std::uint64_t>(c - '0');
        if (value > (std::numeric_limits<std::uint64_t>::max() - d) / 10) {
            throw ConfigError("token count out of range: " + std::string(text));
        }
        value = value * 10 + d;
    }
    if (value > std::numeric_limits<std::uint64_t>::max() / multiplier) {
        throw ConfigError("token count out of range: " + std::string(text));
    }
    return value * multiplier;
}

double round_half_up(double x, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::floor(x * scale + 0.5) / scale;
}

std::string format_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    return buf;
}

} // namespace census
