#include "thermocc/bits.hpp"

#include <cctype>

#include "thermocc/rng.hpp"

namespace thermocc {

std::uint8_t parity_even(std::span<const std::uint8_t> bits) {
    std::uint8_t p = 0;
    for (std::uint8_t b : bits) p ^= (b & 1u);
    return p;
}

static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

BitStream bits_from_hex(std::string_view hex, std::size_t nbits) {
    const std::size_t need_digits = (nbits + 3) / 4;
    if (hex.size() != need_digits) {
        throw Error("payload hex has " + std::to_string(hex.size()) + " digits, expected " +
                    std::to_string(need_digits) + " for " + std::to_string(nbits) + " bits");
    }
    BitStream bits;
    bits.reserve(need_digits * 4);
    for (char c : hex) {
        const int v = hex_digit(c);
        if (v < 0) throw Error(std::string("invalid hex digit '") + c + "'");
        for (int k = 3; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((v >> k) & 1));
    }
    for (std::size_t i = nbits; i < bits.size(); ++i) {
        if (bits[i] != 0) throw Error("hex pad bits past bit " + std::to_string(nbits) + " must be zero");
    }
    bits.resize(nbits);
    return bits;
}

std::string hex_from_bits(std::span<const std::uint8_t> bits) {
    static const char* digits = "0123456789ABCDEF";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            v <<= 1;
            if (i + k < bits.size()) v |= (bits[i + k] & 1);
        }
        out.push_back(digits[v]);
    }
    return out;
}

BitStream bits_from_string(std::string_view s) {
    BitStream bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c == '0') bits.push_back(0);
        else if (c == '1') bits.push_back(1);
        else throw Error(std::string("invalid bit character '") + c + "'");
    }
    return bits;
}

std::string bit_string(std::span<const std::uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

BitStream random_bits(std::uint64_t seed, std::size_t n) {
    BitStream bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<std::uint8_t>(splitmix64(seed ^ splitmix64(0xB175u + i)) & 1u);
    }
    return bits;
}

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw Error("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

}  // namespace thermocc
