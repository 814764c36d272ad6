#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "thermocc/types.hpp"

namespace thermocc {

/// Even-parity bit over a bit span: XOR of all bits.
std::uint8_t parity_even(std::span<const std::uint8_t> bits);

/// Expand a hex string to exactly nbits bits, MSB first. The string must
/// supply ceil(nbits/4) digits and any pad bits past nbits must be zero.
BitStream bits_from_hex(std::string_view hex, std::size_t nbits);

/// Bits to hex, MSB first, zero-padded at the LSB end to a nibble boundary.
std::string hex_from_bits(std::span<const std::uint8_t> bits);

/// Parse a "0101..." string.
BitStream bits_from_string(std::string_view s);
std::string bit_string(std::span<const std::uint8_t> bits);

/// Seeded random bits (counter-based, reproducible).
BitStream random_bits(std::uint64_t seed, std::size_t n);

/// Number of differing positions; spans must be the same length.
std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace thermocc
