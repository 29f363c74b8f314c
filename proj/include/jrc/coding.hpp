#ifndef JRC_CODING_HPP
#define JRC_CODING_HPP

#include "jrc/config.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jrc {

/// Hard bits are 0/1; erasures (from depuncturing or erased subcarriers)
/// are marked with kErasedBit and contribute no metric in the decoder.
inline constexpr int8_t kErasedBit = -1;

uint32_t crc32(std::span<const uint8_t> data);

/// payload || CRC-32 (little-endian byte order)
std::vector<uint8_t> crc32_append(std::span<const uint8_t> payload);

/// True when the trailing 4 bytes match the CRC-32 of the rest.
bool crc_check(std::span<const uint8_t> payload_with_crc);

/// Self-inverse additive scrambler, x^7 + x^4 + 1. seed is the 7-bit
/// initial LFSR state and must be nonzero.
void scramble(std::vector<uint8_t>& bits, uint8_t seed);
std::vector<uint8_t> scrambler_sequence(uint8_t seed, std::size_t n);

/// Rate-1/2 K=7 feedforward code, generators 133/171 (octal); output is
/// g0 then g1 per input bit. Callers terminate the trellis by appending
/// six zero tail bits.
std::vector<uint8_t> conv_encode(std::span<const uint8_t> bits);

/// Rate 1/2 is the identity; rate 3/4 keeps 4 of every 6 coded bits
/// (pattern 1 1 1 0 0 1). Input length must divide the puncture period.
std::vector<uint8_t> puncture(std::span<const uint8_t> coded, CodeRate rate);

/// Inverse of puncture: reinserts kErasedBit at the deleted positions.
std::vector<int8_t> depuncture(std::span<const int8_t> bits, CodeRate rate);

/// Maximum-likelihood sequence decoder over the 64-state trellis
/// (terminated: the encoder tail drives the path back to state 0).
/// coded holds 2*n_info values of {0, 1, kErasedBit}; returns n_info bits.
std::vector<uint8_t> viterbi_decode(std::span<const int8_t> coded, std::size_t n_info);

/// Soft-metric variant: one metric per coded bit, positive favoring 1,
/// magnitude proportional to confidence, 0 meaning erased.
std::vector<uint8_t> viterbi_decode_soft(std::span<const double> bit_metrics, std::size_t n_info);

// bit/byte packing helpers (MSB-first within each byte)
std::vector<uint8_t> bytes_to_bits(std::span<const uint8_t> bytes);
std::vector<uint8_t> bits_to_bytes(std::span<const uint8_t> bits);

} // namespace jrc

#endif
