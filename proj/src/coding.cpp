#include "jrc/coding.hpp"

#include <array>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace jrc {

namespace {

// reflected CRC-32 (poly 0xEDB88320), table-driven
const std::array<uint32_t, 256>& crc_table()
{
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int b = 0; b < 8; ++b)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    return table;
}

} // namespace

uint32_t crc32(std::span<const uint8_t> data)
{
    uint32_t c = 0xFFFFFFFFu;
    for (uint8_t byte : data)
        c = crc_table()[(c ^ byte) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::vector<uint8_t> crc32_append(std::span<const uint8_t> payload)
{
    if (payload.empty())
        throw std::invalid_argument("crc32_append: payload must be non-empty");
    std::vector<uint8_t> out(payload.begin(), payload.end());
    uint32_t c = crc32(payload);
    out.push_back(static_cast<uint8_t>(c & 0xFF));
    out.push_back(static_cast<uint8_t>((c >> 8) & 0xFF));
    out.push_back(static_cast<uint8_t>((c >> 16) & 0xFF));
    out.push_back(static_cast<uint8_t>((c >> 24) & 0xFF));
    return out;
}

bool crc_check(std::span<const uint8_t> payload_with_crc)
{
    if (payload_with_crc.size() < 5)
        return false;
    std::size_t n = payload_with_crc.size() - 4;
    uint32_t want = crc32(payload_with_crc.subspan(0, n));
    uint32_t got = payload_with_crc[n] | (payload_with_crc[n + 1] << 8)
        | (payload_with_crc[n + 2] << 16) | (static_cast<uint32_t>(payload_with_crc[n + 3]) << 24);
    return want == got;
}

std::vector<uint8_t> scrambler_sequence(uint8_t seed, std::size_t n)
{
    if ((seed & 0x7F) == 0)
        throw std::invalid_argument("scrambler: seed must be a nonzero 7-bit state");
    uint8_t state = seed & 0x7F;
    std::vector<uint8_t> seq(n);
    for (std::size_t i = 0; i < n; ++i) {
        // feedback = x^7 xor x^4 of the current state
        uint8_t fb = ((state >> 6) ^ (state >> 3)) & 1;
        seq[i] = fb;
        state = static_cast<uint8_t>(((state << 1) | fb) & 0x7F);
    }
    return seq;
}

void scramble(std::vector<uint8_t>& bits, uint8_t seed)
{
    auto seq = scrambler_sequence(seed, bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        bits[i] ^= seq[i];
}

namespace {

constexpr unsigned kConstraint = 7;
constexpr unsigned kStates = 1u << (kConstraint - 1); // 64
constexpr unsigned kG0 = 0133; // octal
constexpr unsigned kG1 = 0171;

inline uint8_t parity7(unsigned v)
{
    return static_cast<uint8_t>(__builtin_popcount(v & 0x7F) & 1);
}

// per (state, input) coded output pair, g0 in bit 1, g1 in bit 0
struct Trellis {
    // reg layout: bit 6 = newest input, bits 5..0 = state (newest to oldest)
    uint8_t out[kStates][2];
    uint8_t next[kStates][2];

    Trellis()
    {
        for (unsigned s = 0; s < kStates; ++s) {
            for (unsigned b = 0; b < 2; ++b) {
                unsigned reg = (b << 6) | s;
                uint8_t o0 = parity7(reg & kG0);
                uint8_t o1 = parity7(reg & kG1);
                out[s][b] = static_cast<uint8_t>((o0 << 1) | o1);
                next[s][b] = static_cast<uint8_t>(reg >> 1);
            }
        }
    }
};

const Trellis& trellis()
{
    static const Trellis t;
    return t;
}

} // namespace

std::vector<uint8_t> conv_encode(std::span<const uint8_t> bits)
{
    const Trellis& t = trellis();
    std::vector<uint8_t> out;
    out.reserve(bits.size() * 2);
    unsigned state = 0;
    for (uint8_t b : bits) {
        uint8_t o = t.out[state][b & 1];
        out.push_back(static_cast<uint8_t>((o >> 1) & 1));
        out.push_back(static_cast<uint8_t>(o & 1));
        state = t.next[state][b & 1];
    }
    return out;
}

namespace {
// keep-mask over each 6-bit puncture period for rate 3/4
constexpr bool kPuncture34[6] = { true, true, true, false, false, true };
}

std::vector<uint8_t> puncture(std::span<const uint8_t> coded, CodeRate rate)
{
    if (rate == CodeRate::Half)
        return { coded.begin(), coded.end() };
    if (coded.size() % 6 != 0)
        throw std::invalid_argument("puncture: rate-3/4 input length must be divisible by 6");
    std::vector<uint8_t> out;
    out.reserve(coded.size() * 4 / 6);
    for (std::size_t i = 0; i < coded.size(); ++i)
        if (kPuncture34[i % 6])
            out.push_back(coded[i]);
    return out;
}

std::vector<int8_t> depuncture(std::span<const int8_t> bits, CodeRate rate)
{
    if (rate == CodeRate::Half)
        return { bits.begin(), bits.end() };
    if (bits.size() % 4 != 0)
        throw std::invalid_argument("depuncture: rate-3/4 input length must be divisible by 4");
    std::vector<int8_t> out;
    out.reserve(bits.size() * 6 / 4);
    std::size_t in = 0;
    while (in < bits.size()) {
        for (int k = 0; k < 6; ++k) {
            if (kPuncture34[k])
                out.push_back(bits[in++]);
            else
                out.push_back(kErasedBit);
        }
    }
    return out;
}

std::vector<uint8_t> viterbi_decode(std::span<const int8_t> coded, std::size_t n_info)
{
    if (coded.size() < 2 * n_info)
        throw std::invalid_argument("viterbi_decode: need 2 coded values per information bit");
    const Trellis& t = trellis();
    constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max() / 4;

    // state layout: bit 5 = newest input bit, bit 0 = oldest. A destination
    // state therefore fixes its input bit (bit 5); the two incoming paths
    // differ only in the predecessor bit that fell off the register.
    std::vector<uint32_t> metric(kStates, kInf), next_metric(kStates);
    metric[0] = 0; // encoder starts in the all-zero state
    std::vector<uint64_t> decisions(n_info); // bit ns = winning predecessor's dropped bit

    for (std::size_t i = 0; i < n_info; ++i) {
        int8_t c0 = coded[2 * i];
        int8_t c1 = coded[2 * i + 1];
        uint64_t dec = 0;
        for (unsigned ns = 0; ns < kStates; ++ns) {
            unsigned b = ns >> 5;
            unsigned s0 = (ns & 31u) << 1;
            unsigned s1 = s0 | 1u;
            auto branch_cost = [&](unsigned s) -> uint32_t {
                if (metric[s] >= kInf)
                    return kInf;
                uint8_t o = t.out[s][b];
                uint32_t cost = metric[s];
                if (c0 != kErasedBit && ((o >> 1) & 1) != static_cast<uint8_t>(c0))
                    ++cost;
                if (c1 != kErasedBit && (o & 1) != static_cast<uint8_t>(c1))
                    ++cost;
                return cost;
            };
            uint32_t m0 = branch_cost(s0);
            uint32_t m1 = branch_cost(s1);
            if (m1 < m0) {
                next_metric[ns] = m1;
                dec |= (1ull << ns);
            } else {
                next_metric[ns] = m0;
            }
        }
        decisions[i] = dec;
        metric.swap(next_metric);
    }

    // terminated code: trace back from state 0
    std::vector<uint8_t> bits(n_info);
    unsigned state = 0;
    for (std::size_t i = n_info; i-- > 0;) {
        bits[i] = static_cast<uint8_t>(state >> 5);
        unsigned lost = static_cast<unsigned>((decisions[i] >> state) & 1);
        state = ((state & 31u) << 1) | lost;
    }
    return bits;
}

std::vector<uint8_t> viterbi_decode_soft(std::span<const double> bit_metrics, std::size_t n_info)
{
    if (bit_metrics.size() < 2 * n_info)
        throw std::invalid_argument("viterbi_decode_soft: need 2 metrics per information bit");
    const Trellis& t = trellis();
    constexpr double kInf = 1e300;

    std::vector<double> metric(kStates, kInf), next_metric(kStates);
    metric[0] = 0.0;
    std::vector<uint64_t> decisions(n_info);

    for (std::size_t i = 0; i < n_info; ++i) {
        const double m0 = bit_metrics[2 * i];
        const double m1 = bit_metrics[2 * i + 1];
        uint64_t dec = 0;
        for (unsigned ns = 0; ns < kStates; ++ns) {
            unsigned b = ns >> 5;
            unsigned s0 = (ns & 31u) << 1;
            unsigned s1 = s0 | 1u;
            auto branch_cost = [&](unsigned s) -> double {
                if (metric[s] >= kInf)
                    return kInf;
                uint8_t o = t.out[s][b];
                double cost = metric[s];
                cost += ((o >> 1) & 1) ? -m0 : m0;
                cost += (o & 1) ? -m1 : m1;
                return cost;
            };
            const double c0 = branch_cost(s0);
            const double c1 = branch_cost(s1);
            if (c1 < c0) {
                next_metric[ns] = c1;
                dec |= (1ull << ns);
            } else {
                next_metric[ns] = c0;
            }
        }
        decisions[i] = dec;
        metric.swap(next_metric);
    }

    std::vector<uint8_t> bits(n_info);
    unsigned state = 0;
    for (std::size_t i = n_info; i-- > 0;) {
        bits[i] = static_cast<uint8_t>(state >> 5);
        unsigned lost = static_cast<unsigned>((decisions[i] >> state) & 1);
        state = ((state & 31u) << 1) | lost;
    }
    return bits;
}

std::vector<uint8_t> bytes_to_bits(std::span<const uint8_t> bytes)
{
    std::vector<uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t byte : bytes)
        for (int b = 7; b >= 0; --b)
            bits.push_back((byte >> b) & 1);
    return bits;
}

std::vector<uint8_t> bits_to_bytes(std::span<const uint8_t> bits)
{
    if (bits.size() % 8 != 0)
        throw std::invalid_argument("bits_to_bytes: bit count must be a multiple of 8");
    std::vector<uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        bytes[i / 8] = static_cast<uint8_t>((bytes[i / 8] << 1) | (bits[i] & 1));
    return bytes;
}

} // namespace jrc
