#include "jrc/mapping.hpp"

#include <cmath>
#include <stdexcept>

namespace jrc {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt10 = 1.0 / std::sqrt(10.0);

// Gray map per rail for 16-QAM: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
inline double qam16_level(unsigned two_bits)
{
    switch (two_bits) {
    case 0b00: return -3.0;
    case 0b01: return -1.0;
    case 0b11: return 1.0;
    default: return 3.0; // 0b10
    }
}

inline unsigned qam16_bits(double level)
{
    if (level < -2.0)
        return 0b00;
    if (level < 0.0)
        return 0b01;
    if (level < 2.0)
        return 0b11;
    return 0b10;
}

inline double qam16_slice(double x)
{
    double v = x * std::sqrt(10.0);
    if (v < -2.0)
        return -3.0;
    if (v < 0.0)
        return -1.0;
    if (v < 2.0)
        return 1.0;
    return 3.0;
}

} // namespace

std::vector<cplx> map_symbols(std::span<const uint8_t> bits, Modulation mod)
{
    Mcs probe;
    probe.modulation = mod;
    const int bps = probe.bits_per_symbol();
    if (bits.size() % bps != 0)
        throw std::invalid_argument("map_symbols: bit count not divisible by bits per symbol");
    std::vector<cplx> out;
    out.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps) {
        switch (mod) {
        case Modulation::BPSK:
            out.emplace_back(bits[i] ? 1.0 : -1.0, 0.0);
            break;
        case Modulation::QPSK:
            out.emplace_back((bits[i] ? 1.0 : -1.0) * kInvSqrt2,
                             (bits[i + 1] ? 1.0 : -1.0) * kInvSqrt2);
            break;
        case Modulation::QAM16: {
            unsigned bi = (bits[i] << 1) | bits[i + 1];
            unsigned bq = (bits[i + 2] << 1) | bits[i + 3];
            out.emplace_back(qam16_level(bi) * kInvSqrt10, qam16_level(bq) * kInvSqrt10);
            break;
        }
        }
    }
    return out;
}

std::vector<int8_t> demap_symbols(std::span<const cplx> symbols, Modulation mod,
                                  std::span<const uint8_t> erased)
{
    Mcs probe;
    probe.modulation = mod;
    const int bps = probe.bits_per_symbol();
    std::vector<int8_t> bits;
    bits.reserve(symbols.size() * bps);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (!erased.empty() && erased[i]) {
            for (int b = 0; b < bps; ++b)
                bits.push_back(kErasedBit);
            continue;
        }
        const cplx s = symbols[i];
        switch (mod) {
        case Modulation::BPSK:
            bits.push_back(s.real() >= 0.0 ? 1 : 0);
            break;
        case Modulation::QPSK:
            bits.push_back(s.real() >= 0.0 ? 1 : 0);
            bits.push_back(s.imag() >= 0.0 ? 1 : 0);
            break;
        case Modulation::QAM16: {
            unsigned bi = qam16_bits(qam16_slice(s.real()));
            unsigned bq = qam16_bits(qam16_slice(s.imag()));
            bits.push_back((bi >> 1) & 1);
            bits.push_back(bi & 1);
            bits.push_back((bq >> 1) & 1);
            bits.push_back(bq & 1);
            break;
        }
        }
    }
    return bits;
}

std::vector<double> demap_soft(std::span<const cplx> symbols, Modulation mod,
                               std::span<const uint8_t> erased)
{
    Mcs probe;
    probe.modulation = mod;
    const int bps = probe.bits_per_symbol();
    std::vector<double> metrics;
    metrics.reserve(symbols.size() * bps);
    const double q16 = 2.0 * kInvSqrt10;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (!erased.empty() && erased[i]) {
            for (int b = 0; b < bps; ++b)
                metrics.push_back(0.0);
            continue;
        }
        const cplx s = symbols[i];
        switch (mod) {
        case Modulation::BPSK:
            metrics.push_back(s.real());
            break;
        case Modulation::QPSK:
            metrics.push_back(s.real());
            metrics.push_back(s.imag());
            break;
        case Modulation::QAM16:
            // per rail: sign bit, then inner/outer bit (max-log)
            metrics.push_back(s.real());
            metrics.push_back(q16 - std::abs(s.real()));
            metrics.push_back(s.imag());
            metrics.push_back(q16 - std::abs(s.imag()));
            break;
        }
    }
    return metrics;
}

cplx hard_decision(cplx symbol, Modulation mod)
{
    switch (mod) {
    case Modulation::BPSK:
        return { symbol.real() >= 0.0 ? 1.0 : -1.0, 0.0 };
    case Modulation::QPSK:
        return { std::copysign(kInvSqrt2, symbol.real()), std::copysign(kInvSqrt2, symbol.imag()) };
    case Modulation::QAM16:
        return { qam16_slice(symbol.real()) * kInvSqrt10, qam16_slice(symbol.imag()) * kInvSqrt10 };
    }
    return symbol;
}

} // namespace jrc
