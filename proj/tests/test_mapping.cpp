#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jrc/kernels.hpp"
#include "jrc/mapping.hpp"

#include <cmath>
#include <random>

using namespace jrc;

TEST_CASE("constellation conventions")
{
    // BPSK: 0 -> -1, 1 -> +1
    auto bpsk = map_symbols(std::vector<uint8_t>{ 0, 1 }, Modulation::BPSK);
    CHECK(bpsk[0] == cplx(-1.0, 0.0));
    CHECK(bpsk[1] == cplx(1.0, 0.0));

    // QPSK Gray: 00 -> (-1-j)/sqrt(2)
    auto qpsk = map_symbols(std::vector<uint8_t>{ 0, 0 }, Modulation::QPSK);
    CHECK(qpsk[0].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(qpsk[0].imag() == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("every constellation has unit average power and round-trips")
{
    std::mt19937_64 rng(3);
    for (Modulation mod : { Modulation::BPSK, Modulation::QPSK, Modulation::QAM16 }) {
        Mcs probe;
        probe.modulation = mod;
        const std::size_t n_bits = 10000 * probe.bits_per_symbol();
        std::vector<uint8_t> bits(n_bits);
        for (auto& b : bits)
            b = static_cast<uint8_t>(rng() & 1);

        auto syms = map_symbols(bits, mod);
        double mean_power = kernels::energy(syms.data(), syms.size()) / double(syms.size());
        CHECK(mean_power == doctest::Approx(1.0).epsilon(0.01));

        auto back = demap_symbols(syms, mod);
        REQUIRE(back.size() == bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            CHECK(back[i] == static_cast<int8_t>(bits[i]));
    }
}

TEST_CASE("gray mapping: adjacent 16-QAM levels differ in one bit")
{
    // enumerate all 16 points, check Gray property along each rail
    std::vector<std::vector<uint8_t>> rail_bits = { { 0, 0 }, { 0, 1 }, { 1, 1 }, { 1, 0 } };
    for (std::size_t i = 0; i + 1 < rail_bits.size(); ++i) {
        int diff = (rail_bits[i][0] != rail_bits[i + 1][0]) + (rail_bits[i][1] != rail_bits[i + 1][1]);
        CHECK(diff == 1);
    }
}

TEST_CASE("erased symbols demap to erased bits")
{
    auto syms = map_symbols(std::vector<uint8_t>{ 1, 0, 1, 1 }, Modulation::QAM16);
    std::vector<uint8_t> erased = { 1 };
    auto bits = demap_symbols(syms, Modulation::QAM16, erased);
    for (auto b : bits)
        CHECK(b == kErasedBit);
}

TEST_CASE("hard decision returns the nearest constellation point")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (Modulation mod : { Modulation::BPSK, Modulation::QPSK, Modulation::QAM16 }) {
        Mcs probe;
        probe.modulation = mod;
        std::vector<uint8_t> bits(probe.bits_per_symbol() * 64);
        for (auto& b : bits)
            b = static_cast<uint8_t>(rng() & 1);
        auto syms = map_symbols(bits, mod);
        for (auto s : syms) {
            cplx noisy = s + cplx(noise(rng), noise(rng));
            CHECK(std::abs(hard_decision(noisy, mod) - s) < 1e-12);
        }
    }
}
