#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jrc/kernels.hpp"
#include "jrc/tx_pipeline.hpp"

#include <cmath>
#include <random>

using namespace jrc;

namespace {

std::vector<uint8_t> random_payload(std::size_t n, uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> p(n);
    for (auto& b : p)
        b = static_cast<uint8_t>(rng() & 0xFF);
    return p;
}

double grid_energy(const FrameGrid& fg)
{
    return kernels::energy(fg.grid.raw().data(), fg.grid.raw().size());
}

} // namespace

TEST_CASE("header round trip and error paths")
{
    Mcs mcs = Mcs::parse("qam16-3/4");
    auto bits = build_header_bits(mcs, 500, FrameKind::DATA);
    auto parsed = parse_header_bits(bits);
    REQUIRE(parsed.has_value());
    CHECK(parsed->mcs == mcs);
    CHECK(parsed->payload_len == 500);
    CHECK(parsed->kind == FrameKind::DATA);

    auto ndp = build_header_bits(Mcs{}, 0, FrameKind::NDP);
    auto parsed_ndp = parse_header_bits(ndp);
    REQUIRE(parsed_ndp.has_value());
    CHECK(parsed_ndp->payload_len == 0);
    CHECK(parsed_ndp->kind == FrameKind::NDP);

    bits[3] ^= 1; // parity breaks
    CHECK(!parse_header_bits(bits).has_value());

    CHECK_THROWS(build_header_bits(mcs, 4096, FrameKind::DATA));
}

TEST_CASE("payload symbol count arithmetic")
{
    SystemConfig cfg = SystemConfig::defaults();
    // 500-byte payload at QPSK-1/2 over 48 data carriers
    CHECK(payload_symbol_count(500, Mcs::parse("qpsk-1/2"), cfg) == 85);
    // encode_stream agrees and fills whole symbols
    auto payload = random_payload(500, 1);
    auto stream = encode_stream(payload, Mcs::parse("qpsk-1/2"), cfg);
    CHECK(stream.n_symbols == 85);
    CHECK(stream.bits.size() % stream.mcs.coded_bits_per_ofdm_symbol(48) == 0);
}

TEST_CASE("NDP layout: time-orthogonal preamble, no payload")
{
    SystemConfig cfg = SystemConfig::defaults();
    FrameGrid fg = assemble_frame(nullptr, FrameKind::NDP, SteeringMatrix::identity(cfg), cfg);
    CHECK(fg.layout.n_data == 0);
    CHECK(fg.layout.total_symbols() == 9);

    // preamble symbol l is nonzero only on chain l
    for (int l = 0; l < cfg.n_tx; ++l) {
        const int sym = fg.layout.preamble_offset() + l;
        for (int chain = 0; chain < cfg.n_tx; ++chain) {
            double e = kernels::energy(fg.grid.symbol_ptr(chain, sym), cfg.n_subcarriers);
            if (chain == l)
                CHECK(e > 0.0);
            else
                CHECK(e == 0.0);
        }
    }

    // cross-correlation between chains over the preamble is exactly zero
    for (int l1 = 0; l1 < cfg.n_tx; ++l1) {
        for (int l2 = l1 + 1; l2 < cfg.n_tx; ++l2) {
            cplx acc(0, 0);
            for (int s = 0; s < cfg.n_tx; ++s) {
                const int sym = fg.layout.preamble_offset() + s;
                acc += kernels::dot_conj(fg.grid.symbol_ptr(l1, sym),
                                         fg.grid.symbol_ptr(l2, sym), cfg.n_subcarriers);
            }
            CHECK(std::abs(acc) == 0.0);
        }
    }

    CHECK_THROWS(assemble_frame(nullptr, FrameKind::DATA, SteeringMatrix::identity(cfg), cfg));
}

TEST_CASE("DATA with identity steering puts payload on chain 0 only")
{
    SystemConfig cfg = SystemConfig::defaults();
    auto payload = random_payload(100, 2);
    auto stream = encode_stream(payload, Mcs::parse("qpsk-1/2"), cfg);
    FrameGrid fg = assemble_frame(&stream, FrameKind::DATA, SteeringMatrix::identity(cfg), cfg);

    for (int t = 0; t < fg.layout.n_data; ++t) {
        const int sym = fg.layout.data_offset() + t;
        for (int chain = 1; chain < cfg.n_tx; ++chain)
            CHECK(kernels::energy(fg.grid.symbol_ptr(chain, sym), cfg.n_subcarriers) == 0.0);
        CHECK(kernels::energy(fg.grid.symbol_ptr(0, sym), cfg.n_subcarriers) > 0.0);
    }

    // guard subcarriers stay zero in every symbol of every chain
    for (int chain = 0; chain < cfg.n_tx; ++chain)
        for (int sym = 0; sym < fg.layout.total_symbols(); ++sym)
            for (int g : cfg.guard_carriers)
                CHECK(std::abs(fg.grid.at(chain, sym, g)) == 0.0);
}

TEST_CASE("total radiated power is invariant to steering")
{
    SystemConfig cfg = SystemConfig::defaults();
    auto payload = random_payload(200, 3);
    auto stream = encode_stream(payload, Mcs::parse("qam16-3/4"), cfg);

    FrameGrid identity = assemble_frame(&stream, FrameKind::DATA, SteeringMatrix::identity(cfg), cfg);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> feedback(static_cast<std::size_t>(cfg.n_subcarriers) * cfg.n_tx);
    for (auto& v : feedback)
        v = cplx(dist(rng), dist(rng));
    SteeringMatrix mrt = compute_steering(feedback, cfg.n_subcarriers, cfg.n_tx, cfg);
    FrameGrid steered = assemble_frame(&stream, FrameKind::DATA, mrt, cfg);

    const double e1 = grid_energy(identity);
    const double e2 = grid_energy(steered);
    CHECK(std::abs(e1 - e2) <= 1e-9 * e1);
}

TEST_CASE("maximum-ratio steering properties")
{
    SystemConfig cfg = SystemConfig::defaults();
    std::vector<cplx> feedback(static_cast<std::size_t>(cfg.n_subcarriers) * cfg.n_tx,
                               cplx(0.0, 0.0));
    // subcarrier 1: h = (1,0,0,0) -> w = (1,0,0,0)
    feedback[static_cast<std::size_t>(1) * cfg.n_tx + 0] = cplx(1.0, 0.0);
    // subcarrier 2: random phases, equal magnitudes
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ph(-M_PI, M_PI);
    for (int l = 0; l < cfg.n_tx; ++l)
        feedback[static_cast<std::size_t>(2) * cfg.n_tx + l] = std::polar(1.0, ph(rng));

    SteeringMatrix w = compute_steering(feedback, cfg.n_subcarriers, cfg.n_tx, cfg);
    CHECK(std::abs(w.at(1, 0) - cplx(1.0, 0.0)) < 1e-12);
    for (int l = 1; l < cfg.n_tx; ++l)
        CHECK(std::abs(w.at(1, l)) == 0.0);

    // coherent combining: |sum h*w| equals ||h||
    cplx combined(0, 0);
    double norm_sq = 0;
    for (int l = 0; l < cfg.n_tx; ++l) {
        combined += feedback[static_cast<std::size_t>(2) * cfg.n_tx + l] * w.at(2, l);
        norm_sq += std::norm(feedback[static_cast<std::size_t>(2) * cfg.n_tx + l]);
    }
    CHECK(std::abs(combined) == doctest::Approx(std::sqrt(norm_sq)).epsilon(1e-12));

    // all-zero feedback on subcarrier 3 -> identity fallback
    CHECK(w.at(3, 0) == cplx(1.0, 0.0));

    // unit norm everywhere
    for (int n = 0; n < cfg.n_subcarriers; ++n) {
        double e = 0;
        for (int l = 0; l < cfg.n_tx; ++l)
            e += std::norm(w.at(n, l));
        CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ofdm modulation: durations, CP continuity, round trip")
{
    SystemConfig cfg = SystemConfig::defaults();
    FrameGrid ndp = assemble_frame(nullptr, FrameKind::NDP, SteeringMatrix::identity(cfg), cfg);
    TxBaseband bb = ofdm_modulate(ndp, cfg);
    CHECK(bb.chains.size() == 4);
    CHECK(bb.samples() == 720); // (2+2+1+4) * (64+16)

    // single nonzero subcarrier -> complex exponential with CP continuity
    FrameGrid single;
    single.kind = FrameKind::NDP;
    single.layout = FrameLayout{ 1, 0 };
    single.grid = ComplexGrid(1, 1, cfg.n_subcarriers);
    single.grid.at(0, 0, 3) = cplx(1.0, 0.0);
    OfdmModem modem(cfg);
    TxBaseband tone = modem.modulate(single);
    const auto& x = tone.chains[0];
    for (int i = 0; i < cfg.cyclic_prefix; ++i)
        CHECK(std::abs(x[i] - x[i + cfg.n_subcarriers]) < 1e-12);
    for (std::size_t i = 1; i < x.size(); ++i) {
        cplx expected_ratio = std::polar(1.0, 2.0 * M_PI * 3.0 / cfg.n_subcarriers);
        CHECK(std::abs(x[i] / x[i - 1] - expected_ratio) < 1e-9);
    }

    // noiseless loopback reproduces the grid exactly
    ComplexGrid back = modem.demodulate(bb, ndp.layout.total_symbols());
    for (int c = 0; c < 4; ++c)
        for (int s = 0; s < ndp.layout.total_symbols(); ++s)
            for (int n = 0; n < cfg.n_subcarriers; ++n)
                CHECK(std::abs(back.at(c, s, n) - ndp.grid.at(c, s, n)) < 1e-12);

    // unitary scaling: per-symbol body energy equals grid symbol energy
    double body = kernels::energy(bb.chains[0].data() + cfg.cyclic_prefix, cfg.n_subcarriers);
    double grid_sym = kernels::energy(ndp.grid.symbol_ptr(0, 0), cfg.n_subcarriers);
    CHECK(body == doctest::Approx(grid_sym).epsilon(1e-12));
}
