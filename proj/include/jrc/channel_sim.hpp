#ifndef JRC_CHANNEL_SIM_HPP
#define JRC_CHANNEL_SIM_HPP

#include "jrc/config.hpp"
#include "jrc/frame.hpp"
#include "jrc/tx_pipeline.hpp"

#include <cstdint>
#include <vector>

namespace jrc {

struct PointTarget {
    double range_m = 0;
    double angle_deg = 0; // broadside = 0
    double reflectivity = 1.0;
    double velocity_mps = 0; // quasi-static default
};

struct SiLeakage {
    double amplitude = 0;
    double delay_s = 0; // near zero: direct TX->RX coupling
};

/// Point-target environment plus the impairments of both links.
/// Deterministic given rng_seed.
struct Scene {
    std::vector<PointTarget> targets;
    std::vector<PointTarget> clutter; // static reflectors
    SiLeakage si;
    double noise_power = 0; // linear, per complex sample
    double radar_pl_exponent = 4.0;
    double comm_pl_exponent = 2.0;
    double element_taper_q = 0; // cos^q amplitude roll-off, 0 = omni
    double cfo_hz = 0;          // comm link only
    uint64_t rng_seed = 1;
};

/// Far-field element phase exp(j 2π pos sinθ / λ).
cplx steering_phase(double angle_deg, double element_pos_m, double lambda_m);

struct RxBaseband {
    std::vector<std::vector<cplx>> chains;
    double sample_rate = 0;

    std::size_t samples() const { return chains.empty() ? 0 : chains[0].size(); }
};

/// Monostatic radar return at the n_rx chains. Reflections are applied as
/// per-subcarrier phase ramps (delay), virtual-array steering phases, and
/// two-way amplitude reflectivity * d^(-radar_pl_exponent/2); the direct
/// leakage term hits every (rx, tx) pair near delay zero. Circular
/// Gaussian noise of scene.noise_power is added per sample. The output is
/// aligned with the stimulating TxBaseband (shared clock, timing known).
RxBaseband simulate_radar(const TxBaseband& tx, const Scene& scene, const SystemConfig& cfg);

/// One-way link to a remote SISO receiver at the given distance and
/// bearing: per-TX steering phases, amplitude d^(-comm_pl_exponent/2),
/// constant CFO rotation, a random integer arrival offset (zeros
/// prepended), and noise over the whole stream. If true_start is non-null
/// it receives the sample index where the frame begins.
std::vector<cplx> simulate_comm(const TxBaseband& tx, double distance_m, double angle_deg,
                                const Scene& scene, const SystemConfig& cfg,
                                std::size_t* true_start = nullptr);

/// Mean |sample|^2 of the noiseless comm waveform over the frame span;
/// used to convert a target SNR into a noise power.
double comm_mean_power(const TxBaseband& tx, double distance_m, double angle_deg,
                       const Scene& scene, const SystemConfig& cfg);

} // namespace jrc

#endif
