#ifndef JRC_ANALYSIS_HPP
#define JRC_ANALYSIS_HPP

#include "jrc/channel_sim.hpp"
#include "jrc/config.hpp"
#include "jrc/radar.hpp"
#include "jrc/rx_receiver.hpp"
#include "jrc/tx_pipeline.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace jrc {

/// deterministic per-(point, rep) seed derivation
uint64_t derive_seed(uint64_t base, uint64_t point, uint64_t rep);

struct PathLossFit {
    double alpha = 0;    // path-loss exponent
    double beta = 0;     // offset at the reference distance, dB
    double d0 = 1.0;     // reference distance, m
    double residual = 0; // sum of squared dB errors
};

/// Closed-form linear least squares of snr_db = beta - alpha*10*log10(d/d0).
/// Requires at least two distinct distances.
PathLossFit fit_path_loss(const std::vector<std::pair<double, double>>& samples_d_snr, double d0);

struct SweepPoint {
    double x = 0;      // distance (m) or angle (deg)
    double snr_db = 0; // mean over repetitions
    int reps = 0;
    bool missed = false; // no credible detection at this point
};

/// Standard sounding frame for radar measurements.
FrameGrid make_ndp_frame(const SystemConfig& cfg);

/// One radar cycle: NDP -> reflections -> channel estimate.
MeasurementMatrix radar_measure(const Scene& scene, const SystemConfig& cfg);

struct RadarSweepOptions {
    Scene scene_template;    // targets are replaced per sweep point
    double reflectivity = 1.0;
    double d0 = 7.0;
    int seeds = 20;
    uint64_t seed_base = 1;
};

struct DistanceSweepResult {
    std::vector<SweepPoint> records;
    PathLossFit fit;
    int missed_points = 0;
};

/// Radar SNR vs distance at broadside: simulate, image, global peak,
/// then fit the path-loss model over the non-missed points.
DistanceSweepResult run_distance_sweep(const std::vector<double>& distances,
                                       const RadarSweepOptions& opts, const SystemConfig& cfg);

struct CommSweepOptions {
    Scene scene_template; // fixed noise power models a constant-noise receiver
    Mcs mcs{ Modulation::QPSK, CodeRate::Half };
    std::size_t payload_len = 500;
    double d0 = 7.0;
    int seeds = 20;
    uint64_t seed_base = 1;
};

/// Pilot-based receiver SNR vs distance through the full comm chain.
DistanceSweepResult run_comm_distance_sweep(const std::vector<double>& distances,
                                            const CommSweepOptions& opts, const SystemConfig& cfg);

struct AngleSweepResult {
    std::vector<SweepPoint> records;
    double fov_3db = 0; // width of the region within 3 dB of the peak
    bool fov_bounded = false;
};

/// Radar SNR vs target bearing at fixed range; fov_3db interpolated from
/// the measured curve (unbounded when the -3 dB crossings leave the swept
/// span).
AngleSweepResult run_angle_sweep(const std::vector<double>& angles, double range_m,
                                 const RadarSweepOptions& opts, const SystemConfig& cfg);

struct TwoTargetOptions {
    double range_m = 6.0;
    double angle_deg = 10.0; // targets at +/- this bearing
    double reflectivity = 1.0;
    Scene background;        // SI leakage / clutter / noise
    int n_win = 10;
    uint64_t seed = 1;
    // wide range guard (Hann mainlobe) and a false-alarm rate strict
    // enough that the rectangular angle-window sidelobe floor stays below
    // threshold, so "exactly two" is meaningful over many seeds
    CfarParams cfar{ 10, 8, 6, 1e-12 };
};

/// Background (leakage + clutter + noise) used by the scripted two-target
/// and cancellation scenarios; levels scale with the target reflectivity.
Scene default_background(double target_reflectivity = 1.0);

struct TwoTargetReport {
    std::vector<Detection> detections; // sorted by SNR
    std::vector<HalfPowerWidth> range_widths;
    std::vector<HalfPowerWidth> angle_widths;
    RangeAngleImage image;
    bool resolved = false; // exactly two detections
};

/// Background capture, two-target placement, SI removal, CFAR, widths.
TwoTargetReport run_two_target_report(const SystemConfig& cfg, const TwoTargetOptions& opts);

} // namespace jrc

#endif
