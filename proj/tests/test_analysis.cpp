#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jrc/analysis.hpp"

#include <cmath>

using namespace jrc;

TEST_CASE("path-loss fit recovers fixtures exactly on noiseless curves")
{
    auto synthesize = [](double alpha, double beta, double d0, const std::vector<double>& dists) {
        std::vector<std::pair<double, double>> samples;
        for (double d : dists)
            samples.emplace_back(d, beta - alpha * 10.0 * std::log10(d / d0));
        return samples;
    };

    // reported-measurement fixtures used as recovery targets
    std::vector<double> dists;
    for (double d = 3.0; d <= 12.01; d += 0.5)
        dists.push_back(d);
    auto fit = fit_path_loss(synthesize(3.43, 40.0, 7.0, dists), 7.0);
    CHECK(std::abs(fit.alpha - 3.43) < 1e-9);
    CHECK(std::abs(fit.beta - 40.0) < 1e-9);
    CHECK(fit.residual < 1e-12);

    fit = fit_path_loss(synthesize(1.64, 25.0, 7.0, dists), 7.0);
    CHECK(std::abs(fit.alpha - 1.64) < 1e-9);

    // two points pin the line exactly
    auto two = synthesize(2.5, 10.0, 7.0, { 7.0, 14.0 });
    fit = fit_path_loss(two, 7.0);
    CHECK(std::abs(fit.alpha - 2.5) < 1e-12);
    CHECK(std::abs(fit.beta - 10.0) < 1e-12);

    // adding a constant to every sample moves beta, never alpha
    auto shifted = synthesize(3.43, 40.0, 7.0, dists);
    for (auto& [d, snr] : shifted)
        snr += 11.5;
    auto fit2 = fit_path_loss(shifted, 7.0);
    CHECK(std::abs(fit2.alpha - 3.43) < 1e-12);
    CHECK(std::abs(fit2.beta - 51.5) < 1e-9);

    // degenerate inputs are rejected
    CHECK_THROWS(fit_path_loss({ { 5.0, 10.0 }, { 5.0, 12.0 } }, 7.0));
    CHECK_THROWS(fit_path_loss({ { 5.0, 10.0 } }, 7.0));
    CHECK_THROWS(fit_path_loss({ { 5.0, 10.0 }, { -1.0, 12.0 } }, 7.0));
}

TEST_CASE("radar distance sweep recovers the simulator exponent")
{
    SystemConfig cfg = SystemConfig::defaults();
    cfg.range_window = WindowKind::Hann; // keep far sidelobes under the noise

    RadarSweepOptions opts;
    opts.scene_template.noise_power = 5e-5;
    opts.scene_template.radar_pl_exponent = 4.0;
    opts.seeds = 5;
    opts.seed_base = 77;

    std::vector<double> distances;
    for (double d = 3.0; d <= 12.01; d += 1.0)
        distances.push_back(d);

    auto result = run_distance_sweep(distances, opts, cfg);
    CHECK(result.missed_points == 0);
    CHECK(result.fit.alpha > 3.8);
    CHECK(result.fit.alpha < 4.2);

    // doubling the reflectivity shifts the curve by +6 dB and leaves the
    // exponent in place (same seeds, same noise draws)
    RadarSweepOptions louder = opts;
    louder.reflectivity = 2.0;
    auto result2 = run_distance_sweep(distances, louder, cfg);
    CHECK(std::abs(result2.fit.alpha - result.fit.alpha) < 0.05);
    CHECK(result2.fit.beta - result.fit.beta == doctest::Approx(20.0 * std::log10(2.0)).epsilon(0.05));
}

TEST_CASE("comm distance sweep recovers the one-way exponent")
{
    SystemConfig cfg = SystemConfig::defaults();
    CommSweepOptions opts;
    opts.scene_template.noise_power = 3e-7;
    opts.scene_template.comm_pl_exponent = 2.0;
    opts.seeds = 3;
    opts.seed_base = 11;
    opts.payload_len = 120;

    std::vector<double> distances;
    for (double d = 3.5; d <= 12.51; d += 1.5)
        distances.push_back(d);

    auto result = run_comm_distance_sweep(distances, opts, cfg);
    CHECK(result.missed_points == 0);
    CHECK(result.fit.alpha > 1.85);
    CHECK(result.fit.alpha < 2.15);
}

TEST_CASE("angle sweep: omnidirectional elements give a flat response")
{
    SystemConfig cfg = SystemConfig::defaults();
    RadarSweepOptions opts;
    opts.scene_template.noise_power = 1e-4;
    opts.scene_template.element_taper_q = 0;
    opts.seeds = 4;
    opts.seed_base = 5;

    std::vector<double> angles;
    for (double a = -25.0; a <= 25.01; a += 5.0)
        angles.push_back(a);

    auto result = run_angle_sweep(angles, 6.0, opts, cfg);
    double lo = 1e9, hi = -1e9;
    for (const auto& r : result.records) {
        lo = std::min(lo, r.snr_db);
        hi = std::max(hi, r.snr_db);
    }
    CHECK(hi - lo < 2.0); // flat within +/-1 dB
    CHECK(!result.fov_bounded); // no 3 dB roll-off inside the swept span
}

TEST_CASE("angle sweep with the calibrated taper reads back a 55 deg field of view")
{
    SystemConfig cfg = SystemConfig::defaults();
    RadarSweepOptions opts;
    opts.scene_template.noise_power = 1e-4;
    // cos^q taper with the -3 dB (two-way power) point at 27.5 degrees
    opts.scene_template.element_taper_q =
        std::log(std::pow(10.0, -3.0 / 20.0)) / std::log(std::cos(27.5 * M_PI / 180.0));
    opts.seeds = 4;
    opts.seed_base = 6;

    std::vector<double> angles;
    for (double a = -40.0; a <= 40.01; a += 2.5)
        angles.push_back(a);

    auto result = run_angle_sweep(angles, 6.0, opts, cfg);
    REQUIRE(result.fov_bounded);
    CHECK(result.fov_3db > 51.0);
    CHECK(result.fov_3db < 59.0);

    // the imaged bearing tracks the swept bearing within one angle bin
    auto axes = derive_radar_axes(cfg);
    const double bin = axes.angle_deg[cfg.angle_fft_size / 2 + 1] - axes.angle_deg[cfg.angle_fft_size / 2];
    for (const auto& rec : result.records) {
        Scene scene = opts.scene_template;
        scene.targets = { PointTarget{ 6.0, rec.x, 1.0, 0.0 } };
        scene.rng_seed = 99;
        auto det = detect_global_peak(range_angle_image(radar_measure(scene, cfg), cfg));
        CHECK(std::abs(det.angle_deg - rec.x) <= 1.2 * bin);
    }
}

TEST_CASE("two-target report: resolved pair, merged pair, single target")
{
    SystemConfig cfg = SystemConfig::defaults();

    TwoTargetOptions opts;
    opts.background = default_background();
    opts.seed = 3;
    auto report = run_two_target_report(cfg, opts);
    REQUIRE(report.resolved);
    REQUIRE(report.detections.size() == 2);
    double a0 = std::min(report.detections[0].angle_deg, report.detections[1].angle_deg);
    double a1 = std::max(report.detections[0].angle_deg, report.detections[1].angle_deg);
    CHECK(std::abs(a0 + 10.0) < 1.0);
    CHECK(std::abs(a1 - 10.0) < 1.0);
    for (const auto& w : report.angle_widths)
        CHECK(w.bounded);

    // below the angular resolution the pair merges into one detection
    TwoTargetOptions close = opts;
    close.angle_deg = 4.0;
    auto merged = run_two_target_report(cfg, close);
    CHECK(!merged.resolved);
    CHECK(merged.detections.size() == 1);

    // removing one target leaves a single detection
    TwoTargetOptions single = opts;
    single.angle_deg = 0.0; // both coincide -> one reflector
    auto one = run_two_target_report(cfg, single);
    CHECK(one.detections.size() == 1);
}

TEST_CASE("sweeps are reproducible bit-exactly under a fixed seed set")
{
    SystemConfig cfg = SystemConfig::defaults();
    cfg.range_window = WindowKind::Hann;
    RadarSweepOptions opts;
    opts.scene_template.noise_power = 1e-4;
    opts.seeds = 2;
    opts.seed_base = 123;
    std::vector<double> distances = { 4.0, 6.0, 9.0 };

    auto r1 = run_distance_sweep(distances, opts, cfg);
    auto r2 = run_distance_sweep(distances, opts, cfg);
    REQUIRE(r1.records.size() == r2.records.size());
    for (std::size_t i = 0; i < r1.records.size(); ++i)
        CHECK(r1.records[i].snr_db == r2.records[i].snr_db);
    CHECK(r1.fit.alpha == r2.fit.alpha);
}
