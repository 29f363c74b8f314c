#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jrc/analysis.hpp"
#include "jrc/kernels.hpp"
#include "jrc/radar.hpp"

#include <cmath>
#include <random>

using namespace jrc;

namespace {

constexpr double kPi = 3.14159265358979323846;

MeasurementMatrix analytic_single_target(double range_m, double angle_deg, double gain,
                                         const SystemConfig& cfg)
{
    MeasurementMatrix m(cfg.n_subcarriers, cfg.n_virtual());
    const double tau = 2.0 * range_m / kSpeedOfLight;
    const cplx carrier = std::polar(1.0, -2.0 * kPi * cfg.carrier_hz * tau);
    for (int n : cfg.occupied_carriers()) {
        const double f = carrier_frequency_hz(n, cfg);
        const cplx ramp = std::polar(1.0, -2.0 * kPi * f * tau);
        for (int k = 0; k < cfg.n_rx; ++k)
            for (int l = 0; l < cfg.n_tx; ++l)
                m.at(n, k * cfg.n_tx + l) = gain * carrier * ramp
                    * steering_phase(angle_deg, cfg.virtual_element_pos(k, l), cfg.wavelength());
    }
    return m;
}

} // namespace

TEST_CASE("identity channel estimates to ones on occupied subcarriers")
{
    SystemConfig cfg = SystemConfig::defaults();
    Scene scene;
    scene.noise_power = 0;
    scene.si.amplitude = 1.0; // unit direct coupling on every pair, zero delay
    auto m = radar_measure(scene, cfg);
    for (int n : cfg.occupied_carriers())
        for (int v = 0; v < cfg.n_virtual(); ++v)
            CHECK(std::abs(m.at(n, v) - cplx(1.0, 0.0)) < 1e-9);
    for (int n : cfg.guard_carriers)
        for (int v = 0; v < cfg.n_virtual(); ++v)
            CHECK(std::abs(m.at(n, v)) == 0.0);
}

TEST_CASE("single-target estimate matches the analytic channel to 1e-6")
{
    SystemConfig cfg = SystemConfig::defaults();
    const double range = 6.37, angle = 13.0, refl = 2.0;
    Scene scene;
    scene.noise_power = 0;
    scene.targets = { PointTarget{ range, angle, refl, 0.0 } };

    auto est = radar_measure(scene, cfg);
    auto want = analytic_single_target(range, angle, refl * std::pow(range, -2.0), cfg);

    double num = 0, den = 0;
    for (std::size_t i = 0; i < est.h.size(); ++i) {
        num += std::norm(est.h[i] - want.h[i]);
        den += std::norm(want.h[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("swapping RX chains permutes measurement columns")
{
    SystemConfig cfg = SystemConfig::defaults();
    Scene scene;
    scene.noise_power = 0;
    scene.targets = { PointTarget{ 7.3, -9.0, 1.0, 0.0 } };

    FrameGrid frame = make_ndp_frame(cfg);
    TxBaseband tx = ofdm_modulate(frame, cfg);
    RxBaseband rx = simulate_radar(tx, scene, cfg);
    auto est = estimate_radar_channel(ofdm_demodulate(rx, cfg), frame, cfg);

    std::swap(rx.chains[0], rx.chains[1]);
    auto swapped = estimate_radar_channel(ofdm_demodulate(rx, cfg), frame, cfg);

    for (int n : cfg.occupied_carriers())
        for (int l = 0; l < cfg.n_tx; ++l) {
            CHECK(std::abs(swapped.at(n, 0 * cfg.n_tx + l) - est.at(n, 1 * cfg.n_tx + l)) < 1e-12);
            CHECK(std::abs(swapped.at(n, 1 * cfg.n_tx + l) - est.at(n, 0 * cfg.n_tx + l)) < 1e-12);
        }
}

TEST_CASE("background window: mean, cancellation, and linearity")
{
    SystemConfig cfg = SystemConfig::defaults();
    MeasurementMatrix h(cfg.n_subcarriers, cfg.n_virtual());
    std::mt19937_64 rng(17);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto& v : h.h)
        v = cplx(dist(rng), dist(rng));

    SiCanceller c(4);
    c.capture(h);
    CHECK(c.provisional());
    auto est = c.estimate();
    for (std::size_t i = 0; i < h.h.size(); ++i)
        CHECK(std::abs(est.h[i] - h.h[i]) < 1e-15);

    // window of {H, -H} averages to zero
    MeasurementMatrix neg = h;
    kernels::scale(neg.h.data(), -1.0, neg.h.size());
    SiCanceller c2(2);
    c2.capture(h);
    c2.capture(neg);
    auto zero = c2.estimate();
    for (const auto& v : zero.h)
        CHECK(std::abs(v) < 1e-15);

    // inactive canceller passes measurements through untouched
    c2.set_active(false);
    auto same = c2.remove(h);
    for (std::size_t i = 0; i < h.h.size(); ++i)
        CHECK(same.h[i] == h.h[i]);

    // remove_si is linear: remove(H1+H2, S) = remove(H1, S) + H2
    MeasurementMatrix h2(cfg.n_subcarriers, cfg.n_virtual());
    for (auto& v : h2.h)
        v = cplx(dist(rng), dist(rng));
    MeasurementMatrix sum = h;
    kernels::cmadd(sum.h.data(), h2.h.data(), cplx(1.0, 0.0), sum.h.size());
    auto lhs = remove_si(sum, est, true);
    auto rhs = remove_si(h, est, true);
    for (std::size_t i = 0; i < h.h.size(); ++i)
        CHECK(std::abs(lhs.h[i] - (rhs.h[i] + h2.h[i])) < 1e-12);
}

TEST_CASE("window averaging cuts residual noise power by the window depth")
{
    SystemConfig cfg = SystemConfig::defaults();
    Scene statics;
    statics.clutter = { PointTarget{ 3.0, -20.0, 5.0, 0.0 } };
    statics.si.amplitude = 2.0;
    statics.noise_power = 1e-3;

    const int n_win = 10;
    const int trials = 24;
    double var_single = 0, var_mean = 0;
    Scene noiseless = statics;
    noiseless.noise_power = 0;
    auto truth = radar_measure(noiseless, cfg);

    for (int t = 0; t < trials; ++t) {
        SiCanceller c(n_win);
        for (int i = 0; i < n_win; ++i) {
            Scene s = statics;
            s.rng_seed = derive_seed(900, t, static_cast<uint64_t>(i));
            c.capture(radar_measure(s, cfg));
        }
        Scene s1 = statics;
        s1.rng_seed = derive_seed(901, t, 0);
        auto single = radar_measure(s1, cfg);
        auto mean = c.estimate();
        for (int n : cfg.occupied_carriers()) {
            var_single += std::norm(single.at(n, 0) - truth.at(n, 0));
            var_mean += std::norm(mean.at(n, 0) - truth.at(n, 0));
        }
    }
    const double ratio = var_single / var_mean;
    CHECK(ratio > 6.5);
    CHECK(ratio < 15.0);
}

TEST_CASE("static scene cancels exactly; a new target survives subtraction")
{
    SystemConfig cfg = SystemConfig::defaults();
    Scene statics;
    statics.noise_power = 0;
    statics.clutter = { PointTarget{ 2.5, 10.0, 4.0, 0.0 } };
    statics.si.amplitude = 3.0;

    SiCanceller c(5);
    for (int i = 0; i < 5; ++i)
        c.capture(radar_measure(statics, cfg));
    c.set_active(true);

    auto cancelled = c.remove(radar_measure(statics, cfg));
    for (const auto& v : cancelled.h)
        CHECK(std::abs(v) < 1e-10);

    Scene with_target = statics;
    with_target.targets = { PointTarget{ 6.0, 0.0, 1.0, 0.0 } };
    auto extracted = c.remove(radar_measure(with_target, cfg));

    Scene only_target;
    only_target.noise_power = 0;
    only_target.targets = with_target.targets;
    auto reference = radar_measure(only_target, cfg);
    for (std::size_t i = 0; i < extracted.h.size(); ++i)
        CHECK(std::abs(extracted.h[i] - reference.h[i]) < 1e-9);
}

TEST_CASE("imaging: peak location, scaling invariance, energy conservation")
{
    SystemConfig cfg = SystemConfig::defaults();

    // identity channel = zero-delay leak -> peak at range bin 0, angle 0
    MeasurementMatrix ones(cfg.n_subcarriers, cfg.n_virtual());
    for (int n : cfg.occupied_carriers())
        for (int v = 0; v < cfg.n_virtual(); ++v)
            ones.at(n, v) = cplx(1.0, 0.0);
    auto img0 = range_angle_image(ones, cfg);
    auto det0 = detect_global_peak(img0);
    CHECK(det0.range_bin == 0);
    CHECK(std::abs(det0.angle_deg) < 1e-9);

    // single target at 6 m / 0 deg peaks at the nearest bins
    Scene scene;
    scene.noise_power = 0;
    scene.targets = { PointTarget{ 6.0, 0.0, 1.0, 0.0 } };
    auto m = radar_measure(scene, cfg);
    auto img = range_angle_image(m, cfg);
    auto det = detect_global_peak(img);
    const double range_bin_m = cfg.range_resolution() * cfg.n_subcarriers / cfg.range_fft_size;
    CHECK(std::abs(det.range_m - 6.0) <= range_bin_m);
    CHECK(std::abs(det.angle_deg) <= 1.0);

    // argmax is invariant to global complex scaling
    MeasurementMatrix scaled = m;
    const cplx factor(0.3, -1.7);
    for (auto& v : scaled.h)
        v *= factor;
    auto det_scaled = detect_global_peak(range_angle_image(scaled, cfg));
    CHECK(det_scaled.range_bin == det.range_bin);
    CHECK(det_scaled.angle_bin == det.angle_bin);

    // unitary transforms preserve energy with rect windows and no padding
    SystemConfig plain = cfg;
    plain.range_fft_size = plain.n_subcarriers;
    plain.angle_fft_size = 8; // n_virtual
    auto img_plain = range_angle_image(m, plain);
    double image_sum = 0;
    for (double p : img_plain.power)
        image_sum += p;
    double h_sum = kernels::energy(m.h.data(), m.h.size());
    CHECK(image_sum == doctest::Approx(h_sum).epsilon(1e-9));
}

TEST_CASE("CFAR: single target, two targets, and false-alarm statistics")
{
    SystemConfig cfg = SystemConfig::defaults();
    // detection scenario: moderate SNR target, stringent false-alarm rate
    // (a very strong target would raise its own windowed sidelobes above
    // any adaptive threshold)
    CfarParams params{ 6, 8, 6, 1e-9 };

    Scene scene;
    scene.noise_power = 1.5e-3;
    scene.rng_seed = 5;
    scene.targets = { PointTarget{ 6.0, 0.0, 1.0, 0.0 } };
    auto img = range_angle_image(radar_measure(scene, cfg), cfg);
    auto dets = detect_cfar(img, params);
    REQUIRE(dets.size() == 1);
    CHECK(std::abs(dets[0].range_m - 6.0) < 0.5);
    CHECK(std::abs(dets[0].angle_deg) < 1.0);

    // two targets at +/-10 deg resolve into two detections at those
    // bearings; the two-target scenario images with a Hann range window
    // so the CFAR training strips stay clean
    SystemConfig hann_cfg = cfg;
    hann_cfg.range_window = WindowKind::Hann;
    CfarParams two_params{ 10, 8, 6, 1e-9 };
    scene.targets = { PointTarget{ 6.0, -10.0, 1.0, 0.0 },
                      PointTarget{ 6.0, 10.0, 1.0, 0.0 } };
    img = range_angle_image(radar_measure(scene, hann_cfg), hann_cfg);
    dets = detect_cfar(img, two_params);
    REQUIRE(dets.size() == 2);
    double a0 = std::min(dets[0].angle_deg, dets[1].angle_deg);
    double a1 = std::max(dets[0].angle_deg, dets[1].angle_deg);
    CHECK(std::abs(a0 + 10.0) < 1.0);
    CHECK(std::abs(a1 - 10.0) < 1.0);

    // iid exponential noise image: false alarms near pfa * cells
    CfarParams fa_params; // default pfa 1e-4
    fa_params.clamp_to_floor = false;
    std::mt19937_64 rng(99);
    std::exponential_distribution<double> expd(1.0);
    std::size_t cells = 0;
    std::size_t alarms = 0;
    for (int trial = 0; trial < 10; ++trial) {
        RangeAngleImage noise;
        noise.n_range = cfg.range_fft_size;
        noise.n_angle = cfg.angle_fft_size;
        noise.power.resize(static_cast<std::size_t>(noise.n_range) * noise.n_angle);
        for (auto& p : noise.power)
            p = expd(rng);
        noise.axes = derive_radar_axes(cfg);
        noise.noise_floor = 1.0;
        auto fa = detect_cfar(noise, fa_params);
        alarms += fa.size();
        cells += noise.power.size();
    }
    const double expected = fa_params.pfa * static_cast<double>(cells);
    const double sigma = std::sqrt(expected);
    CHECK(alarms > expected - 4.0 * sigma);
    CHECK(alarms < expected + 4.0 * sigma);
}

TEST_CASE("half-power width against an analytic sinc-squared profile")
{
    SystemConfig cfg = SystemConfig::defaults();
    RangeAngleImage img;
    img.n_range = cfg.range_fft_size;
    img.n_angle = 1;
    img.power.assign(static_cast<std::size_t>(img.n_range), 0.0);
    img.axes = derive_radar_axes(cfg);
    img.axes.angle_deg = { 0.0 };
    img.axes.angle_valid = { true };
    img.noise_floor = 1e-12;

    const double bin_m = img.axes.range_m[1];
    const double first_null_m = 20.0 * bin_m;
    const int center = 128;
    for (int r = 0; r < img.n_range; ++r) {
        const double x = (img.axes.range_m[r] - img.axes.range_m[center]) / first_null_m;
        const double s = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
        img.power[r] = s * s;
    }
    Detection det;
    det.range_bin = center;
    det.angle_bin = 0;
    auto width = half_power_width(img, det, ImageAxis::Range);
    REQUIRE(width.bounded);
    CHECK(width.width == doctest::Approx(0.885893 * first_null_m).epsilon(0.02));

    // crossing outside the image extent -> unbounded
    for (auto& p : img.power)
        p = 1.0;
    auto unbounded = half_power_width(img, det, ImageAxis::Range);
    CHECK(!unbounded.bounded);
}

TEST_CASE("resolution widths of a real single-target image")
{
    SystemConfig cfg = SystemConfig::defaults(); // rectangular windows
    Scene scene;
    scene.noise_power = 0;
    scene.targets = { PointTarget{ 6.0, 0.0, 1.0, 0.0 } };
    auto img = range_angle_image(radar_measure(scene, cfg), cfg);
    auto det = detect_global_peak(img);

    auto rw = half_power_width(img, det, ImageAxis::Range);
    REQUIRE(rw.bounded);
    CHECK(rw.width > 0.84);
    CHECK(rw.width < 1.56);

    auto aw = half_power_width(img, det, ImageAxis::Angle);
    REQUIRE(aw.bounded);
    CHECK(aw.width > 8.75);
    CHECK(aw.width < 16.25);
}
