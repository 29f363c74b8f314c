#include "jrc/channel_sim.hpp"

#include "jrc/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace jrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Scatterer {
    double delay_s;
    double angle_deg;
    cplx gain; // two-way amplitude including the carrier round-trip phase
};

double element_taper(double angle_deg, double q)
{
    if (q == 0.0)
        return 1.0;
    double c = std::cos(angle_deg * kPi / 180.0);
    return std::pow(std::max(c, 0.0), q);
}

std::vector<Scatterer> collect_scatterers(const Scene& scene, const SystemConfig& cfg)
{
    std::vector<Scatterer> out;
    auto add = [&](const PointTarget& t) {
        if (t.range_m <= 0.0)
            throw std::invalid_argument("simulate_radar: target range must be positive");
        if (t.range_m >= cfg.max_range())
            throw std::invalid_argument("simulate_radar: target beyond the unambiguous range (aliased)");
        if (std::abs(t.angle_deg) >= 90.0)
            throw std::invalid_argument("simulate_radar: target angle must satisfy |angle| < 90 deg");
        if (t.reflectivity <= 0.0)
            throw std::invalid_argument("simulate_radar: reflectivity must be positive");
        Scatterer s;
        s.delay_s = 2.0 * t.range_m / kSpeedOfLight;
        s.angle_deg = t.angle_deg;
        s.gain = t.reflectivity * std::pow(t.range_m, -scene.radar_pl_exponent / 2.0)
            * element_taper(t.angle_deg, scene.element_taper_q)
            * std::polar(1.0, -2.0 * kPi * cfg.carrier_hz * s.delay_s);
        out.push_back(s);
    };
    for (const auto& t : scene.targets)
        add(t);
    for (const auto& t : scene.clutter)
        add(t);
    return out;
}

/// exp(-j 2π f_n τ) over natural subcarrier order
std::vector<cplx> delay_ramp(double delay_s, const SystemConfig& cfg)
{
    std::vector<cplx> ramp(cfg.n_subcarriers);
    for (int n = 0; n < cfg.n_subcarriers; ++n) {
        double f = carrier_frequency_hz(n, cfg);
        ramp[n] = std::polar(1.0, -2.0 * kPi * f * delay_s);
    }
    return ramp;
}

void add_noise(std::vector<cplx>& samples, double noise_power, std::mt19937_64& rng)
{
    if (noise_power <= 0.0)
        return;
    std::normal_distribution<double> dist(0.0, std::sqrt(noise_power / 2.0));
    for (auto& s : samples)
        s += cplx(dist(rng), dist(rng));
}

} // namespace

cplx steering_phase(double angle_deg, double element_pos_m, double lambda_m)
{
    double sin_theta = std::sin(angle_deg * kPi / 180.0);
    return std::polar(1.0, 2.0 * kPi * element_pos_m * sin_theta / lambda_m);
}

RxBaseband simulate_radar(const TxBaseband& tx, const Scene& scene, const SystemConfig& cfg)
{
    const int n_sc = cfg.n_subcarriers;
    const int sym_len = cfg.symbol_samples();
    if (static_cast<int>(tx.chains.size()) != cfg.n_tx)
        throw std::invalid_argument("simulate_radar: tx chain count does not match config");
    if (tx.samples() % sym_len != 0)
        throw std::invalid_argument("simulate_radar: tx stream is not whole OFDM symbols");
    const int n_sym = static_cast<int>(tx.samples()) / sym_len;

    auto scatterers = collect_scatterers(scene, cfg);

    OfdmModem modem(cfg);
    ComplexGrid x = modem.demodulate(tx, n_sym);

    // per-pair channel vectors H[k][l][n]
    const double lambda = cfg.wavelength();
    std::vector<std::vector<cplx>> ramps;
    ramps.reserve(scatterers.size());
    for (const auto& s : scatterers)
        ramps.push_back(delay_ramp(s.delay_s, cfg));
    std::vector<cplx> si_ramp;
    if (scene.si.amplitude != 0.0)
        si_ramp = delay_ramp(scene.si.delay_s, cfg);

    std::vector<std::vector<cplx>> channel(static_cast<std::size_t>(cfg.n_rx) * cfg.n_tx,
                                           std::vector<cplx>(n_sc, cplx(0.0, 0.0)));
    for (int k = 0; k < cfg.n_rx; ++k) {
        for (int l = 0; l < cfg.n_tx; ++l) {
            auto& h = channel[static_cast<std::size_t>(k) * cfg.n_tx + l];
            for (std::size_t si = 0; si < scatterers.size(); ++si) {
                const auto& sc = scatterers[si];
                cplx g = sc.gain * steering_phase(sc.angle_deg, cfg.virtual_element_pos(k, l), lambda);
                kernels::cmadd(h.data(), ramps[si].data(), g, n_sc);
            }
            if (scene.si.amplitude != 0.0) {
                cplx g = scene.si.amplitude
                    * std::polar(1.0, -2.0 * kPi * cfg.carrier_hz * scene.si.delay_s);
                kernels::cmadd(h.data(), si_ramp.data(), g, n_sc);
            }
        }
    }

    // apply the channel in the subcarrier domain, then synthesize
    ComplexGrid y(cfg.n_rx, n_sym, n_sc);
    std::vector<cplx> tmp(n_sc);
    for (int k = 0; k < cfg.n_rx; ++k) {
        for (int s = 0; s < n_sym; ++s) {
            cplx* acc = y.symbol_ptr(k, s);
            for (int l = 0; l < cfg.n_tx; ++l) {
                const auto& h = channel[static_cast<std::size_t>(k) * cfg.n_tx + l];
                kernels::cmul(x.symbol_ptr(l, s), h.data(), tmp.data(), n_sc);
                kernels::cmadd(acc, tmp.data(), cplx(1.0, 0.0), n_sc);
            }
        }
    }

    RxBaseband rx;
    rx.sample_rate = tx.sample_rate;
    rx.chains = modem.synthesize(y);

    std::mt19937_64 rng(scene.rng_seed);
    for (auto& chain : rx.chains)
        add_noise(chain, scene.noise_power, rng);
    return rx;
}

namespace {

std::vector<cplx> comm_noiseless(const TxBaseband& tx, double distance_m, double angle_deg,
                                 const Scene& scene, const SystemConfig& cfg)
{
    const int n_sc = cfg.n_subcarriers;
    const int sym_len = cfg.symbol_samples();
    if (distance_m <= 0.0)
        throw std::invalid_argument("simulate_comm: distance must be positive");
    if (static_cast<int>(tx.chains.size()) != cfg.n_tx)
        throw std::invalid_argument("simulate_comm: tx chain count does not match config");
    if (tx.samples() % sym_len != 0)
        throw std::invalid_argument("simulate_comm: tx stream is not whole OFDM symbols");
    const int n_sym = static_cast<int>(tx.samples()) / sym_len;

    OfdmModem modem(cfg);
    ComplexGrid x = modem.demodulate(tx, n_sym);

    const double lambda = cfg.wavelength();
    const double delay_s = distance_m / kSpeedOfLight;
    const cplx amp = std::pow(distance_m, -scene.comm_pl_exponent / 2.0)
        * element_taper(angle_deg, scene.element_taper_q)
        * std::polar(1.0, -2.0 * kPi * cfg.carrier_hz * delay_s);
    // sub-sample part of the propagation delay as a subcarrier ramp; whole
    // samples are folded into the arrival offset instead
    const double delay_samples = delay_s * cfg.bandwidth_hz;
    const double frac_delay_s = (delay_samples - std::round(delay_samples)) / cfg.bandwidth_hz;
    auto ramp = delay_ramp(frac_delay_s, cfg);

    ComplexGrid y(1, n_sym, n_sc);
    std::vector<cplx> h(n_sc), tmp(n_sc);
    for (int l = 0; l < cfg.n_tx; ++l) {
        cplx g = amp * steering_phase(angle_deg, cfg.tx_element_pos(l), lambda);
        for (int n = 0; n < n_sc; ++n)
            h[n] = g * ramp[n];
        for (int s = 0; s < n_sym; ++s) {
            kernels::cmul(x.symbol_ptr(l, s), h.data(), tmp.data(), n_sc);
            kernels::cmadd(y.symbol_ptr(0, s), tmp.data(), cplx(1.0, 0.0), n_sc);
        }
    }
    return modem.synthesize(y)[0];
}

} // namespace

std::vector<cplx> simulate_comm(const TxBaseband& tx, double distance_m, double angle_deg,
                                const Scene& scene, const SystemConfig& cfg,
                                std::size_t* true_start)
{
    auto frame = comm_noiseless(tx, distance_m, angle_deg, scene, cfg);

    std::mt19937_64 rng(scene.rng_seed);
    std::uniform_int_distribution<std::size_t> offset_dist(200, 600);
    const std::size_t offset = offset_dist(rng);
    if (true_start)
        *true_start = offset;

    std::vector<cplx> out(offset + frame.size() + 128, cplx(0.0, 0.0));
    std::copy(frame.begin(), frame.end(), out.begin() + offset);

    if (scene.cfo_hz != 0.0) {
        const cplx step = std::polar(1.0, 2.0 * kPi * scene.cfo_hz / cfg.bandwidth_hz);
        kernels::rotate(out.data(), cplx(1.0, 0.0), step, out.size());
    }
    add_noise(out, scene.noise_power, rng);
    return out;
}

double comm_mean_power(const TxBaseband& tx, double distance_m, double angle_deg,
                       const Scene& scene, const SystemConfig& cfg)
{
    auto frame = comm_noiseless(tx, distance_m, angle_deg, scene, cfg);
    if (frame.empty())
        return 0.0;
    return kernels::energy(frame.data(), frame.size()) / static_cast<double>(frame.size());
}

} // namespace jrc
