#include "jrc/radar.hpp"

#include "jrc/fft.hpp"
#include "jrc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jrc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kReferenceFloor = 1e-9; // |X| below this is treated as unexcited

std::vector<double> make_window(WindowKind kind, int n)
{
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::Hann && n > 1)
        for (int i = 0; i < n; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (n - 1)));
    return w;
}

} // namespace

ComplexGrid ofdm_demodulate(const RxBaseband& rx, const SystemConfig& cfg)
{
    const int sym_len = cfg.symbol_samples();
    if (rx.samples() < static_cast<std::size_t>(sym_len))
        throw std::invalid_argument("ofdm_demodulate: stream shorter than one OFDM symbol");
    const int n_sym = static_cast<int>(rx.samples()) / sym_len;
    return OfdmModem(cfg).demodulate(rx.chains, n_sym);
}

MeasurementMatrix estimate_radar_channel(const ComplexGrid& rx_grid, const FrameGrid& known,
                                         const SystemConfig& cfg)
{
    if (rx_grid.carriers() != cfg.n_subcarriers)
        throw std::invalid_argument("estimate_radar_channel: subcarrier count mismatch");
    if (rx_grid.chains() != cfg.n_rx)
        throw std::invalid_argument("estimate_radar_channel: rx chain count mismatch");
    if (known.layout.n_tx != cfg.n_tx)
        throw std::invalid_argument("estimate_radar_channel: tx chain count mismatch");
    if (rx_grid.symbols() < known.layout.preamble_offset() + cfg.n_tx)
        throw std::invalid_argument("estimate_radar_channel: grid missing MIMO preamble symbols");

    const auto occupied = cfg.occupied_carriers();
    MeasurementMatrix m(cfg.n_subcarriers, cfg.n_virtual());
    for (int k = 0; k < cfg.n_rx; ++k) {
        for (int l = 0; l < cfg.n_tx; ++l) {
            const int slot = known.layout.preamble_offset() + l;
            const int col = k * cfg.n_tx + l;
            for (int n : occupied) {
                const cplx x = known.grid.at(l, slot, n);
                if (std::abs(x) < kReferenceFloor)
                    continue; // unexcited under this precoder; leave zero
                m.at(n, col) = rx_grid.at(k, slot, n) / x;
            }
        }
    }
    return m;
}

SiCanceller::SiCanceller(int n_win)
    : n_win_(n_win)
{
    if (n_win < 1)
        throw std::invalid_argument("SiCanceller: window depth must be positive");
}

void SiCanceller::capture(const MeasurementMatrix& m)
{
    if (!window_.empty()
        && (window_.front().n_sc != m.n_sc || window_.front().n_virt != m.n_virt))
        throw std::invalid_argument("SiCanceller: measurement dimensions changed");
    window_.push_back(m);
    while (static_cast<int>(window_.size()) > n_win_)
        window_.pop_front();
    loaded_.reset();
}

MeasurementMatrix SiCanceller::estimate() const
{
    if (loaded_)
        return *loaded_;
    if (window_.empty())
        throw std::logic_error("SiCanceller: no measurements captured");
    MeasurementMatrix mean(window_.front().n_sc, window_.front().n_virt);
    for (const auto& m : window_)
        kernels::cmadd(mean.h.data(), m.h.data(), cplx(1.0, 0.0), mean.h.size());
    kernels::scale(mean.h.data(), 1.0 / static_cast<double>(window_.size()), mean.h.size());
    return mean;
}

void SiCanceller::load_estimate(const MeasurementMatrix& m)
{
    loaded_ = m;
    window_.clear();
}

MeasurementMatrix SiCanceller::remove(const MeasurementMatrix& latest) const
{
    if (!active_)
        return latest;
    return remove_si(latest, estimate(), true);
}

MeasurementMatrix remove_si(const MeasurementMatrix& latest, const MeasurementMatrix& si_estimate,
                            bool active)
{
    if (!active)
        return latest;
    if (latest.n_sc != si_estimate.n_sc || latest.n_virt != si_estimate.n_virt)
        throw std::invalid_argument("remove_si: dimension mismatch");
    MeasurementMatrix out = latest;
    kernels::cmadd(out.h.data(), si_estimate.h.data(), cplx(-1.0, 0.0), out.h.size());
    return out;
}

RangeAngleImage range_angle_image(const MeasurementMatrix& m, const SystemConfig& cfg,
                                  const NoiseFloorParams& nf)
{
    if (m.n_sc != cfg.n_subcarriers || m.n_virt != cfg.n_virtual())
        throw std::invalid_argument("range_angle_image: measurement dimensions do not match config");

    const int n_sc = cfg.n_subcarriers;
    const int n_virt = cfg.n_virtual();
    const int nr = cfg.range_fft_size;
    const int na = cfg.angle_fft_size;

    // range window as a function of position within the occupied span
    const auto occupied = cfg.occupied_carriers();
    std::vector<int> logical(occupied.size());
    for (std::size_t i = 0; i < occupied.size(); ++i)
        logical[i] = logical_carrier_index(occupied[i], n_sc);
    const int lc_min = *std::min_element(logical.begin(), logical.end());
    const int lc_max = *std::max_element(logical.begin(), logical.end());
    std::vector<double> wr(n_sc, 0.0);
    {
        auto w = make_window(cfg.range_window, lc_max - lc_min + 1);
        for (std::size_t i = 0; i < occupied.size(); ++i)
            wr[occupied[i]] = w[logical[i] - lc_min];
    }
    const auto wa = make_window(cfg.angle_window, n_virt);

    // windowed measurement, zero-padded over subcarriers in spectral order
    std::vector<std::vector<cplx>> padded(n_virt, std::vector<cplx>(nr, cplx(0.0, 0.0)));
    for (int n : occupied) {
        const int lc = logical_carrier_index(n, n_sc);
        const int row = lc >= 0 ? lc : nr + lc;
        for (int v = 0; v < n_virt; ++v)
            padded[v][row] = m.at(n, v) * wr[n] * wa[v];
    }

    // inverse DFT over subcarriers -> range profiles per virtual channel
    Fft fft_r(static_cast<std::size_t>(nr));
    std::vector<std::vector<cplx>> range_prof(n_virt, std::vector<cplx>(nr));
    for (int v = 0; v < n_virt; ++v)
        fft_r.inverse_unitary(padded[v].data(), range_prof[v].data());

    // forward DFT over virtual elements -> centered angle spectrum per range
    Fft fft_a(static_cast<std::size_t>(na));
    RangeAngleImage img;
    img.n_range = nr;
    img.n_angle = na;
    img.power.resize(static_cast<std::size_t>(nr) * na);
    img.axes = derive_radar_axes(cfg);

    std::vector<cplx> in(na), out(na);
    std::vector<double> row_power(na);
    for (int r = 0; r < nr; ++r) {
        std::fill(in.begin(), in.end(), cplx(0.0, 0.0));
        for (int v = 0; v < n_virt; ++v)
            in[v] = range_prof[v][r];
        fft_a.forward_unitary(in.data(), out.data());
        kernels::power(out.data(), row_power.data(), na);
        // fft-shift so the angle axis is centered
        double* dst = img.power.data() + static_cast<std::size_t>(r) * na;
        for (int a = 0; a < na; ++a)
            dst[a] = row_power[(a + na / 2) % na];
    }

    // noise floor: median far-field power, excluding a zone around the peak
    std::size_t peak_idx = 0;
    double peak = -1.0;
    for (std::size_t i = 0; i < img.power.size(); ++i) {
        if (img.power[i] > peak) {
            peak = img.power[i];
            peak_idx = i;
        }
    }
    const int peak_r = static_cast<int>(peak_idx) / na;
    const int peak_a = static_cast<int>(peak_idx) % na;
    const double far_range = nf.far_field_fraction * cfg.max_range();
    std::vector<double> far_bins;
    for (int r = 0; r < nr; ++r) {
        if (img.axes.range_m[r] <= far_range)
            continue;
        for (int a = 0; a < na; ++a) {
            if (std::abs(r - peak_r) <= nf.exclusion_radius_bins
                && std::abs(a - peak_a) <= nf.exclusion_radius_bins)
                continue;
            far_bins.push_back(img.at(r, a));
        }
    }
    if (far_bins.empty()) {
        img.noise_floor = 1e-30;
    } else {
        auto mid = far_bins.begin() + far_bins.size() / 2;
        std::nth_element(far_bins.begin(), mid, far_bins.end());
        img.noise_floor = std::max(*mid, 1e-30);
    }
    return img;
}

namespace {

Detection make_detection(const RangeAngleImage& img, int r, int a)
{
    Detection d;
    d.range_bin = r;
    d.angle_bin = a;
    d.range_m = img.axes.range_m[r];
    d.angle_deg = img.axes.angle_deg[a];
    d.peak_power = img.at(r, a);
    d.snr_db = 10.0 * std::log10(d.peak_power / img.noise_floor);
    return d;
}

} // namespace

Detection detect_global_peak(const RangeAngleImage& img)
{
    int best_r = 0, best_a = 0;
    double best = -1.0;
    for (int r = 0; r < img.n_range; ++r) {
        for (int a = 0; a < img.n_angle; ++a) {
            if (!img.axes.angle_valid[a])
                continue;
            if (img.at(r, a) > best) {
                best = img.at(r, a);
                best_r = r;
                best_a = a;
            }
        }
    }
    return make_detection(img, best_r, best_a);
}

namespace {

// summed-area table with one row/column of zero padding
struct Sat {
    int nr, na;
    std::vector<double> s;

    Sat(const RangeAngleImage& img, const std::vector<bool>& valid, bool count_only)
        : nr(img.n_range), na(img.n_angle), s(static_cast<std::size_t>(nr + 1) * (na + 1), 0.0)
    {
        for (int r = 0; r < nr; ++r)
            for (int a = 0; a < na; ++a) {
                double v = valid[a] ? (count_only ? 1.0 : img.at(r, a)) : 0.0;
                s[idx(r + 1, a + 1)] = v + s[idx(r, a + 1)] + s[idx(r + 1, a)] - s[idx(r, a)];
            }
    }
    std::size_t idx(int r, int a) const { return static_cast<std::size_t>(r) * (na + 1) + a; }
    // inclusive rectangle clipped to the image
    double rect(int r0, int r1, int a0, int a1) const
    {
        r0 = std::max(r0, 0);
        a0 = std::max(a0, 0);
        r1 = std::min(r1, nr - 1);
        a1 = std::min(a1, na - 1);
        if (r0 > r1 || a0 > a1)
            return 0.0;
        return s[idx(r1 + 1, a1 + 1)] - s[idx(r0, a1 + 1)] - s[idx(r1 + 1, a0)] + s[idx(r0, a0)];
    }
};

} // namespace

std::vector<Detection> detect_cfar(const RangeAngleImage& img, const CfarParams& params)
{
    const int nr = img.n_range;
    const int na = img.n_angle;
    const int gr = params.guard_range, ga = params.guard_angle;
    const int wr = gr + params.train_range;

    Sat sums(img, img.axes.angle_valid, false);
    Sat counts(img, img.axes.angle_valid, true);

    std::vector<Detection> detections;
    for (int r = 0; r < nr; ++r) {
        for (int a = 0; a < na; ++a) {
            if (!img.axes.angle_valid[a])
                continue;
            const double cell = img.at(r, a);

            // training strips above and below the guard box
            const double ring_sum = sums.rect(r - wr, r + wr, a - ga, a + ga)
                - sums.rect(r - gr, r + gr, a - ga, a + ga);
            const double ring_count = counts.rect(r - wr, r + wr, a - ga, a + ga)
                - counts.rect(r - gr, r + gr, a - ga, a + ga);
            if (ring_count < 1.0)
                continue;
            // exact CA-CFAR factor for exponentially distributed power
            const double alpha = ring_count * (std::pow(params.pfa, -1.0 / ring_count) - 1.0);
            double noise_est = ring_sum / ring_count;
            if (params.clamp_to_floor)
                noise_est = std::max(noise_est, img.noise_floor / M_LN2); // median -> mean
            if (cell <= alpha * noise_est)
                continue;

            // peak grouping: keep only the maximum within the guard window
            bool is_peak = true;
            for (int rr = std::max(0, r - gr); rr <= std::min(nr - 1, r + gr) && is_peak; ++rr) {
                for (int aa = std::max(0, a - ga); aa <= std::min(na - 1, a + ga); ++aa) {
                    if (rr == r && aa == a)
                        continue;
                    const double v = img.at(rr, aa);
                    if (v > cell || (v == cell && (rr < r || (rr == r && aa < a)))) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak)
                detections.push_back(make_detection(img, r, a));
        }
    }
    std::sort(detections.begin(), detections.end(),
              [](const Detection& x, const Detection& y) { return x.snr_db > y.snr_db; });
    return detections;
}

HalfPowerWidth half_power_width(const RangeAngleImage& img, const Detection& det, ImageAxis axis)
{
    const bool along_range = axis == ImageAxis::Range;
    const int n = along_range ? img.n_range : img.n_angle;
    const int peak_idx = along_range ? det.range_bin : det.angle_bin;
    auto value = [&](int i) {
        return along_range ? img.at(i, det.angle_bin) : img.at(det.range_bin, i);
    };
    auto coord = [&](int i) {
        return along_range ? img.axes.range_m[i] : img.axes.angle_deg[i];
    };

    const double target = value(peak_idx) * 0.5; // -3 dB (in power)
    HalfPowerWidth res;

    double lo = 0, hi = 0;
    bool lo_ok = false, hi_ok = false;
    for (int i = peak_idx; i - 1 >= 0; --i) {
        if (value(i - 1) <= target) {
            const double frac = (value(i) - target) / (value(i) - value(i - 1));
            lo = coord(i) + frac * (coord(i - 1) - coord(i));
            lo_ok = true;
            break;
        }
    }
    for (int i = peak_idx; i + 1 < n; ++i) {
        if (value(i + 1) <= target) {
            const double frac = (value(i) - target) / (value(i) - value(i + 1));
            hi = coord(i) + frac * (coord(i + 1) - coord(i));
            hi_ok = true;
            break;
        }
    }
    res.bounded = lo_ok && hi_ok;
    if (res.bounded)
        res.width = hi - lo;
    return res;
}

} // namespace jrc
