#ifndef JRC_RADAR_HPP
#define JRC_RADAR_HPP

#include "jrc/channel_sim.hpp"
#include "jrc/config.hpp"
#include "jrc/frame.hpp"
#include "jrc/tx_pipeline.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace jrc {

/// Unstructured radar channel estimate: one column per virtual channel in
/// the order (rx 0, tx 0), (rx 0, tx 1), ..., (rx N_rx-1, tx N_tx-1), so
/// column c sits at virtual position c * d_tx on the uniform array.
struct MeasurementMatrix {
    int n_sc = 0;
    int n_virt = 0;
    std::vector<cplx> h; // [subcarrier][virtual channel], row-major
    uint64_t frame_index = 0;

    MeasurementMatrix() = default;
    MeasurementMatrix(int sc, int nv)
        : n_sc(sc), n_virt(nv), h(static_cast<std::size_t>(sc) * nv) {}

    cplx& at(int sc, int v) { return h[static_cast<std::size_t>(sc) * n_virt + v]; }
    const cplx& at(int sc, int v) const { return h[static_cast<std::size_t>(sc) * n_virt + v]; }
};

/// Symbol-aligned OFDM demodulation of the reflected stream (monostatic:
/// reception starts with transmission, so timing is exact).
ComplexGrid ofdm_demodulate(const RxBaseband& rx, const SystemConfig& cfg);

/// Per-virtual-channel least squares from the time-orthogonal MIMO
/// preamble slots: h_{k,l}[n] = Y_k[slot l][n] / X_l[slot l][n] on
/// occupied subcarriers. Subcarriers whose reference magnitude falls
/// below the floor (possible only for precoded frames) are zeroed.
MeasurementMatrix estimate_radar_channel(const ComplexGrid& rx_grid, const FrameGrid& known,
                                         const SystemConfig& cfg);

/// Sliding-mean background estimator over the last n_win measurements.
/// Capture is driven explicitly; the estimate freezes when capture stops.
class SiCanceller {
public:
    explicit SiCanceller(int n_win = 10);

    int window_depth() const { return n_win_; }
    void capture(const MeasurementMatrix& m);
    int captured() const { return static_cast<int>(window_.size()); }
    /// fewer frames captured than the window depth
    bool provisional() const { return captured() < n_win_; }

    void set_active(bool active) { active_ = active; }
    bool active() const { return active_; }

    /// Elementwise mean of the captured window. Throws if nothing captured.
    MeasurementMatrix estimate() const;
    /// Install a previously saved estimate (CLI state file).
    void load_estimate(const MeasurementMatrix& m);

    /// latest - estimate when active, identity pass-through otherwise
    MeasurementMatrix remove(const MeasurementMatrix& latest) const;

private:
    int n_win_;
    std::deque<MeasurementMatrix> window_;
    std::optional<MeasurementMatrix> loaded_;
    bool active_ = false;
};

/// Elementwise subtraction helper (si inactive -> pass-through).
MeasurementMatrix remove_si(const MeasurementMatrix& latest, const MeasurementMatrix& si_estimate,
                            bool active);

struct NoiseFloorParams {
    double far_field_fraction = 0.75; // bins with range beyond this fraction of r_max
    // rows dropped around the global peak, measured circularly: the range
    // response wraps, so a close target's skirt shows up in the top rows
    int exclusion_rows = 24;
};

/// 2D power map: windowed inverse DFT over subcarriers (range) and DFT
/// over virtual elements (angle), both zero-padded and unitary; the noise
/// floor is the median far-field power.
struct RangeAngleImage {
    int n_range = 0;
    int n_angle = 0;
    std::vector<double> power; // [range][angle], linear
    RadarAxes axes;
    double noise_floor = 0;

    double& at(int r, int a) { return power[static_cast<std::size_t>(r) * n_angle + a]; }
    double at(int r, int a) const { return power[static_cast<std::size_t>(r) * n_angle + a]; }
};

RangeAngleImage range_angle_image(const MeasurementMatrix& m, const SystemConfig& cfg,
                                  const NoiseFloorParams& nf = {});

struct Detection {
    double range_m = 0;
    double angle_deg = 0;
    double snr_db = 0;
    double peak_power = 0;
    int range_bin = 0;
    int angle_bin = 0;
};

/// Single global maximum with its SNR against the image noise floor.
Detection detect_global_peak(const RangeAngleImage& img);

struct CfarParams {
    // guard window sized to the zero-padded mainlobe of the default plan
    int guard_range = 6;
    int guard_angle = 8;
    int train_range = 6; // strip depth beyond the guard, in range bins
    double pfa = 1e-4;
    // never let the local estimate drop below the image noise floor; on a
    // heavily zero-padded map the training cells are correlated and their
    // mean can dip far under the true noise level
    bool clamp_to_floor = true;
};

/// Cell-averaging CFAR with the exact exponential-noise threshold factor.
/// Training cells are the range strips directly above and below the guard
/// box (same angle span), which keeps the estimate clean when several
/// targets share a range row. An exceedance is reported only if it is
/// also the maximum of its guard window (peak grouping). Sorted by SNR,
/// strongest first.
std::vector<Detection> detect_cfar(const RangeAngleImage& img, const CfarParams& params);

enum class ImageAxis : uint8_t { Range, Angle };

struct HalfPowerWidth {
    double width = 0; // meters or degrees
    bool bounded = false;
};

/// -3 dB width of the 1D cut through a detection, linear interpolation
/// between bins; unbounded when a crossing leaves the image extent.
HalfPowerWidth half_power_width(const RangeAngleImage& img, const Detection& det, ImageAxis axis);

} // namespace jrc

#endif
