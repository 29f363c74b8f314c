#ifndef JRC_CONFIG_HPP
#define JRC_CONFIG_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace jrc {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class Modulation : uint8_t { BPSK, QPSK, QAM16 };
enum class CodeRate : uint8_t { Half, ThreeQuarter };

struct Mcs {
    Modulation modulation{Modulation::QPSK};
    CodeRate code_rate{CodeRate::Half};

    int bits_per_symbol() const;
    /// coded bits per OFDM symbol given the number of data subcarriers
    int coded_bits_per_ofdm_symbol(int n_data_carriers) const { return bits_per_symbol() * n_data_carriers; }
    /// information bits per OFDM symbol (coded bits scaled by the code rate)
    int data_bits_per_ofdm_symbol(int n_data_carriers) const;

    /// compact id used in the header field; ids 0..5 cover the 6 supported MCS
    int id() const;
    static Mcs from_id(int id);
    static Mcs parse(const std::string& name); // e.g. "qam16-3/4", "qpsk-1/2"
    std::string name() const;

    bool operator==(const Mcs&) const = default;
};

enum class FrameKind : uint8_t { NDP, DATA };

enum class WindowKind : uint8_t { Rect, Hann };

std::string to_string(WindowKind w);
WindowKind window_from_string(const std::string& s);

/// All radio and waveform parameters. Subcarrier index sets are stored in
/// FFT-natural order (0..N-1 with negative frequencies wrapped into the
/// upper half). Immutable after validation.
struct SystemConfig {
    double carrier_hz = 24e9;
    double bandwidth_hz = 125e6;
    int n_subcarriers = 64;
    int cyclic_prefix = 16;
    int n_tx = 4;
    int n_rx = 2;
    double tx_spacing_m = 6.35e-3;
    double rx_spacing_m = 25.4e-3;

    std::vector<int> data_carriers;
    std::vector<int> pilot_carriers;
    std::vector<int> guard_carriers;
    std::vector<std::complex<double>> pilot_values;

    int range_fft_size = 256;
    int angle_fft_size = 128;
    WindowKind range_window = WindowKind::Rect;
    WindowKind angle_window = WindowKind::Rect;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }
    double max_range() const { return n_subcarriers * range_resolution(); }
    int n_virtual() const { return n_tx * n_rx; }
    int symbol_samples() const { return n_subcarriers + cyclic_prefix; }
    double tx_element_pos(int l) const { return l * tx_spacing_m; }
    double rx_element_pos(int k) const { return k * rx_spacing_m; }
    /// virtual element position of the (rx k, tx l) pair
    double virtual_element_pos(int k, int l) const { return tx_element_pos(l) + rx_element_pos(k); }

    /// data ∪ pilot carriers, sorted in natural index order
    std::vector<int> occupied_carriers() const;

    /// 64-subcarrier plan from the reference deployment: 48 data carriers,
    /// pilots at logical ±7 and ±21, DC null, remaining carriers guard.
    static SystemConfig defaults();
};

/// signed logical subcarrier index -> FFT-natural index
inline int natural_carrier_index(int logical, int n_sc) { return (logical % n_sc + n_sc) % n_sc; }
/// FFT-natural index -> signed logical index in [-N/2, N/2)
inline int logical_carrier_index(int natural, int n_sc) { return natural < n_sc / 2 ? natural : natural - n_sc; }
/// signed baseband frequency of a natural subcarrier index, Hz
inline double carrier_frequency_hz(int natural, const SystemConfig& cfg)
{
    return logical_carrier_index(natural, cfg.n_subcarriers) * cfg.bandwidth_hz / cfg.n_subcarriers;
}

/// Physical axes of the range-angle map. Angle bins whose spatial frequency
/// maps outside |sin| <= 1 are flagged invalid (NaN angle).
struct RadarAxes {
    std::vector<double> range_m;    // size range_fft_size
    std::vector<double> angle_deg;  // size angle_fft_size, centered (ascending)
    std::vector<bool> angle_valid;  // parallel to angle_deg
};

RadarAxes derive_radar_axes(const SystemConfig& cfg);

/// Returns one diagnostic per violated invariant; empty means valid.
std::vector<std::string> validate_config(const SystemConfig& cfg);

/// Throws std::invalid_argument listing every violation.
void require_valid(const SystemConfig& cfg);

} // namespace jrc

#endif
