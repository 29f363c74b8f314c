#include "jrc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace jrc {

int Mcs::bits_per_symbol() const
{
    switch (modulation) {
    case Modulation::BPSK: return 1;
    case Modulation::QPSK: return 2;
    case Modulation::QAM16: return 4;
    }
    return 0;
}

int Mcs::data_bits_per_ofdm_symbol(int n_data_carriers) const
{
    int coded = coded_bits_per_ofdm_symbol(n_data_carriers);
    return code_rate == CodeRate::Half ? coded / 2 : (coded * 3) / 4;
}

int Mcs::id() const
{
    int m = modulation == Modulation::BPSK ? 0 : modulation == Modulation::QPSK ? 1 : 2;
    int r = code_rate == CodeRate::Half ? 0 : 1;
    return m * 2 + r;
}

Mcs Mcs::from_id(int id)
{
    if (id < 0 || id > 5)
        throw std::invalid_argument("Mcs::from_id: id out of range");
    Mcs mcs;
    mcs.modulation = id / 2 == 0 ? Modulation::BPSK : id / 2 == 1 ? Modulation::QPSK : Modulation::QAM16;
    mcs.code_rate = id % 2 == 0 ? CodeRate::Half : CodeRate::ThreeQuarter;
    return mcs;
}

Mcs Mcs::parse(const std::string& name)
{
    std::string s;
    for (char c : name)
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    static const std::map<std::string, int> table = {
        { "bpsk-1/2", 0 }, { "bpsk-3/4", 1 },
        { "qpsk-1/2", 2 }, { "qpsk-3/4", 3 },
        { "qam16-1/2", 4 }, { "qam16-3/4", 5 },
    };
    auto it = table.find(s);
    if (it == table.end())
        throw std::invalid_argument("unknown MCS: " + name);
    return from_id(it->second);
}

std::string Mcs::name() const
{
    std::string m = modulation == Modulation::BPSK ? "bpsk" : modulation == Modulation::QPSK ? "qpsk" : "qam16";
    return m + (code_rate == CodeRate::Half ? "-1/2" : "-3/4");
}

std::string to_string(WindowKind w)
{
    return w == WindowKind::Rect ? "rect" : "hann";
}

WindowKind window_from_string(const std::string& s)
{
    if (s == "rect")
        return WindowKind::Rect;
    if (s == "hann")
        return WindowKind::Hann;
    throw std::invalid_argument("unknown window kind: " + s);
}

std::vector<int> SystemConfig::occupied_carriers() const
{
    std::vector<int> occ = data_carriers;
    occ.insert(occ.end(), pilot_carriers.begin(), pilot_carriers.end());
    std::sort(occ.begin(), occ.end());
    return occ;
}

SystemConfig SystemConfig::defaults()
{
    SystemConfig cfg;
    const int n = cfg.n_subcarriers;
    std::set<int> pilots_logical = { -21, -7, 7, 21 };
    for (int s = -26; s <= 26; ++s) {
        if (s == 0)
            continue;
        if (pilots_logical.count(s))
            continue;
        cfg.data_carriers.push_back(natural_carrier_index(s, n));
    }
    for (int s : { -21, -7, 7, 21 })
        cfg.pilot_carriers.push_back(natural_carrier_index(s, n));

    std::set<int> used(cfg.data_carriers.begin(), cfg.data_carriers.end());
    used.insert(cfg.pilot_carriers.begin(), cfg.pilot_carriers.end());
    for (int i = 0; i < n; ++i)
        if (!used.count(i))
            cfg.guard_carriers.push_back(i);

    std::sort(cfg.data_carriers.begin(), cfg.data_carriers.end());
    std::sort(cfg.pilot_carriers.begin(), cfg.pilot_carriers.end());
    // keep pilot_values aligned with sorted natural order of pilot carriers:
    // natural order is {7, 21, 43(-21), 57(-7)} -> values {1, -1, 1, 1}
    cfg.pilot_values = { { 1, 0 }, { -1, 0 }, { 1, 0 }, { 1, 0 } };
    return cfg;
}

RadarAxes derive_radar_axes(const SystemConfig& cfg)
{
    RadarAxes axes;
    const double bin_m = cfg.range_resolution() * cfg.n_subcarriers / cfg.range_fft_size;
    axes.range_m.resize(cfg.range_fft_size);
    for (int i = 0; i < cfg.range_fft_size; ++i)
        axes.range_m[i] = i * bin_m;

    const int na = cfg.angle_fft_size;
    axes.angle_deg.resize(na);
    axes.angle_valid.resize(na);
    const double lambda = cfg.wavelength();
    for (int i = 0; i < na; ++i) {
        int k = i - na / 2; // centered spatial frequency index
        double sin_theta = lambda * k / (na * cfg.tx_spacing_m);
        if (std::abs(sin_theta) <= 1.0) {
            axes.angle_deg[i] = std::asin(sin_theta) * 180.0 / M_PI;
            axes.angle_valid[i] = true;
        } else {
            axes.angle_deg[i] = std::numeric_limits<double>::quiet_NaN();
            axes.angle_valid[i] = false;
        }
    }
    return axes;
}

namespace {

bool is_power_of_two(int v)
{
    return v > 0 && (v & (v - 1)) == 0;
}

} // namespace

std::vector<std::string> validate_config(const SystemConfig& cfg)
{
    std::vector<std::string> errors;
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    if (cfg.carrier_hz <= 0)
        fail("carrier_hz: must be positive");
    if (cfg.bandwidth_hz <= 0)
        fail("bandwidth_hz: must be positive");
    if (!is_power_of_two(cfg.n_subcarriers))
        fail("n_subcarriers: must be a power of two");
    if (cfg.cyclic_prefix < 0)
        fail("cyclic_prefix: must be non-negative");
    if (cfg.cyclic_prefix >= cfg.n_subcarriers)
        fail("cyclic_prefix: cyclic prefix too long (must be < n_subcarriers)");
    if (cfg.n_tx < 1)
        fail("n_tx: must be >= 1");
    if (cfg.n_rx < 1)
        fail("n_rx: must be >= 1");
    if (cfg.tx_spacing_m <= 0)
        fail("tx_spacing_m: must be positive");
    if (cfg.rx_spacing_m <= 0)
        fail("rx_spacing_m: must be positive");

    const double want_rx = cfg.n_tx * cfg.tx_spacing_m;
    if (std::abs(cfg.rx_spacing_m - want_rx) > 1e-12 * std::max(1.0, want_rx)) {
        std::ostringstream os;
        os << "rx_spacing_m: must equal n_tx * tx_spacing_m (" << want_rx
           << ") for a uniform virtual array, got " << cfg.rx_spacing_m;
        fail(os.str());
    }

    // index sets: in range, disjoint, and covering [0, N)
    auto check_range = [&](const std::vector<int>& v, const char* name) {
        for (int idx : v)
            if (idx < 0 || idx >= cfg.n_subcarriers) {
                std::ostringstream os;
                os << name << ": carrier index " << idx << " out of [0, " << cfg.n_subcarriers << ")";
                fail(os.str());
            }
    };
    check_range(cfg.data_carriers, "data_carriers");
    check_range(cfg.pilot_carriers, "pilot_carriers");
    check_range(cfg.guard_carriers, "guard_carriers");

    std::map<int, std::string> owner;
    auto claim = [&](const std::vector<int>& v, const std::string& name) {
        for (int idx : v) {
            auto [it, inserted] = owner.emplace(idx, name);
            if (!inserted) {
                std::ostringstream os;
                os << name << ": carrier index " << idx << " also present in " << it->second;
                fail(os.str());
            }
        }
    };
    claim(cfg.data_carriers, "data_carriers");
    claim(cfg.pilot_carriers, "pilot_carriers");
    claim(cfg.guard_carriers, "guard_carriers");
    if (static_cast<int>(owner.size()) != cfg.n_subcarriers) {
        std::ostringstream os;
        os << "carrier sets: union covers " << owner.size() << " of " << cfg.n_subcarriers << " subcarriers";
        fail(os.str());
    }

    if (cfg.pilot_values.size() != cfg.pilot_carriers.size())
        fail("pilot_values: count must match pilot_carriers");

    if (!is_power_of_two(cfg.range_fft_size) || cfg.range_fft_size < cfg.n_subcarriers)
        fail("range_fft_size: must be a power of two >= n_subcarriers");
    if (!is_power_of_two(cfg.angle_fft_size) || cfg.angle_fft_size < cfg.n_virtual())
        fail("angle_fft_size: must be a power of two >= n_tx*n_rx");

    return errors;
}

void require_valid(const SystemConfig& cfg)
{
    auto errors = validate_config(cfg);
    if (errors.empty())
        return;
    std::string msg = "invalid config:";
    for (const auto& e : errors)
        msg += "\n  " + e;
    throw std::invalid_argument(msg);
}

} // namespace jrc
