#include "jrc/rx_receiver.hpp"

#include "jrc/coding.hpp"
#include "jrc/fft.hpp"
#include "jrc/io_formats.hpp"
#include "jrc/kernels.hpp"
#include "jrc/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jrc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kDcBlockWindow = 64;
constexpr int kStsLag = 16;
constexpr double kSnrCapDb = 60.0;

} // namespace

std::vector<cplx> dc_block(std::span<const cplx> stream)
{
    std::vector<cplx> out(stream.size());
    cplx acc(0.0, 0.0);
    for (std::size_t n = 0; n < stream.size(); ++n) {
        acc += stream[n];
        std::size_t w = kDcBlockWindow;
        if (n >= w)
            acc -= stream[n - w];
        else
            w = n + 1;
        out[n] = stream[n] - acc / static_cast<double>(w);
    }
    return out;
}

namespace {

// Sliding lag-16 correlation, m = |corr| / E_lag. Both window energies
// are tracked: at the trailing edge of a frame the lag window collapses
// onto the noise tail and the one-sided metric spikes, so plateau
// qualification also requires the two energies to be comparable.
struct SlidingCorrelator {
    std::span<const cplx> stream;
    int W;
    std::size_t pos;
    cplx corr{ 0.0, 0.0 };
    double e_lead = 0.0;
    double e_lag = 0.0;

    SlidingCorrelator(std::span<const cplx> s, int window, std::size_t from)
        : stream(s), W(window), pos(from)
    {
        recompute();
    }

    void recompute()
    {
        corr = kernels::dot_conj(stream.data() + pos, stream.data() + pos + kStsLag, W);
        e_lead = kernels::energy(stream.data() + pos, W);
        e_lag = kernels::energy(stream.data() + pos + kStsLag, W);
    }

    double metric() const
    {
        return e_lag > 1e-30 ? std::abs(corr) / e_lag : 0.0;
    }

    bool balanced() const
    {
        return e_lag >= 0.25 * e_lead;
    }

    void advance()
    {
        ++pos;
        if (pos % 4096 == 0) {
            recompute(); // bound floating-point drift of the sliding sums
            return;
        }
        corr += stream[pos + W - 1] * std::conj(stream[pos + W - 1 + kStsLag]);
        corr -= stream[pos - 1] * std::conj(stream[pos - 1 + kStsLag]);
        e_lead += std::norm(stream[pos + W - 1]);
        e_lead -= std::norm(stream[pos - 1]);
        e_lag += std::norm(stream[pos + W - 1 + kStsLag]);
        e_lag -= std::norm(stream[pos - 1 + kStsLag]);
    }
};

} // namespace

std::vector<double> detect_metric(std::span<const cplx> stream, const DetectorParams& params)
{
    const int W = params.window;
    if (static_cast<std::size_t>(W + kStsLag) > stream.size())
        return {};
    const std::size_t n_out = stream.size() - W - kStsLag + 1;
    std::vector<double> m(n_out, 0.0);
    SlidingCorrelator sc(stream, W, 0);
    for (std::size_t n = 0; n < n_out; ++n) {
        if (n != 0)
            sc.advance();
        m[n] = sc.metric();
    }
    return m;
}

std::optional<SyncState> detect_frame(std::span<const cplx> stream, const DetectorParams& params,
                                      std::size_t from)
{
    const int W = params.window;
    if (from + W + kStsLag > stream.size())
        return std::nullopt;

    SlidingCorrelator sc(stream, W, from);
    const std::size_t n_last = stream.size() - W - kStsLag;
    std::size_t run_start = 0;
    int run = 0;
    for (std::size_t n = from; n <= n_last; ++n) {
        if (n != from)
            sc.advance();
        const double m = sc.metric();
        if (m > params.threshold && sc.balanced()) {
            if (run == 0)
                run_start = n;
            if (++run >= params.plateau) {
                SyncState ss;
                ss.frame_start = run_start;
                ss.detect_metric = m;
                return ss;
            }
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

double estimate_coarse_cfo(std::span<const cplx> stream, std::size_t frame_start,
                           const SystemConfig& cfg, bool* out_of_range)
{
    // products well inside the 160-sample STS span to tolerate timing error
    const std::size_t begin = frame_start + 4;
    const std::size_t count = 120;
    if (begin + count + kStsLag > stream.size())
        throw std::invalid_argument("estimate_coarse_cfo: stream too short");
    cplx p = kernels::dot_conj(stream.data() + begin, stream.data() + begin + kStsLag, count);
    const double ang = std::arg(p);
    if (out_of_range)
        *out_of_range = std::abs(ang) > 0.95 * kPi;
    return -ang * cfg.bandwidth_hz / (2.0 * kPi * kStsLag);
}

double estimate_fine_cfo(std::span<const cplx> stream, std::size_t frame_start,
                         const SystemConfig& cfg)
{
    const int sym = cfg.symbol_samples();
    const std::size_t body0 = frame_start + 2 * sym + cfg.cyclic_prefix;
    if (body0 + cfg.n_subcarriers + sym > stream.size())
        throw std::invalid_argument("estimate_fine_cfo: stream too short");
    // the two LTS symbols are identical, so the stream repeats at lag sym
    cplx p = kernels::dot_conj(stream.data() + body0, stream.data() + body0 + sym,
                               cfg.n_subcarriers);
    return -std::arg(p) * cfg.bandwidth_hz / (2.0 * kPi * sym);
}

int fine_time_offset(std::span<const cplx> stream, std::size_t frame_start,
                     const SystemConfig& cfg, int search)
{
    const int sym = cfg.symbol_samples();
    const int n_sc = cfg.n_subcarriers;
    Fft fft(static_cast<std::size_t>(n_sc));
    auto lts_time = fft.inverse_unitary(long_training_sequence(n_sc));

    const std::ptrdiff_t body0 = static_cast<std::ptrdiff_t>(frame_start) + 2 * sym + cfg.cyclic_prefix;
    const std::ptrdiff_t body1 = body0 + sym;
    double best = -1.0;
    int best_delta = 0;
    for (int d = -search; d <= search; ++d) {
        std::ptrdiff_t p0 = body0 + d;
        std::ptrdiff_t p1 = body1 + d;
        if (p0 < 0 || static_cast<std::size_t>(p1 + n_sc) > stream.size())
            continue;
        double score = std::abs(kernels::dot_conj(stream.data() + p0, lts_time.data(), n_sc))
            + std::abs(kernels::dot_conj(stream.data() + p1, lts_time.data(), n_sc));
        if (score > best) {
            best = score;
            best_delta = d;
        }
    }
    return best_delta;
}

std::vector<cplx> ls_estimate(std::span<const cplx> lts_sym0, std::span<const cplx> lts_sym1,
                              const SystemConfig& cfg)
{
    const auto lts = long_training_sequence(cfg.n_subcarriers);
    std::vector<cplx> h(cfg.n_subcarriers, cplx(0.0, 0.0));
    for (int n : cfg.occupied_carriers())
        h[n] = (lts_sym0[n] + lts_sym1[n]) / (2.0 * lts[n]);
    return h;
}

namespace {

/// occupied carriers sorted by signed frequency so that adjacency means
/// adjacency in frequency (the natural index order wraps mid-band)
std::vector<int> occupied_by_frequency(const SystemConfig& cfg)
{
    auto occ = cfg.occupied_carriers();
    std::sort(occ.begin(), occ.end(), [&](int a, int b) {
        return logical_carrier_index(a, cfg.n_subcarriers)
            < logical_carrier_index(b, cfg.n_subcarriers);
    });
    return occ;
}

/// uniform moving average over frequency-adjacent occupied carriers
void smooth_occupied(std::vector<cplx>& h, const SystemConfig& cfg, int half_width)
{
    if (half_width <= 0)
        return;
    const auto occ = occupied_by_frequency(cfg);
    const int n_occ = static_cast<int>(occ.size());
    std::vector<cplx> smoothed(n_occ);
    for (int i = 0; i < n_occ; ++i) {
        cplx sum(0.0, 0.0);
        int count = 0;
        for (int j = std::max(0, i - half_width); j <= std::min(n_occ - 1, i + half_width); ++j) {
            sum += h[occ[j]];
            ++count;
        }
        smoothed[i] = sum / static_cast<double>(count);
    }
    for (int i = 0; i < n_occ; ++i)
        h[occ[i]] = smoothed[i];
}

constexpr int kEstimateSmoothing = 2; // occupied-neighbor half-width

} // namespace

std::vector<cplx> mimo_estimate(const std::vector<std::vector<cplx>>& preamble_symbols,
                                const SystemConfig& cfg)
{
    if (static_cast<int>(preamble_symbols.size()) != cfg.n_tx)
        throw std::invalid_argument("mimo_estimate: need one preamble symbol per TX chain");
    const auto lts = long_training_sequence(cfg.n_subcarriers);
    std::vector<cplx> h(static_cast<std::size_t>(cfg.n_subcarriers) * cfg.n_tx, cplx(0.0, 0.0));
    std::vector<cplx> column(cfg.n_subcarriers, cplx(0.0, 0.0));
    for (int l = 0; l < cfg.n_tx; ++l) {
        std::fill(column.begin(), column.end(), cplx(0.0, 0.0));
        for (int n : cfg.occupied_carriers())
            column[n] = preamble_symbols[l][n] / lts[n];
        smooth_occupied(column, cfg, kEstimateSmoothing);
        for (int n : cfg.occupied_carriers())
            h[static_cast<std::size_t>(n) * cfg.n_tx + l] = column[n];
    }
    return h;
}

std::vector<cplx> effective_estimate(const std::vector<std::vector<cplx>>& preamble_symbols,
                                     const SystemConfig& cfg)
{
    if (static_cast<int>(preamble_symbols.size()) != cfg.n_tx)
        throw std::invalid_argument("effective_estimate: need one preamble symbol per TX chain");
    const auto lts = long_training_sequence(cfg.n_subcarriers);
    std::vector<cplx> h(cfg.n_subcarriers, cplx(0.0, 0.0));
    for (int n : cfg.occupied_carriers()) {
        cplx sum(0.0, 0.0);
        for (int l = 0; l < cfg.n_tx; ++l)
            sum += preamble_symbols[l][n];
        h[n] = sum / lts[n];
    }
    smooth_occupied(h, cfg, kEstimateSmoothing);
    return h;
}

std::vector<cplx> sta_update(const std::vector<cplx>& prev, std::span<const cplx> rx_symbol,
                             std::span<const cplx> decided_symbol, const StaParams& params,
                             const SystemConfig& cfg)
{
    if (params.alpha < 1.0)
        throw std::invalid_argument("sta_update: alpha must be >= 1");
    // frequency-sorted order: neighbor smoothing must not straddle the
    // wrap between the highest positive and lowest negative carrier
    const auto occupied = occupied_by_frequency(cfg);
    const int n_occ = static_cast<int>(occupied.size());

    std::vector<cplx> inst(n_occ);
    for (int i = 0; i < n_occ; ++i) {
        const cplx d = decided_symbol[occupied[i]];
        if (std::abs(d) <= 0.0)
            throw std::logic_error("sta_update: decided symbol has zero magnitude");
        inst[i] = rx_symbol[occupied[i]] / d;
    }

    std::vector<cplx> out = prev;
    for (int i = 0; i < n_occ; ++i) {
        cplx sum(0.0, 0.0);
        int count = 0;
        for (int j = std::max(0, i - params.beta); j <= std::min(n_occ - 1, i + params.beta); ++j) {
            sum += inst[j];
            ++count;
        }
        const cplx smoothed = sum / static_cast<double>(count);
        const int n = occupied[i];
        out[n] = prev[n] + (smoothed - prev[n]) / params.alpha;
    }
    return out;
}

EqualizedSymbol equalize(std::span<const cplx> rx_symbol, const std::vector<cplx>& h,
                         const SystemConfig& cfg, double channel_floor)
{
    EqualizedSymbol eq;
    eq.data.resize(cfg.data_carriers.size());
    eq.erased.assign(cfg.data_carriers.size(), 0);
    eq.pilots.resize(cfg.pilot_carriers.size());

    for (std::size_t j = 0; j < cfg.data_carriers.size(); ++j) {
        const int n = cfg.data_carriers[j];
        if (std::abs(h[n]) <= channel_floor) {
            eq.erased[j] = 1;
            eq.data[j] = cplx(0.0, 0.0);
        } else {
            eq.data[j] = rx_symbol[n] / h[n];
        }
    }

    cplx rot(0.0, 0.0);
    for (std::size_t j = 0; j < cfg.pilot_carriers.size(); ++j) {
        const int n = cfg.pilot_carriers[j];
        eq.pilots[j] = std::abs(h[n]) > channel_floor ? rx_symbol[n] / h[n] : cplx(0.0, 0.0);
        rot += eq.pilots[j] * std::conj(cfg.pilot_values[j]);
    }
    eq.cpe_rad = std::abs(rot) > 0.0 ? std::arg(rot) : 0.0;
    const cplx derot = std::polar(1.0, -eq.cpe_rad);
    for (auto& s : eq.data)
        s *= derot;
    for (auto& p : eq.pilots)
        p *= derot;
    return eq;
}

double estimate_snr(std::span<const cplx> equalized_pilots, std::span<const cplx> known_pilots)
{
    if (equalized_pilots.empty() || equalized_pilots.size() != known_pilots.size())
        throw std::invalid_argument("estimate_snr: pilot spans empty or mismatched");
    double sig = 0.0, err = 0.0;
    for (std::size_t i = 0; i < equalized_pilots.size(); ++i) {
        sig += std::norm(equalized_pilots[i]);
        err += std::norm(equalized_pilots[i] - known_pilots[i]);
    }
    sig /= static_cast<double>(equalized_pilots.size());
    err /= static_cast<double>(equalized_pilots.size());
    if (err <= sig * 1e-6)
        return kSnrCapDb;
    return std::min(kSnrCapDb, 10.0 * std::log10(sig / err));
}

Receiver::Receiver(const SystemConfig& cfg, ReceiverOptions opts)
    : cfg_(cfg), opts_(std::move(opts)), modem_(cfg)
{
    Fft fft(static_cast<std::size_t>(cfg.n_subcarriers));
    lts_time_ = fft.inverse_unitary(long_training_sequence(cfg.n_subcarriers));
}

std::vector<DecodedPacket> Receiver::process(std::span<const cplx> stream)
{
    // the DC notch feeds only the correlator; decoding runs on the raw
    // samples (the moving average smears energy across symbol boundaries)
    auto filtered = dc_block(stream);
    std::vector<DecodedPacket> packets;
    std::size_t pos = 0;
    while (auto det = detect_frame(filtered, opts_.detector, pos)) {
        ++frames_detected_;
        SyncState ss = *det;
        std::size_t frame_end = ss.frame_start + cfg_.symbol_samples();
        auto pkt = decode_frame(stream, ss, &frame_end);
        if (pkt) {
            pkt->frame_index = frame_counter_++;
            packets.push_back(std::move(*pkt));
        }
        pos = std::max(frame_end, ss.frame_start + 1);
    }
    return packets;
}

std::optional<DecodedPacket> Receiver::decode_frame(std::span<const cplx> stream, SyncState& sync,
                                                    std::size_t* frame_end)
{
    const int sym_len = cfg_.symbol_samples();
    const int n_lead = FrameLayout{ cfg_.n_tx, 0 }.total_symbols(); // up to end of MIMO preamble
    const std::size_t start = sync.frame_start;

    if (start + static_cast<std::size_t>(n_lead + 1) * sym_len + 32 > stream.size()) {
        ++header_failures_;
        return std::nullopt;
    }

    // working copy of the frame region, CFO-corrected in place
    std::vector<std::vector<cplx>> seg_chains(1);
    auto& seg = seg_chains[0];
    seg.assign(stream.begin() + start, stream.end());

    bool oob = false;
    const double coarse = estimate_coarse_cfo(seg, 0, cfg_, &oob);
    kernels::rotate(seg.data(), cplx(1.0, 0.0),
                    std::polar(1.0, -2.0 * kPi * coarse / cfg_.bandwidth_hz), seg.size());

    const int delta = fine_time_offset(seg, 0, cfg_);
    const std::ptrdiff_t sbase = delta; // true frame start, relative to seg

    const double fine = estimate_fine_cfo(seg, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, sbase)), cfg_);
    kernels::rotate(seg.data(), cplx(1.0, 0.0),
                    std::polar(1.0, -2.0 * kPi * fine / cfg_.bandwidth_hz), seg.size());

    sync.coarse_cfo_hz = coarse;
    sync.fine_cfo_hz = fine;
    sync.timing_offset = delta;
    sync.cfo_out_of_range = oob;
    sync.frame_start = start + static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, sbase));

    const std::ptrdiff_t win = sbase - opts_.timing_backoff;
    const std::size_t win_start = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, win));
    if (win_start + static_cast<std::size_t>(n_lead) * sym_len > seg.size()) {
        ++header_failures_;
        *frame_end = sync.frame_start + sym_len;
        return std::nullopt;
    }

    // undo the deliberate early FFT window: an integer shift of b samples
    // is a known linear phase over the natural carrier index, and removing
    // it here keeps the channel estimates ramp-free (the decision-directed
    // frequency smoothing would otherwise bias against the ramp)
    const int backoff_applied = static_cast<int>(sbase - static_cast<std::ptrdiff_t>(win_start));
    std::vector<cplx> deramp(cfg_.n_subcarriers);
    for (int n = 0; n < cfg_.n_subcarriers; ++n)
        deramp[n] = std::polar(1.0, 2.0 * kPi * n * backoff_applied / cfg_.n_subcarriers);
    auto apply_deramp = [&](ComplexGrid& g) {
        for (int s = 0; s < g.symbols(); ++s)
            kernels::cmul(g.symbol_ptr(0, s), deramp.data(), g.symbol_ptr(0, s),
                          cfg_.n_subcarriers);
    };

    FrameLayout layout{ cfg_.n_tx, 0 };
    ComplexGrid lead = modem_.demodulate(seg_chains, n_lead, win_start);
    apply_deramp(lead);

    // header over the LTS-based estimate
    std::vector<cplx> h_lts;
    {
        std::span<const cplx> l0(lead.symbol_ptr(0, layout.lts_offset()), cfg_.n_subcarriers);
        std::span<const cplx> l1(lead.symbol_ptr(0, layout.lts_offset() + 1), cfg_.n_subcarriers);
        h_lts = ls_estimate(l0, l1, cfg_);
    }
    std::span<const cplx> hdr_sym(lead.symbol_ptr(0, layout.header_offset()), cfg_.n_subcarriers);
    EqualizedSymbol hdr_eq = equalize(hdr_sym, h_lts, cfg_);
    auto hdr_coded = demap_symbols(hdr_eq.data, Modulation::BPSK, hdr_eq.erased);
    auto hdr_bits = viterbi_decode(hdr_coded, 24);
    auto header = parse_header_bits(hdr_bits);
    if (!header) {
        ++header_failures_;
        *frame_end = sync.frame_start + sym_len;
        return std::nullopt;
    }

    std::vector<std::vector<cplx>> preamble(cfg_.n_tx);
    for (int l = 0; l < cfg_.n_tx; ++l)
        preamble[l].assign(lead.symbol_ptr(0, layout.preamble_offset() + l),
                           lead.symbol_ptr(0, layout.preamble_offset() + l) + cfg_.n_subcarriers);

    DecodedPacket pkt;
    pkt.kind = header->kind;
    pkt.mcs = header->mcs;
    pkt.sync = sync;

    if (header->kind == FrameKind::NDP) {
        last_ndp_estimate_ = mimo_estimate(preamble, cfg_);
        if (!opts_.feedback_path.empty())
            io::write_feedback(opts_.feedback_path, last_ndp_estimate_, cfg_);
        pkt.crc_ok = true;
        pkt.snr_db = estimate_snr(hdr_eq.pilots, cfg_.pilot_values);
        *frame_end = sync.frame_start + static_cast<std::size_t>(n_lead) * sym_len;
        return pkt;
    }

    const int n_data = payload_symbol_count(header->payload_len, header->mcs, cfg_);
    const std::size_t payload_off = win_start + static_cast<std::size_t>(n_lead) * sym_len;
    if (payload_off + static_cast<std::size_t>(n_data) * sym_len > seg.size()) {
        ++header_failures_; // truncated capture
        *frame_end = sync.frame_start + sym_len;
        return std::nullopt;
    }
    ComplexGrid data_grid = modem_.demodulate(seg_chains, n_data, payload_off);
    apply_deramp(data_grid);

    std::vector<cplx> h = effective_estimate(preamble, cfg_);
    std::vector<int8_t> coded;
    coded.reserve(static_cast<std::size_t>(n_data)
                  * header->mcs.coded_bits_per_ofdm_symbol(static_cast<int>(cfg_.data_carriers.size())));
    std::vector<cplx> pilots_eq, pilots_known;
    std::vector<cplx> decided(cfg_.n_subcarriers);
    std::vector<double> cpe_track;
    cpe_track.reserve(n_data);

    for (int t = 0; t < n_data; ++t) {
        std::span<const cplx> y(data_grid.symbol_ptr(0, t), cfg_.n_subcarriers);
        EqualizedSymbol eq = equalize(y, h, cfg_);
        auto bits = demap_symbols(eq.data, header->mcs.modulation, eq.erased);
        coded.insert(coded.end(), bits.begin(), bits.end());
        pilots_eq.insert(pilots_eq.end(), eq.pilots.begin(), eq.pilots.end());
        pilots_known.insert(pilots_known.end(), cfg_.pilot_values.begin(), cfg_.pilot_values.end());
        cpe_track.push_back(eq.cpe_rad);

        if (opts_.estimator == EstimatorKind::Sta) {
            std::fill(decided.begin(), decided.end(), cplx(1.0, 0.0));
            for (std::size_t j = 0; j < cfg_.data_carriers.size(); ++j)
                decided[cfg_.data_carriers[j]] = hard_decision(eq.data[j], header->mcs.modulation);
            for (std::size_t j = 0; j < cfg_.pilot_carriers.size(); ++j)
                decided[cfg_.pilot_carriers[j]] = cfg_.pilot_values[j];
            h = sta_update(h, y, decided, opts_.sta, cfg_);
        }
    }

    auto depunctured = depuncture(coded, header->mcs.code_rate);
    const int dbps = header->mcs.data_bits_per_ofdm_symbol(static_cast<int>(cfg_.data_carriers.size()));
    auto info = viterbi_decode(depunctured, static_cast<std::size_t>(n_data) * dbps);

    const std::size_t body_bits = (header->payload_len + 4) * 8;
    if (info.size() < 8 + body_bits) {
        ++header_failures_;
        *frame_end = sync.frame_start + sym_len;
        return std::nullopt;
    }
    uint8_t seed = bits_to_bytes(std::span<const uint8_t>(info.data(), 8))[0];
    std::vector<uint8_t> body(info.begin() + 8, info.begin() + 8 + body_bits);
    if ((seed & 0x7F) != 0)
        scramble(body, seed);
    auto bytes = bits_to_bytes(body);
    pkt.payload.assign(bytes.begin(), bytes.begin() + header->payload_len);
    pkt.crc_ok = (seed & 0x7F) != 0 && crc_check(bytes);
    pkt.snr_db = estimate_snr(pilots_eq, pilots_known);

    // residual CFO from the common-phase-error slope over the payload
    // (wraps unwrapped symbol to symbol; the LS estimator leaves the
    // drift in the CPE where it is observable)
    if (n_data >= 4 && opts_.estimator == EstimatorKind::Ls) {
        double prev = cpe_track[0];
        std::vector<double> unwrapped(cpe_track.size());
        unwrapped[0] = prev;
        for (std::size_t t = 1; t < cpe_track.size(); ++t) {
            double v = cpe_track[t];
            while (v - prev > kPi)
                v -= 2.0 * kPi;
            while (v - prev < -kPi)
                v += 2.0 * kPi;
            unwrapped[t] = v;
            prev = v;
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double nd = static_cast<double>(unwrapped.size());
        for (std::size_t t = 0; t < unwrapped.size(); ++t) {
            sx += static_cast<double>(t);
            sy += unwrapped[t];
            sxx += static_cast<double>(t) * t;
            sxy += static_cast<double>(t) * unwrapped[t];
        }
        const double denom = sxx - sx * sx / nd;
        if (denom > 0) {
            const double slope = (sxy - sx * sy / nd) / denom; // rad per symbol
            sync.residual_cfo_hz = slope * cfg_.bandwidth_hz / (2.0 * kPi * sym_len);
            pkt.sync.residual_cfo_hz = sync.residual_cfo_hz;
        }
    }

    *frame_end = sync.frame_start + static_cast<std::size_t>(n_lead + n_data) * sym_len;
    return pkt;
}

} // namespace jrc
