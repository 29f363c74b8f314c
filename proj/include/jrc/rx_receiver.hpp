#ifndef JRC_RX_RECEIVER_HPP
#define JRC_RX_RECEIVER_HPP

#include "jrc/config.hpp"
#include "jrc/frame.hpp"
#include "jrc/tx_pipeline.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jrc {

/// Moving-average DC notch (window 64): zero gain at DC, unity at every
/// subcarrier frequency.
std::vector<cplx> dc_block(std::span<const cplx> stream);

struct DetectorParams {
    double threshold = 0.8;
    int plateau = 16;  // consecutive samples over threshold
    int window = 48;   // correlation window W
};

struct SyncState {
    std::size_t frame_start = 0; // sample index in the scanned stream
    double detect_metric = 0;    // metric at the plateau start
    double coarse_cfo_hz = 0;
    double fine_cfo_hz = 0;
    double residual_cfo_hz = 0; // pilot-slope refinement over the payload
    int timing_offset = 0;      // fine-sync correction applied, samples
    bool cfo_out_of_range = false;

    double total_cfo_hz() const { return coarse_cfo_hz + fine_cfo_hz + residual_cfo_hz; }
};

/// Delay-and-correlate scan (lag 16 = STS period). Returns the plateau
/// start of the first detection at/after `from`, or nullopt.
std::optional<SyncState> detect_frame(std::span<const cplx> stream, const DetectorParams& params,
                                      std::size_t from = 0);

/// Correlation metric trace m[n] (exposed for analysis/tests).
std::vector<double> detect_metric(std::span<const cplx> stream, const DetectorParams& params);

/// STS-based CFO from the lag-16 autocorrelation phase. Estimates beyond
/// 95% of the ambiguity bound B/32 are flagged out of range.
double estimate_coarse_cfo(std::span<const cplx> stream, std::size_t frame_start,
                           const SystemConfig& cfg, bool* out_of_range = nullptr);

/// Residual CFO from the lag-(N_sc+N_cp) correlation across the two
/// (identical) LTS symbols.
double estimate_fine_cfo(std::span<const cplx> stream, std::size_t frame_start,
                         const SystemConfig& cfg);

/// Cross-correlate the known LTS waveform around the expected position;
/// returns the timing correction in samples (search window ±search).
int fine_time_offset(std::span<const cplx> stream, std::size_t frame_start,
                     const SystemConfig& cfg, int search = 16);

enum class EstimatorKind : uint8_t { Ls, Sta };

/// Per-subcarrier channel estimate. h_eff is the effective SISO channel;
/// h_mimo ([subcarrier][tx], row-major) is filled from NDP preambles.
struct ChannelEstimate {
    EstimatorKind kind = EstimatorKind::Ls;
    std::vector<cplx> h_eff;  // size n_sc, zero on guard carriers
    std::vector<cplx> h_mimo; // n_sc * n_tx or empty
};

/// LS estimate from the two LTS symbols (averaged).
std::vector<cplx> ls_estimate(std::span<const cplx> lts_sym0, std::span<const cplx> lts_sym1,
                              const SystemConfig& cfg);

/// Per-TX columns from the time-orthogonal MIMO preamble (NDP).
std::vector<cplx> mimo_estimate(const std::vector<std::vector<cplx>>& preamble_symbols,
                                const SystemConfig& cfg);

/// Effective precoded channel: sum of the preamble slots divided by the
/// training sequence (DATA frames).
std::vector<cplx> effective_estimate(const std::vector<std::vector<cplx>>& preamble_symbols,
                                     const SystemConfig& cfg);

struct StaParams {
    double alpha = 2.0; // time update: h += (h_freq - h)/alpha
    int beta = 2;       // frequency smoothing half-width over occupied bins
};

/// Decision-directed spectral temporal averaging update.
std::vector<cplx> sta_update(const std::vector<cplx>& prev, std::span<const cplx> rx_symbol,
                             std::span<const cplx> decided_symbol, const StaParams& params,
                             const SystemConfig& cfg);

struct EqualizedSymbol {
    std::vector<cplx> data;      // data-carrier symbols after ZF + CPE removal
    std::vector<uint8_t> erased; // parallel flags
    std::vector<cplx> pilots;    // equalized pilots after CPE removal
    double cpe_rad = 0;
};

/// Zero-forcing per subcarrier plus common-phase-error removal from the
/// pilots. Subcarriers with |h| below the floor are flagged erased.
EqualizedSymbol equalize(std::span<const cplx> rx_symbol, const std::vector<cplx>& h,
                         const SystemConfig& cfg, double channel_floor = 1e-9);

/// Pilot-residual SNR estimate in dB, capped at 60 dB.
double estimate_snr(std::span<const cplx> equalized_pilots, std::span<const cplx> known_pilots);

struct DecodedPacket {
    FrameKind kind = FrameKind::DATA;
    Mcs mcs;
    std::vector<uint8_t> payload;
    bool crc_ok = false;
    double snr_db = 0;
    uint64_t frame_index = 0;
    SyncState sync;
};

struct ReceiverOptions {
    DetectorParams detector;
    EstimatorKind estimator = EstimatorKind::Ls;
    StaParams sta;
    std::string feedback_path; // written on every decoded NDP when set
    int timing_backoff = 3;    // samples into the CP ahead of the synced start
};

/// Stream receiver: detect, synchronize, estimate, equalize, decode.
/// Packets come back in frame order; frames with a bad header are dropped
/// with a diagnostic counter, CRC failures are delivered with crc_ok=false.
class Receiver {
public:
    Receiver(const SystemConfig& cfg, ReceiverOptions opts = {});

    std::vector<DecodedPacket> process(std::span<const cplx> stream);

    uint64_t frames_detected() const { return frames_detected_; }
    uint64_t header_failures() const { return header_failures_; }

    /// Feedback matrix from the last decoded NDP ([subcarrier][tx]), empty
    /// if none seen.
    const std::vector<cplx>& last_ndp_estimate() const { return last_ndp_estimate_; }

private:
    std::optional<DecodedPacket> decode_frame(std::span<const cplx> stream, SyncState& sync,
                                              std::size_t* frame_end);

    const SystemConfig& cfg_;
    ReceiverOptions opts_;
    OfdmModem modem_;
    std::vector<cplx> lts_time_; // known LTS body for fine timing
    uint64_t frames_detected_ = 0;
    uint64_t header_failures_ = 0;
    uint64_t frame_counter_ = 0;
    std::vector<cplx> last_ndp_estimate_;
};

} // namespace jrc

#endif
