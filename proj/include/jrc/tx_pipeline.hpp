#ifndef JRC_TX_PIPELINE_HPP
#define JRC_TX_PIPELINE_HPP

#include "jrc/coding.hpp"
#include "jrc/config.hpp"
#include "jrc/fft.hpp"
#include "jrc/frame.hpp"
#include "jrc/mapping.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace jrc {

/// Coded and punctured payload bits, ready for symbol mapping.
/// Bit layout before encoding: scrambler seed byte (in clear) ||
/// scrambled(payload || CRC-32) || 6 tail zeros || zero pad up to a whole
/// number of OFDM symbols.
struct EncodedStream {
    std::vector<uint8_t> bits; // coded+punctured
    Mcs mcs;
    std::size_t source_len = 0; // payload bytes (before CRC)
    uint8_t scramble_seed = 0;
    int n_symbols = 0; // payload OFDM symbols
};

EncodedStream encode_stream(std::span<const uint8_t> payload, Mcs mcs,
                            const SystemConfig& cfg, uint8_t scramble_seed = 0x5D);

/// 24-bit header field: {4-bit MCS id, 12-bit length, 1-bit kind,
/// 1-bit even parity, 6 tail zeros}, then rate-1/2 coded to 48 BPSK bits.
std::vector<uint8_t> build_header_bits(Mcs mcs, std::size_t payload_len, FrameKind kind);

struct HeaderFields {
    Mcs mcs;
    std::size_t payload_len = 0;
    FrameKind kind = FrameKind::NDP;
};

/// Decode 24 header bits back to fields; nullopt on parity failure.
std::optional<HeaderFields> parse_header_bits(std::span<const uint8_t> bits24);

/// Per-subcarrier transmit weights, one vector of n_tx weights per
/// subcarrier, unit L2 norm (total radiated power independent of steering).
struct SteeringMatrix {
    enum class Source : uint8_t { Identity, Feedback };

    int n_sc = 0;
    int n_tx = 0;
    std::vector<cplx> w; // [subcarrier][tx], row-major
    Source source = Source::Identity;

    cplx& at(int sc, int tx) { return w[static_cast<std::size_t>(sc) * n_tx + tx]; }
    const cplx& at(int sc, int tx) const { return w[static_cast<std::size_t>(sc) * n_tx + tx]; }

    static SteeringMatrix identity(const SystemConfig& cfg);
};

/// Maximum-ratio weights w[n] = conj(h[n]) / ||h[n]|| from a channel
/// feedback matrix [subcarrier][tx]; identity fallback per subcarrier
/// when the feedback vector is all zero.
SteeringMatrix compute_steering(const std::vector<cplx>& feedback, int n_sc, int n_tx,
                                const SystemConfig& cfg);

/// Build the frequency-domain frame. DATA requires a stream, NDP forbids
/// one. STS/LTS (and the header) go out unprecoded on the first two
/// chains; the MIMO preamble is time-orthogonal (slot l active on chain l)
/// and, for DATA, scaled by that chain's steering weight.
FrameGrid assemble_frame(const EncodedStream* stream, FrameKind kind,
                         const SteeringMatrix& steering, const SystemConfig& cfg);

/// Per-chain time-domain baseband samples.
struct TxBaseband {
    std::vector<std::vector<cplx>> chains;
    double sample_rate = 0;
    std::vector<std::size_t> frame_starts;

    std::size_t samples() const { return chains.empty() ? 0 : chains[0].size(); }
};

/// OFDM modulator/demodulator with a cached FFT plan. Unitary scaling in
/// both directions so a loopback round trip has gain exactly 1.
class OfdmModem {
public:
    explicit OfdmModem(const SystemConfig& cfg);

    TxBaseband modulate(const FrameGrid& grid) const;
    /// Unitary IDFT + cyclic prefix per symbol for an arbitrary grid.
    std::vector<std::vector<cplx>> synthesize(const ComplexGrid& grid) const;
    /// Inverse: drop the cyclic prefix and take the unitary DFT per symbol.
    ComplexGrid demodulate(const std::vector<std::vector<cplx>>& chains, int n_symbols,
                           std::size_t start = 0) const;
    ComplexGrid demodulate(const TxBaseband& bb, int n_symbols, std::size_t start = 0) const;
    /// Single-stream variant for the SISO receiver.
    std::vector<std::vector<cplx>> demodulate_stream(std::span<const cplx> stream, int n_symbols,
                                                     std::size_t start = 0) const;

private:
    const SystemConfig& cfg_;
    Fft fft_;
};

TxBaseband ofdm_modulate(const FrameGrid& grid, const SystemConfig& cfg);

/// Total number of payload OFDM symbols a payload of the given byte count
/// occupies at this MCS.
int payload_symbol_count(std::size_t payload_len, Mcs mcs, const SystemConfig& cfg);

} // namespace jrc

#endif
