#include "jrc/tx_pipeline.hpp"

#include "jrc/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace jrc {

namespace {

constexpr int kHeaderBits = 24;
constexpr int kTailBits = 6;
constexpr std::size_t kMaxPayloadLen = 4095; // 12-bit header length field

} // namespace

int payload_symbol_count(std::size_t payload_len, Mcs mcs, const SystemConfig& cfg)
{
    const int dbps = mcs.data_bits_per_ofdm_symbol(static_cast<int>(cfg.data_carriers.size()));
    // seed byte + payload + CRC-32, plus encoder tail
    const std::size_t n_bits = (1 + payload_len + 4) * 8 + kTailBits;
    return static_cast<int>((n_bits + dbps - 1) / dbps);
}

EncodedStream encode_stream(std::span<const uint8_t> payload, Mcs mcs,
                            const SystemConfig& cfg, uint8_t scramble_seed)
{
    if (payload.empty())
        throw std::invalid_argument("encode_stream: payload must be non-empty");
    if (payload.size() > kMaxPayloadLen)
        throw std::invalid_argument("encode_stream: payload exceeds the 12-bit length field");

    auto with_crc = crc32_append(payload);
    auto body = bytes_to_bits(with_crc);
    scramble(body, scramble_seed);

    std::vector<uint8_t> bits = bytes_to_bits(std::span<const uint8_t>(&scramble_seed, 1));
    bits.insert(bits.end(), body.begin(), body.end());
    bits.insert(bits.end(), kTailBits, 0);

    const int dbps = mcs.data_bits_per_ofdm_symbol(static_cast<int>(cfg.data_carriers.size()));
    const int n_sym = static_cast<int>((bits.size() + dbps - 1) / dbps);
    bits.resize(static_cast<std::size_t>(n_sym) * dbps, 0);

    EncodedStream out;
    out.bits = puncture(conv_encode(bits), mcs.code_rate);
    out.mcs = mcs;
    out.source_len = payload.size();
    out.scramble_seed = scramble_seed;
    out.n_symbols = n_sym;
    return out;
}

std::vector<uint8_t> build_header_bits(Mcs mcs, std::size_t payload_len, FrameKind kind)
{
    if (payload_len > kMaxPayloadLen)
        throw std::invalid_argument("build_header_bits: length overflow");
    std::vector<uint8_t> f(kHeaderBits, 0);
    int pos = 0;
    auto put = [&](unsigned value, int width) {
        for (int b = width - 1; b >= 0; --b)
            f[pos++] = static_cast<uint8_t>((value >> b) & 1);
    };
    put(static_cast<unsigned>(mcs.id()), 4);
    put(static_cast<unsigned>(payload_len), 12);
    // NDP encodes as 1 so a valid header field is never all zero (a silent
    // channel would otherwise decode as a sound frame)
    put(kind == FrameKind::NDP ? 1u : 0u, 1);
    uint8_t parity = 0;
    for (int i = 0; i < 17; ++i)
        parity ^= f[i];
    put(parity, 1); // even parity over the first 17 bits
    // remaining 6 tail bits stay zero
    return f;
}

std::optional<HeaderFields> parse_header_bits(std::span<const uint8_t> bits24)
{
    if (bits24.size() != kHeaderBits)
        return std::nullopt;
    uint8_t parity = 0;
    for (int i = 0; i < 18; ++i)
        parity ^= bits24[i];
    if (parity != 0)
        return std::nullopt;
    auto get = [&](int offset, int width) {
        unsigned v = 0;
        for (int i = 0; i < width; ++i)
            v = (v << 1) | bits24[offset + i];
        return v;
    };
    unsigned mcs_id = get(0, 4);
    if (mcs_id > 5)
        return std::nullopt;
    HeaderFields h;
    h.mcs = Mcs::from_id(static_cast<int>(mcs_id));
    h.payload_len = get(4, 12);
    h.kind = get(16, 1) ? FrameKind::NDP : FrameKind::DATA;
    if (h.kind == FrameKind::DATA && h.payload_len == 0)
        return std::nullopt; // DATA frames carry at least one payload byte
    if (h.kind == FrameKind::NDP && h.payload_len != 0)
        return std::nullopt;
    return h;
}

SteeringMatrix SteeringMatrix::identity(const SystemConfig& cfg)
{
    SteeringMatrix m;
    m.n_sc = cfg.n_subcarriers;
    m.n_tx = cfg.n_tx;
    m.w.assign(static_cast<std::size_t>(m.n_sc) * m.n_tx, cplx(0.0, 0.0));
    for (int n = 0; n < m.n_sc; ++n)
        m.at(n, 0) = cplx(1.0, 0.0);
    m.source = Source::Identity;
    return m;
}

SteeringMatrix compute_steering(const std::vector<cplx>& feedback, int n_sc, int n_tx,
                                const SystemConfig& cfg)
{
    if (n_sc != cfg.n_subcarriers || n_tx != cfg.n_tx)
        throw std::invalid_argument("compute_steering: feedback dimensions do not match config");
    if (feedback.size() != static_cast<std::size_t>(n_sc) * n_tx)
        throw std::invalid_argument("compute_steering: feedback size mismatch");

    SteeringMatrix m = SteeringMatrix::identity(cfg);
    for (int n = 0; n < n_sc; ++n) {
        const cplx* h = feedback.data() + static_cast<std::size_t>(n) * n_tx;
        double norm = std::sqrt(kernels::energy(h, n_tx));
        if (norm <= 0.0)
            continue; // identity fallback for this subcarrier
        for (int l = 0; l < n_tx; ++l)
            m.at(n, l) = std::conj(h[l]) / norm;
    }
    m.source = SteeringMatrix::Source::Feedback;
    return m;
}

FrameGrid assemble_frame(const EncodedStream* stream, FrameKind kind,
                         const SteeringMatrix& steering, const SystemConfig& cfg)
{
    if (kind == FrameKind::DATA && !stream)
        throw std::invalid_argument("assemble_frame: DATA frame requires an encoded stream");
    if (kind == FrameKind::NDP && stream)
        throw std::invalid_argument("assemble_frame: NDP frame carries no payload");
    if (steering.n_sc != cfg.n_subcarriers || steering.n_tx != cfg.n_tx)
        throw std::invalid_argument("assemble_frame: steering dimensions do not match config");

    const int n_sc = cfg.n_subcarriers;
    const int n_data_c = static_cast<int>(cfg.data_carriers.size());
    const int cbps = stream ? stream->mcs.coded_bits_per_ofdm_symbol(n_data_c) : 0;

    FrameGrid fg;
    fg.kind = kind;
    fg.layout.n_tx = cfg.n_tx;
    fg.layout.n_data = stream ? stream->n_symbols : 0;
    if (stream && static_cast<int>(stream->bits.size()) != fg.layout.n_data * cbps)
        throw std::invalid_argument("assemble_frame: stream bit count does not fill whole symbols");
    fg.grid = ComplexGrid(cfg.n_tx, fg.layout.total_symbols(), n_sc);

    const auto sts = short_training_sequence(n_sc);
    const auto lts = long_training_sequence(n_sc);
    const auto occupied = cfg.occupied_carriers();

    // STS/LTS on the first two chains, unprecoded
    for (int chain = 0; chain < std::min(2, cfg.n_tx); ++chain) {
        for (int s = 0; s < FrameLayout::kStsSymbols; ++s)
            for (int n = 0; n < n_sc; ++n)
                fg.grid.at(chain, fg.layout.sts_offset() + s, n) = sts[n];
        for (int s = 0; s < FrameLayout::kLtsSymbols; ++s)
            for (int n = 0; n < n_sc; ++n)
                fg.grid.at(chain, fg.layout.lts_offset() + s, n) = lts[n];
    }

    // header symbol: BPSK rate-1/2 on the data carriers, pilots in place,
    // unprecoded on the first two chains like the sync fields
    {
        std::size_t payload_len = stream ? stream->source_len : 0;
        Mcs header_mcs = stream ? stream->mcs : Mcs{ Modulation::BPSK, CodeRate::Half };
        auto hdr_bits = conv_encode(build_header_bits(header_mcs, payload_len, kind));
        auto hdr_syms = map_symbols(hdr_bits, Modulation::BPSK);
        if (static_cast<int>(hdr_syms.size()) != n_data_c)
            throw std::logic_error("assemble_frame: header does not fill one OFDM symbol");
        const int hsym = fg.layout.header_offset();
        for (int chain = 0; chain < std::min(2, cfg.n_tx); ++chain) {
            for (int j = 0; j < n_data_c; ++j)
                fg.grid.at(chain, hsym, cfg.data_carriers[j]) = hdr_syms[j];
            for (std::size_t j = 0; j < cfg.pilot_carriers.size(); ++j)
                fg.grid.at(chain, hsym, cfg.pilot_carriers[j]) = cfg.pilot_values[j];
        }
    }

    // MIMO preamble: time-orthogonal, slot l on chain l; DATA scales each
    // slot by that chain's steering weight
    for (int l = 0; l < cfg.n_tx; ++l) {
        const int sym = fg.layout.preamble_offset() + l;
        for (int n : occupied) {
            cplx v = lts[n];
            if (kind == FrameKind::DATA)
                v *= steering.at(n, l);
            fg.grid.at(l, sym, n) = v;
        }
    }

    // payload symbols, precoded per subcarrier
    if (stream) {
        auto syms = map_symbols(stream->bits, stream->mcs.modulation);
        for (int t = 0; t < fg.layout.n_data; ++t) {
            const int sym = fg.layout.data_offset() + t;
            for (int j = 0; j < n_data_c; ++j) {
                const int n = cfg.data_carriers[j];
                const cplx x = syms[static_cast<std::size_t>(t) * n_data_c + j];
                for (int l = 0; l < cfg.n_tx; ++l)
                    fg.grid.at(l, sym, n) = x * steering.at(n, l);
            }
            for (std::size_t j = 0; j < cfg.pilot_carriers.size(); ++j) {
                const int n = cfg.pilot_carriers[j];
                const cplx p = cfg.pilot_values[j];
                for (int l = 0; l < cfg.n_tx; ++l)
                    fg.grid.at(l, sym, n) = p * steering.at(n, l);
            }
        }
    }

    return fg;
}

OfdmModem::OfdmModem(const SystemConfig& cfg)
    : cfg_(cfg), fft_(static_cast<std::size_t>(cfg.n_subcarriers))
{
}

std::vector<std::vector<cplx>> OfdmModem::synthesize(const ComplexGrid& grid) const
{
    const int n_sc = cfg_.n_subcarriers;
    const int n_cp = cfg_.cyclic_prefix;
    const int n_sym = grid.symbols();
    const std::size_t frame_len = static_cast<std::size_t>(n_sym) * (n_sc + n_cp);

    std::vector<std::vector<cplx>> chains(grid.chains());
    std::vector<cplx> body(n_sc);
    for (int chain = 0; chain < grid.chains(); ++chain) {
        auto& out = chains[chain];
        out.resize(frame_len);
        for (int s = 0; s < n_sym; ++s) {
            fft_.inverse_unitary(grid.symbol_ptr(chain, s), body.data());
            cplx* dst = out.data() + static_cast<std::size_t>(s) * (n_sc + n_cp);
            for (int i = 0; i < n_cp; ++i)
                dst[i] = body[n_sc - n_cp + i];
            for (int i = 0; i < n_sc; ++i)
                dst[n_cp + i] = body[i];
        }
    }
    return chains;
}

TxBaseband OfdmModem::modulate(const FrameGrid& grid) const
{
    TxBaseband bb;
    bb.sample_rate = cfg_.bandwidth_hz;
    bb.frame_starts = { 0 };
    bb.chains = synthesize(grid.grid);
    return bb;
}

ComplexGrid OfdmModem::demodulate(const std::vector<std::vector<cplx>>& chains, int n_symbols,
                                  std::size_t start) const
{
    const int n_sc = cfg_.n_subcarriers;
    const int n_cp = cfg_.cyclic_prefix;
    const std::size_t need = start + static_cast<std::size_t>(n_symbols) * (n_sc + n_cp);
    for (const auto& c : chains)
        if (c.size() < need)
            throw std::invalid_argument("OfdmModem::demodulate: stream shorter than requested symbols");

    ComplexGrid grid(static_cast<int>(chains.size()), n_symbols, n_sc);
    for (std::size_t chain = 0; chain < chains.size(); ++chain) {
        for (int s = 0; s < n_symbols; ++s) {
            const cplx* src = chains[chain].data() + start
                + static_cast<std::size_t>(s) * (n_sc + n_cp) + n_cp;
            fft_.forward_unitary(src, grid.symbol_ptr(static_cast<int>(chain), s));
        }
    }
    return grid;
}

ComplexGrid OfdmModem::demodulate(const TxBaseband& bb, int n_symbols, std::size_t start) const
{
    return demodulate(bb.chains, n_symbols, start);
}

std::vector<std::vector<cplx>> OfdmModem::demodulate_stream(std::span<const cplx> stream,
                                                            int n_symbols, std::size_t start) const
{
    std::vector<std::vector<cplx>> chains(1);
    chains[0].assign(stream.begin(), stream.end());
    ComplexGrid g = demodulate(chains, n_symbols, start);
    std::vector<std::vector<cplx>> out(n_symbols);
    for (int s = 0; s < n_symbols; ++s)
        out[s].assign(g.symbol_ptr(0, s), g.symbol_ptr(0, s) + cfg_.n_subcarriers);
    return out;
}

TxBaseband ofdm_modulate(const FrameGrid& grid, const SystemConfig& cfg)
{
    return OfdmModem(cfg).modulate(grid);
}

} // namespace jrc
