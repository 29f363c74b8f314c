#ifndef JRC_FRAME_HPP
#define JRC_FRAME_HPP

#include "jrc/config.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace jrc {

using cplx = std::complex<double>;

/// Dense [chain][symbol][subcarrier] complex grid, contiguous storage.
class ComplexGrid {
public:
    ComplexGrid() = default;
    ComplexGrid(int n_chains, int n_symbols, int n_carriers)
        : n_chains_(n_chains), n_symbols_(n_symbols), n_carriers_(n_carriers),
          data_(static_cast<std::size_t>(n_chains) * n_symbols * n_carriers)
    {
    }

    int chains() const { return n_chains_; }
    int symbols() const { return n_symbols_; }
    int carriers() const { return n_carriers_; }

    cplx& at(int chain, int symbol, int carrier)
    {
        return data_[(static_cast<std::size_t>(chain) * n_symbols_ + symbol) * n_carriers_ + carrier];
    }
    const cplx& at(int chain, int symbol, int carrier) const
    {
        return data_[(static_cast<std::size_t>(chain) * n_symbols_ + symbol) * n_carriers_ + carrier];
    }
    cplx* symbol_ptr(int chain, int symbol)
    {
        return data_.data() + (static_cast<std::size_t>(chain) * n_symbols_ + symbol) * n_carriers_;
    }
    const cplx* symbol_ptr(int chain, int symbol) const
    {
        return data_.data() + (static_cast<std::size_t>(chain) * n_symbols_ + symbol) * n_carriers_;
    }
    std::vector<cplx>& raw() { return data_; }
    const std::vector<cplx>& raw() const { return data_; }

private:
    int n_chains_ = 0;
    int n_symbols_ = 0;
    int n_carriers_ = 0;
    std::vector<cplx> data_;
};

/// Symbol-slot bookkeeping for the fixed frame layout:
/// 2 STS, 2 LTS, 1 header, n_tx MIMO preamble, then payload symbols.
struct FrameLayout {
    int n_tx = 4;
    int n_data = 0;

    static constexpr int kStsSymbols = 2;
    static constexpr int kLtsSymbols = 2;
    static constexpr int kHeaderSymbols = 1;

    int sts_offset() const { return 0; }
    int lts_offset() const { return kStsSymbols; }
    int header_offset() const { return kStsSymbols + kLtsSymbols; }
    int preamble_offset() const { return header_offset() + kHeaderSymbols; }
    int data_offset() const { return preamble_offset() + n_tx; }
    int total_symbols() const { return data_offset() + n_data; }
};

/// Frequency-domain OFDM frame, per TX chain.
struct FrameGrid {
    FrameKind kind = FrameKind::NDP;
    FrameLayout layout;
    ComplexGrid grid; // [tx][symbol][subcarrier], natural carrier order
};

/// Frequency-domain short training sequence (periodicity 16 at N=64),
/// natural index order, length n_sc. Only defined for n_sc == 64.
std::vector<cplx> short_training_sequence(int n_sc);

/// Frequency-domain long training sequence (unit modulus on logical
/// carriers ±1..±26), natural index order. Only defined for n_sc == 64.
std::vector<cplx> long_training_sequence(int n_sc);

} // namespace jrc

#endif
