#ifndef JRC_MAPPING_HPP
#define JRC_MAPPING_HPP

#include "jrc/coding.hpp"
#include "jrc/config.hpp"
#include "jrc/frame.hpp"

#include <span>
#include <vector>

namespace jrc {

/// Gray-mapped constellations with unit average power:
/// BPSK ±1, QPSK (±1±j)/√2, 16-QAM {±1,±3}/√10 per rail.
std::vector<cplx> map_symbols(std::span<const uint8_t> bits, Modulation mod);

/// Hard-decision demap. erased (optional, per symbol) marks symbols whose
/// bits come back as kErasedBit instead of a decision.
std::vector<int8_t> demap_symbols(std::span<const cplx> symbols, Modulation mod,
                                  std::span<const uint8_t> erased = {});

/// Max-log soft metrics per coded bit, positive favoring 1; erased
/// symbols produce zero-confidence metrics.
std::vector<double> demap_soft(std::span<const cplx> symbols, Modulation mod,
                               std::span<const uint8_t> erased = {});

/// Nearest constellation point (used by the decision-directed estimator).
cplx hard_decision(cplx symbol, Modulation mod);

} // namespace jrc

#endif
