#include "jrc/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace jrc {

// 802.11a-style training sequences on the 64-subcarrier plan.

std::vector<cplx> short_training_sequence(int n_sc)
{
    if (n_sc != 64)
        throw std::invalid_argument("short_training_sequence: only the 64-subcarrier plan is defined");
    std::vector<cplx> seq(n_sc, cplx(0.0, 0.0));
    const double a = std::sqrt(13.0 / 6.0);
    const cplx p(a, a);
    const cplx m(-a, -a);
    // nonzero on every 4th carrier -> 16-sample periodicity in time
    const std::pair<int, cplx> entries[] = {
        { -24, p }, { -20, m }, { -16, p }, { -12, m }, { -8, m }, { -4, p },
        { 4, m },   { 8, m },   { 12, p },  { 16, p },  { 20, p }, { 24, p },
    };
    for (auto [s, v] : entries)
        seq[natural_carrier_index(s, n_sc)] = v;
    return seq;
}

std::vector<cplx> long_training_sequence(int n_sc)
{
    if (n_sc != 64)
        throw std::invalid_argument("long_training_sequence: only the 64-subcarrier plan is defined");
    static const int lts[53] = {
        // logical -26 .. -1
        1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1,
        // DC
        0,
        // logical +1 .. +26
        1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1
    };
    std::vector<cplx> seq(n_sc, cplx(0.0, 0.0));
    for (int s = -26; s <= 26; ++s)
        seq[natural_carrier_index(s, n_sc)] = cplx(lts[s + 26], 0.0);
    return seq;
}

} // namespace jrc
