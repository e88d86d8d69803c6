#pragma once

#include <cstdint>
#include <utility>

#include "mwsn/geometry.hpp"

namespace mwsn {

struct RadioParams {
    double range_m = 353.5533905932738;
    double e_elec_j_per_bit = 50e-9;
    double e_amp_j_per_bit_m_exp = 0.0013e-12;
    int path_loss_exponent = 2;
};

// Symmetric disk-graph link test, inclusive at the range boundary.
inline bool in_range(Vec2 a, Vec2 b, const RadioParams& radio) {
    return distance(a, b) <= radio.range_m;
}

// Energy to transmit k bits over d meters:
//   E_elec * k + E_amp * k * d^exponent
inline double tx_energy(double k_bits, double d_m, const RadioParams& radio) {
    double d_pow = d_m * d_m;
    if (radio.path_loss_exponent == 4) d_pow *= d_pow;
    return radio.e_elec_j_per_bit * k_bits + radio.e_amp_j_per_bit_m_exp * k_bits * d_pow;
}

// Energy to receive k bits: E_elec * k.
inline double rx_energy(double k_bits, const RadioParams& radio) {
    return radio.e_elec_j_per_bit * k_bits;
}

// Position-fix bookkeeping for position-based protocols. A fix is charged
// whenever displacement since the reference point reaches the threshold; the
// reference point advances by whole thresholds along the displacement so the
// fix rate stays proportional to speed instead of saturating at one per tick.
struct LocalizationState {
    Vec2 last_fix_position{};
    double fix_cost_j = 7e-4;
    double fix_displacement_m = 25.0;
};

// Returns the updated state and the joules charged this check (0 or more).
std::pair<LocalizationState, double> maybe_position_fix(const LocalizationState& loc, Vec2 current);

}  // namespace mwsn
