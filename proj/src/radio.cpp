#include "mwsn/radio.hpp"

#include <cmath>

namespace mwsn {

std::pair<LocalizationState, double> maybe_position_fix(const LocalizationState& loc, Vec2 current) {
    LocalizationState next = loc;
    double charged = 0.0;
    for (int guard = 0; guard < 1024; ++guard) {
        const Vec2 delta = current - next.last_fix_position;
        const double d = distance(current, next.last_fix_position);
        if (d < next.fix_displacement_m) break;
        charged += next.fix_cost_j;
        if (d <= 0.0) break;
        // advance the reference one threshold toward the current position,
        // carrying the remainder into the next check
        next.last_fix_position = next.last_fix_position + delta * (next.fix_displacement_m / d);
    }
    return {next, charged};
}

}  // namespace mwsn
