#include "mwsn/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace mwsn {

namespace {

double wrap_heading(double h) {
    h = std::fmod(h, 2.0 * M_PI);
    if (h < 0) h += 2.0 * M_PI;
    return h;
}

}  // namespace

std::pair<Vec2, double> reflect(Vec2 pos, double heading_rad, const FieldGeometry& field) {
    // one step's overshoot is small, but loop until inside for safety
    for (int i = 0; i < 64 && !field.contains(pos); ++i) {
        if (pos.x < 0.0) {
            pos.x = -pos.x;
            heading_rad = M_PI - heading_rad;
        } else if (pos.x > field.width) {
            pos.x = 2.0 * field.width - pos.x;
            heading_rad = M_PI - heading_rad;
        }
        if (pos.y < 0.0) {
            pos.y = -pos.y;
            heading_rad = -heading_rad;
        } else if (pos.y > field.height) {
            pos.y = 2.0 * field.height - pos.y;
            heading_rad = -heading_rad;
        }
    }
    // pathological speeds could still escape the loop; clamp as a last resort
    pos.x = std::clamp(pos.x, 0.0, field.width);
    pos.y = std::clamp(pos.y, 0.0, field.height);
    return {pos, wrap_heading(heading_rad)};
}

Kinematics step(const Kinematics& kin, double now_s, double dt_s, const MobilityParams& params,
                const FieldGeometry& field, RandomStream& rng) {
    Kinematics next = kin;
    if (now_s >= kin.next_update_at_s) {
        next.speed_mps = std::max(0.0, rng.gaussian(params.mean_speed_mps, params.speed_stddev_mps));
        next.heading_rad = wrap_heading(kin.heading_rad + rng.gaussian(0.0, params.turn_stddev_rad));
        next.next_update_at_s = now_s + params.update_interval_s;
    }
    Vec2 pos = next.position + Vec2{std::cos(next.heading_rad), std::sin(next.heading_rad)} *
                                   (next.speed_mps * dt_s);
    auto [reflected, heading] = reflect(pos, next.heading_rad, field);
    next.position = reflected;
    next.heading_rad = heading;
    return next;
}

Kinematics initial_kinematics(Vec2 position, const MobilityParams& params, RandomStream& rng) {
    Kinematics kin;
    kin.position = position;
    kin.heading_rad = rng.uniform(0.0, 2.0 * M_PI);
    kin.speed_mps = std::max(0.0, rng.gaussian(params.mean_speed_mps, params.speed_stddev_mps));
    kin.next_update_at_s = params.update_interval_s;
    return kin;
}

MobilityFactor update_mobility_factor(const MobilityFactor& mf, Vec2 new_pos, const ZoneGrid& grid,
                                      const FieldGeometry& field) {
    const int zone = zone_index(new_pos, grid, field);
    MobilityFactor next = mf;
    if (zone != mf.last_zone) {
        if (mf.last_zone >= 0) ++next.transitions;
        next.last_zone = zone;
    }
    return next;
}

}  // namespace mwsn
