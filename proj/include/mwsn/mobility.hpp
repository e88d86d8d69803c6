#pragma once

#include <utility>

#include "mwsn/geometry.hpp"
#include "mwsn/rng.hpp"

namespace mwsn {

struct MobilityParams {
    double mean_speed_mps = 5.0;
    double speed_stddev_mps = 1.0;
    double turn_stddev_rad = 0.5;
    double update_interval_s = 5.0;
};

// Momentum-style kinematic state: speed and heading persist between
// scheduled redraws, so nodes never stop or turn abruptly.
struct Kinematics {
    Vec2 position{};
    double heading_rad = 0.0;  // [0, 2*pi)
    double speed_mps = 0.0;
    double next_update_at_s = 0.0;
};

// Specular reflection about any violated field boundary, applied repeatedly
// until the position is inside. The heading component normal to the
// boundary is negated.
std::pair<Vec2, double> reflect(Vec2 pos, double heading_rad, const FieldGeometry& field);

// Advances one time slice: redraw speed/heading if the schedule says so,
// move along the heading, reflect at boundaries.
Kinematics step(const Kinematics& kin, double now_s, double dt_s, const MobilityParams& params,
                const FieldGeometry& field, RandomStream& rng);

// Draws the initial kinematic state: uniform heading, gaussian speed
// clamped at zero, first redraw one interval out.
Kinematics initial_kinematics(Vec2 position, const MobilityParams& params, RandomStream& rng);

// Cumulative zone-transition count; the MAR election key ingredient.
struct MobilityFactor {
    std::uint64_t transitions = 0;
    int last_zone = -1;
};

// Compares the zone once per tick, so a diagonal move across two boundaries
// still counts as one transition.
MobilityFactor update_mobility_factor(const MobilityFactor& mf, Vec2 new_pos, const ZoneGrid& grid,
                                      const FieldGeometry& field);

}  // namespace mwsn
