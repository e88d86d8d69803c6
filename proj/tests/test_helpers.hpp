#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mwsn/engine.hpp"
#include "mwsn/protocols.hpp"

namespace mwsn::test {

inline SimConfig make_config(const std::vector<std::pair<std::string, std::string>>& kv) {
    ConfigDoc doc;
    for (const auto& [k, v] : kv) doc.set(k, v);
    return resolve_config(doc);
}

// A world with hand-placed stationary nodes (pass mobility.mean_speed_mps=0
// in kv for full stationarity across redraws).
inline World make_world(const SimConfig& cfg, const std::vector<Vec2>& positions) {
    World w = World::make(cfg);
    REQUIRE(positions.size() == w.nodes.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        auto& n = w.nodes[i];
        n.kin.position = positions[i];
        n.loc.last_fix_position = positions[i];
        n.mf = {0, zone_index(positions[i], cfg.grid, cfg.field)};
    }
    w.round = 1;
    return w;
}

}  // namespace mwsn::test
