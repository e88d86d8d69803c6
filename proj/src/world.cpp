#include "mwsn/world.hpp"

#include <algorithm>
#include <ostream>

namespace mwsn {

World World::make(const SimConfig& cfg) {
    World w;
    w.cfg = cfg;
    w.radio = {cfg.range_m, cfg.e_elec_j_per_bit(), cfg.e_amp_j_per_bit_m_exp(),
               cfg.path_loss_exponent};
    w.mobility = {cfg.mean_speed_mps, cfg.speed_stddev_mps, cfg.turn_stddev_rad, cfg.update_interval_s};
    w.sink_id = cfg.nodes;
    w.sink_pos = cfg.sink;

    w.nodes.reserve(cfg.nodes);
    w.mobility_streams.reserve(cfg.nodes);
    for (NodeId id = 0; id < cfg.nodes; ++id) {
        RandomStream place(cfg.seed, id, StreamPurpose::Placement);
        const Vec2 pos{place.uniform(0.0, cfg.field.width), place.uniform(0.0, cfg.field.height)};
        w.mobility_streams.emplace_back(cfg.seed, id, StreamPurpose::Mobility);

        NodeState n;
        n.id = id;
        n.kin = initial_kinematics(pos, w.mobility, w.mobility_streams.back());
        n.energy = {cfg.initial_j, 0.0};
        n.role = Role::unassociated();
        n.mf = {0, zone_index(pos, cfg.grid, cfg.field)};
        n.loc = {pos, cfg.fix_cost_j, cfg.fix_displacement_m};
        w.nodes.push_back(std::move(n));
    }
    return w;
}

std::size_t World::alive_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes)
        if (node.alive()) ++n;
    return n;
}

double World::charge(NodeId id, double joules) {
    if (is_sink(id) || joules <= 0.0) return 0.0;
    NodeState& n = nodes[id];
    if (!n.alive()) return 0.0;
    const double before = n.energy.remaining();
    const bool lethal = joules >= before;
    const double take = lethal ? before : joules;
    n.energy.drawn += take;
    ledger.total_charged_j += take;
    if (lethal) kill(id);
    return take;
}

bool World::try_tx_charge(NodeId id, double joules) {
    if (is_sink(id)) return true;
    NodeState& n = nodes[id];
    if (!n.alive()) return false;
    if (joules > n.energy.remaining()) {
        kill(id);
        return false;
    }
    n.energy.drawn += joules;
    ledger.total_charged_j += joules;
    if (n.energy.remaining() <= 0.0) kill(id);
    return true;
}

void World::kill(NodeId id) {
    if (is_sink(id)) return;
    NodeState& n = nodes[id];
    if (!n.alive()) return;
    n.role = Role::dead();
    if (!ledger.first_death_round) {
        ledger.first_death_round = round;
        if (events)
            *events << "round " << round << " death: node " << id << " (tick " << tick << ")\n";
    } else if (events) {
        *events << "round " << round << " death: node " << id << " (tick " << tick << ")\n";
    }
}

double World::total_energy_drawn() const {
    double total = 0.0;
    for (const auto& n : nodes) total += n.energy.drawn;
    return total;
}

Delivery transmit(World& w, NodeId src, NodeId dst, const Packet& pkt) {
    Delivery out;
    if (!w.alive(src)) {
        out.kind = DeliveryKind::LostDeadSender;
        return out;
    }
    const double bits = 8.0 * static_cast<double>(pkt.size_bytes);
    const Vec2 src_pos = w.position_of(src);

    if (dst == kBroadcast) {
        // amplifier at full range: a broadcaster cannot tailor power per receiver
        if (!w.try_tx_charge(src, tx_energy(bits, w.radio.range_m, w.radio))) {
            out.kind = DeliveryKind::LostDeadSender;
            return out;
        }
        out.kind = DeliveryKind::Delivered;
        for (auto& n : w.nodes) {
            if (n.id == src || !n.alive()) continue;
            if (!in_range(src_pos, n.kin.position, w.radio)) continue;
            const double cost = rx_energy(bits, w.radio);
            const double before = n.energy.remaining();
            w.charge(n.id, cost);
            if (cost >= before) continue;  // died mid-reception
            out.receivers.push_back(n.id);
        }
        return out;
    }

    // unicast: the sender cannot know a link is broken, so it pays either way
    const Vec2 dst_pos = w.position_of(dst);
    if (!w.try_tx_charge(src, tx_energy(bits, distance(src_pos, dst_pos), w.radio))) {
        out.kind = DeliveryKind::LostDeadSender;
        return out;
    }
    if (!w.alive(dst)) {
        out.kind = DeliveryKind::LostDeadReceiver;
        return out;
    }
    if (!in_range(src_pos, dst_pos, w.radio)) {
        out.kind = DeliveryKind::LostOutOfRange;
        return out;
    }
    if (!w.is_sink(dst)) {
        const double cost = rx_energy(bits, w.radio);
        const double before = w.nodes[dst].energy.remaining();
        w.charge(dst, cost);
        if (cost >= before) {
            out.kind = DeliveryKind::LostDeadReceiver;  // died during reception
            return out;
        }
    }
    out.kind = DeliveryKind::Delivered;
    out.receivers.push_back(dst);
    return out;
}

}  // namespace mwsn
