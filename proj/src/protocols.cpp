#include "mwsn/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mwsn {

namespace {

double energy_share(const EnergyBudget& e) {
    return e.initial > 0 ? e.remaining() / e.initial : 0.0;
}

double id_share(NodeId id, NodeId max_id) {
    return static_cast<double>(id) / static_cast<double>(std::max<NodeId>(1, max_id));
}

std::uint64_t absolute_tick(const World& w) {
    return (w.round - 1) * static_cast<std::uint64_t>(w.cfg.ticks_per_round) +
           static_cast<std::uint64_t>(w.tick);
}

void prune_neighbors(NodeState& n, std::uint64_t now_tick, int hello_period) {
    const std::uint64_t horizon = 2ull * static_cast<std::uint64_t>(hello_period);
    for (auto it = n.neighbors.begin(); it != n.neighbors.end();) {
        if (now_tick - it->second.last_heard_tick > horizon)
            it = n.neighbors.erase(it);
        else
            ++it;
    }
}

}  // namespace

double grc_weight(const EnergyBudget& e, double centerness_m, double cell_w, double cell_h,
                  double w1, double w2) {
    const double c_max = (cell_w + cell_h) / 2.0;
    return w1 * energy_share(e) - w2 * (centerness_m / c_max);
}

double demc_weight(const EnergyBudget& e, NodeId id, NodeId max_id, double w1, double w2) {
    return w1 * energy_share(e) + w2 * id_share(id, max_id);
}

double deca_weight(const EnergyBudget& e, std::size_t degree, std::size_t max_degree, NodeId id,
                   NodeId max_id, double w1, double w2, double w3) {
    const double degree_share =
        static_cast<double>(degree) / static_cast<double>(std::max<std::size_t>(1, max_degree));
    return w1 * energy_share(e) + w2 * degree_share + w3 * id_share(id, max_id);
}

MarKey mar_key(const MobilityFactor& mf, NodeId id) {
    return {mf.transitions, id};
}

double announcement_delay(double rank, double t_max_s) {
    return t_max_s * (1.0 - rank);
}

bool announcement_beats(ProtocolKind p, double weight_a, const MarKey& key_a, NodeId id_a,
                        double weight_b, const MarKey& key_b, NodeId id_b) {
    switch (p) {
        case ProtocolKind::MAR:
            return key_a < key_b;
        case ProtocolKind::DEMC:
        case ProtocolKind::DEMC_RECOVERY:
            // the id term breaks ties, higher id winning
            if (weight_a != weight_b) return weight_a > weight_b;
            return id_a > id_b;
        default:
            if (weight_a != weight_b) return weight_a > weight_b;
            return id_a < id_b;
    }
}

// A node skips a scheduled hello while it has barely moved: table entries
// only go stale with displacement, so the hello rate rises with mobility
// and falls to one per round for a quasi-static node.
constexpr double kHelloRefreshFraction = 0.1;

void hello_phase(World& w) {
    const std::uint64_t now = absolute_tick(w);
    const double refresh_m = kHelloRefreshFraction * w.radio.range_m;
    for (auto& n : w.nodes) {
        if (!n.alive()) continue;
        const bool moved = distance(n.kin.position, n.pos_at_last_hello) >= refresh_m;
        const bool overdue = static_cast<std::int64_t>(now) - n.last_hello_tick >=
                             static_cast<std::int64_t>(w.cfg.ticks_per_round);
        if (!moved && !overdue) continue;
        Packet hello;
        hello.kind = PacketKind::Hello;
        hello.size_bytes = w.cfg.control_bytes;
        hello.src = n.id;
        hello.origin_round = w.round;
        hello.weight = n.weight;
        const Delivery d = transmit(w, n.id, kBroadcast, hello);
        if (d.kind == DeliveryKind::LostDeadSender) continue;
        ++w.ledger.hello_packets;
        n.pos_at_last_hello = n.kin.position;
        n.last_hello_tick = static_cast<std::int64_t>(now);
        for (NodeId r : d.receivers) w.nodes[r].neighbors[n.id] = {now, n.weight};
    }
    for (auto& n : w.nodes)
        if (n.alive()) prune_neighbors(n, now, w.cfg.hello_period_ticks);
}

namespace {

bool node_beats(ProtocolKind p, const NodeState& a, const NodeState& b) {
    return announcement_beats(p, a.weight, a.key, a.id, b.weight, b.key, b.id);
}

void broadcast_announcement(World& w, NodeState& n) {
    Packet ann;
    ann.kind = PacketKind::ChAnnouncement;
    ann.size_bytes = w.cfg.control_bytes;
    ann.src = n.id;
    ann.origin_round = w.round;
    ann.weight = n.weight;
    ann.key = n.key;
    ann.zone = n.zone;
    ann.src_pos = n.kin.position;
    const Delivery d = transmit(w, n.id, kBroadcast, ann);
    if (d.kind == DeliveryKind::LostDeadSender) return;
    ++w.ledger.election_packets;
    n.announced = true;
    const bool zone_scoped = is_position_based(w.cfg.protocol);
    for (NodeId r : d.receivers) {
        NodeState& m = w.nodes[r];
        m.heard.push_back({n.id, n.weight, n.key, n.zone, n.kin.position});
        if (m.announced || m.suppressed) continue;
        if (zone_scoped && m.zone != n.zone) continue;
        if (node_beats(w.cfg.protocol, n, m)) m.suppressed = true;
    }
}

}  // namespace

void run_election(World& w) {
    const SimConfig& cfg = w.cfg;
    const ProtocolKind p = cfg.protocol;
    const NodeId max_id = cfg.nodes > 1 ? cfg.nodes - 1 : 1;
    const double cw = cell_width(cfg.grid, cfg.field);
    const double ch = cell_height(cfg.grid, cfg.field);

    for (auto& n : w.nodes) {
        if (!n.alive()) continue;
        n.role = Role::unassociated();
        n.suppressed = false;
        n.announced = false;
        n.heard.clear();
        n.grad_level = kLevelUnreached;
        n.grad_parent = kBroadcast;
        n.member_data_received = 0;
        n.zone = zone_index(n.kin.position, cfg.grid, cfg.field);
    }
    const std::size_t alive_now = w.alive_count();
    w.ledger.alive_node_rounds += alive_now;
    if (alive_now == 0) return;

    if (p == ProtocolKind::DECA) {
        const std::uint64_t now = absolute_tick(w);
        std::size_t max_degree = 0;
        for (auto& n : w.nodes) {
            if (!n.alive()) continue;
            prune_neighbors(n, now, cfg.hello_period_ticks);
            max_degree = std::max(max_degree, n.neighbors.size());
        }
        for (auto& n : w.nodes)
            if (n.alive())
                n.weight = deca_weight(n.energy, n.neighbors.size(), max_degree, n.id, max_id,
                                       cfg.w1, cfg.w2, cfg.w3);
        // every node transmits exactly one clustering message, no timers
        for (auto& n : w.nodes)
            if (n.alive()) broadcast_announcement(w, n);
        for (auto& n : w.nodes) {
            if (!n.alive()) continue;
            bool best = true;
            for (const auto& h : n.heard) {
                if (!announcement_beats(p, n.weight, n.key, n.id, h.weight, h.key, h.id)) {
                    best = false;
                    break;
                }
            }
            if (best) n.role = Role::cluster_head();
        }
        return;
    }

    // timer-based announcement with suppression
    for (auto& n : w.nodes) {
        if (!n.alive()) continue;
        double rank = 0.0;
        switch (p) {
            case ProtocolKind::MAR:
                n.key = mar_key(n.mf, n.id);
                rank = 1.0 / (1.0 + static_cast<double>(n.key.transitions));
                break;
            case ProtocolKind::DEMC:
            case ProtocolKind::DEMC_RECOVERY:
                n.weight = demc_weight(n.energy, n.id, max_id, cfg.w1, cfg.w2);
                rank = std::clamp(n.weight, 0.0, 1.0);
                break;
            default: {
                const Vec2 zc = zone_center(n.zone, cfg.grid, cfg.field);
                n.weight = grc_weight(n.energy, centerness(n.kin.position, zc), cw, ch, cfg.w1, cfg.w2);
                rank = std::clamp((n.weight + cfg.w2) / (cfg.w1 + cfg.w2), 0.0, 1.0);
                break;
            }
        }
        n.delay_s = announcement_delay(rank, cfg.t_max_s);
    }

    std::vector<NodeId> order;
    order.reserve(w.nodes.size());
    for (const auto& n : w.nodes)
        if (n.alive()) order.push_back(n.id);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const NodeState& na = w.nodes[a];
        const NodeState& nb = w.nodes[b];
        if (na.delay_s != nb.delay_s) return na.delay_s < nb.delay_s;
        return node_beats(p, na, nb);
    });

    for (NodeId u : order) {
        NodeState& n = w.nodes[u];
        if (!n.alive() || n.suppressed) continue;
        broadcast_announcement(w, n);
        if (n.announced) n.role = Role::cluster_head();
    }
}

void associate_phase(World& w) {
    const SimConfig& cfg = w.cfg;
    const bool posb = is_position_based(cfg.protocol);

    for (auto& n : w.nodes) {
        if (!n.alive() || n.role.kind != RoleKind::Unassociated) continue;

        auto reachable_head = [&](const HeardAnnouncement& h) {
            const NodeState& cand = w.nodes[h.id];
            return cand.alive() && cand.role.kind == RoleKind::ClusterHead &&
                   in_range(n.kin.position, cand.kin.position, w.radio);
        };

        const HeardAnnouncement* chosen = nullptr;
        if (posb) {
            const int my_zone = zone_index(n.kin.position, cfg.grid, cfg.field);
            for (const auto& h : n.heard) {
                if (h.zone != my_zone || !reachable_head(h)) continue;
                if (!chosen ||
                    announcement_beats(cfg.protocol, h.weight, h.key, h.id, chosen->weight,
                                       chosen->key, chosen->id))
                    chosen = &h;
            }
            if (!chosen) {
                double best_d = 0.0;
                for (const auto& h : n.heard) {
                    if (!reachable_head(h)) continue;
                    const double d = distance(n.kin.position, w.nodes[h.id].kin.position);
                    if (!chosen || d < best_d || (d == best_d && h.id < chosen->id)) {
                        chosen = &h;
                        best_d = d;
                    }
                }
            }
        } else {
            for (const auto& h : n.heard) {
                if (!reachable_head(h)) continue;
                if (!chosen ||
                    announcement_beats(cfg.protocol, h.weight, h.key, h.id, chosen->weight,
                                       chosen->key, chosen->id))
                    chosen = &h;
            }
        }

        if (!chosen) {
            // coverage fallback: no adoptable head, promote silently
            n.role = Role::cluster_head();
            continue;
        }
        n.role = Role::member_of(chosen->id);
        Packet join;
        join.kind = PacketKind::Join;
        join.size_bytes = cfg.control_bytes;
        join.src = n.id;
        join.dst = chosen->id;
        join.origin_round = w.round;
        const Delivery d = transmit(w, n.id, chosen->id, join);
        if (d.kind != DeliveryKind::LostDeadSender) ++w.ledger.join_packets;
    }
}

constexpr int kBeaconSuppression = 3;

void build_gradient(World& w) {
    Packet beacon;
    beacon.kind = PacketKind::GradientBeacon;
    beacon.size_bytes = w.cfg.control_bytes;
    beacon.src = w.sink_id;
    beacon.origin_round = w.round;
    beacon.level = 0;

    const Delivery root = transmit(w, w.sink_id, kBroadcast, beacon);
    ++w.ledger.gradient_packets;
    std::vector<int> beacons_heard(w.nodes.size(), 0);
    std::vector<NodeId> wave;
    for (NodeId r : root.receivers) {
        w.nodes[r].grad_level = 1;
        w.nodes[r].grad_parent = w.sink_id;
        ++beacons_heard[r];
        wave.push_back(r);
    }
    // within a level, stronger nodes beacon first (the timer idiom the
    // elections use), so downstream parents rotate with remaining energy
    // instead of pinning the relay burden on fixed ids
    while (!wave.empty()) {
        std::sort(wave.begin(), wave.end(), [&](NodeId a, NodeId b) {
            const double ra = w.nodes[a].energy.remaining();
            const double rb = w.nodes[b].energy.remaining();
            if (ra != rb) return ra > rb;
            return a < b;
        });
        std::vector<NodeId> next_wave;
        for (NodeId u : wave) {
            NodeState& n = w.nodes[u];
            if (!n.alive()) continue;
            // counter-based flood suppression: a node that already heard
            // several beacons covers no new ground by rebroadcasting
            if (beacons_heard[u] > kBeaconSuppression) continue;
            Packet b = beacon;
            b.src = u;
            b.level = n.grad_level;
            const Delivery d = transmit(w, u, kBroadcast, b);
            if (d.kind == DeliveryKind::LostDeadSender) continue;
            ++w.ledger.gradient_packets;
            for (NodeId r : d.receivers) {
                NodeState& m = w.nodes[r];
                ++beacons_heard[r];
                if (m.grad_level != kLevelUnreached) continue;
                m.grad_level = n.grad_level + 1;
                m.grad_parent = u;
                next_wave.push_back(r);
            }
        }
        wave = std::move(next_wave);
    }
}

void intra_phase(World& w) {
    for (auto& n : w.nodes) {
        if (!n.alive() || n.role.kind != RoleKind::Member) continue;
        const NodeId head = n.role.head;
        Packet data;
        data.kind = PacketKind::Data;
        data.size_bytes = w.cfg.data_bytes;
        data.src = n.id;
        data.dst = head;
        data.origin_round = w.round;
        ++w.ledger.intra.sent;
        const Delivery d = transmit(w, n.id, head, data);
        if (d.kind == DeliveryKind::Delivered) {
            ++w.ledger.intra.delivered;
            ++w.nodes[head].member_data_received;
        } else {
            ++w.ledger.intra.lost;
        }
    }
}

std::optional<NodeId> next_hop(const World& w, NodeId holder) {
    const NodeState& n = w.nodes[holder];
    if (!is_position_based(w.cfg.protocol)) {
        if (n.grad_level == kLevelUnreached) return std::nullopt;
        return n.grad_parent;
    }
    // greedy on coordinates; candidate positions are as announced at the
    // election, only the node's own position and the static sink are live
    const Vec2 me = n.kin.position;
    const double my_d = distance(me, w.sink_pos);
    if (distance(me, w.sink_pos) <= w.radio.range_m) return w.sink_id;
    std::optional<NodeId> best;
    double best_d = 0.0;
    for (const auto& h : n.heard) {
        const double cand_d = distance(h.pos, w.sink_pos);
        if (cand_d >= my_d) continue;  // must make strict progress
        if (distance(me, h.pos) > w.radio.range_m) continue;
        if (!best || cand_d < best_d || (cand_d == best_d && h.id < *best)) {
            best = h.id;
            best_d = cand_d;
        }
    }
    return best;
}

std::optional<NodeId> prepare_recovery(World& w, NodeId holder, NodeId target) {
    Packet req;
    req.kind = PacketKind::RecoveryRequest;
    req.size_bytes = w.cfg.control_bytes;
    req.src = holder;
    req.origin_round = w.round;
    req.target = target;
    const Delivery d = transmit(w, holder, kBroadcast, req);
    if (d.kind == DeliveryKind::LostDeadSender) return std::nullopt;
    ++w.ledger.recovery_requests;

    const Vec2 target_pos = w.position_of(target);
    // the requester only knows the target's announced position
    Vec2 target_ref = w.is_sink(target) ? w.sink_pos : target_pos;
    if (!w.is_sink(target)) {
        for (const auto& h : w.nodes[holder].heard)
            if (h.id == target) target_ref = h.pos;
    }

    struct Replier {
        NodeId id;
        Vec2 pos;
    };
    std::vector<Replier> repliers;
    for (NodeId r : d.receivers) {
        NodeState& cand = w.nodes[r];
        if (!cand.alive()) continue;
        if (!in_range(cand.kin.position, target_pos, w.radio)) continue;
        Packet rep;
        rep.kind = PacketKind::RecoveryReply;
        rep.size_bytes = w.cfg.control_bytes;
        rep.src = r;
        rep.dst = holder;
        rep.origin_round = w.round;
        rep.src_pos = cand.kin.position;
        const Delivery dr = transmit(w, r, holder, rep);
        if (dr.kind == DeliveryKind::LostDeadSender) continue;
        ++w.ledger.recovery_replies;
        if (dr.kind == DeliveryKind::Delivered) repliers.push_back({r, cand.kin.position});
    }
    if (repliers.empty()) return std::nullopt;

    NodeId relay = repliers.front().id;  // lowest id (repliers are in id order)
    if (w.cfg.protocol == ProtocolKind::GRC_RECOVERY) {
        double best_d = distance(repliers.front().pos, target_ref);
        for (const auto& rep : repliers) {
            const double dd = distance(rep.pos, target_ref);
            if (dd < best_d) {
                best_d = dd;
                relay = rep.id;
            }
        }
    }
    return relay;
}

bool complete_recovery(World& w, NodeId holder, NodeId relay, NodeId target) {
    Packet leg;
    leg.kind = PacketKind::AggregatedData;
    leg.size_bytes = w.cfg.data_bytes;
    leg.src = holder;
    leg.dst = relay;
    leg.origin_round = w.round;
    if (transmit(w, holder, relay, leg).kind != DeliveryKind::Delivered) return false;
    leg.src = relay;
    leg.dst = target;
    if (transmit(w, relay, target, leg).kind != DeliveryKind::Delivered) return false;
    return true;
}

bool recover(World& w, NodeId holder, NodeId target) {
    const auto relay = prepare_recovery(w, holder, target);
    return relay && complete_recovery(w, holder, *relay, target);
}

namespace {

// Pushes one aggregate toward the sink until it is delivered, dropped, or
// parked behind a recovery handshake.
void forward_packet(World& w, NodeId holder, int hops, std::vector<PendingRelay>& pending) {
    const int hop_cap = 2 * (w.cfg.grid.rows + w.cfg.grid.cols);
    // the data legs run three ticks after the handshake (request, reply
    // collection, relay selection each take a tick), so a recovery can only
    // start while the round has that much room left
    const bool recovery_open =
        has_recovery(w.cfg.protocol) && w.tick + 3 < w.cfg.ticks_per_round;

    while (true) {
        if (!w.nodes[holder].alive()) {
            ++w.ledger.inter.sent;
            ++w.ledger.inter.lost;
            return;
        }
        const std::optional<NodeId> nh = next_hop(w, holder);
        if (!nh) {
            ++w.ledger.inter.sent;
            ++w.ledger.inter.lost;
            return;
        }
        if (hops >= hop_cap) {
            ++w.ledger.inter.sent;
            ++w.ledger.inter.lost;
            return;
        }
        ++hops;
        Packet agg;
        agg.kind = PacketKind::AggregatedData;
        agg.size_bytes = w.cfg.data_bytes;
        agg.src = holder;
        agg.dst = *nh;
        agg.origin_round = w.round;
        ++w.ledger.inter.sent;
        const Delivery d = transmit(w, holder, *nh, agg);
        if (d.kind == DeliveryKind::Delivered) {
            ++w.ledger.inter.delivered;
            if (w.is_sink(*nh)) return;
            holder = *nh;
            continue;
        }
        if (d.kind == DeliveryKind::LostOutOfRange && recovery_open) {
            const auto relay = prepare_recovery(w, holder, *nh);
            if (relay) {
                pending.push_back({holder, *relay, *nh, hops, w.tick + 3});
                return;
            }
        }
        ++w.ledger.inter.lost;
        return;
    }
}

}  // namespace

void inter_phase(World& w, std::vector<PendingRelay>& pending) {
    std::vector<NodeId> heads;
    for (const auto& n : w.nodes)
        if (n.alive() && n.role.kind == RoleKind::ClusterHead) heads.push_back(n.id);
    for (NodeId origin : heads) {
        if (!w.nodes[origin].alive()) continue;  // may have died relaying earlier packets
        forward_packet(w, origin, 0, pending);
    }
}

void recovery_wave(World& w, std::vector<PendingRelay>& pending) {
    std::vector<PendingRelay> keep;
    // new parks appended during the wave stay pending for a later tick
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const PendingRelay item = pending[i];
        if (item.due_tick != w.tick) {
            keep.push_back(item);
            continue;
        }
        if (!complete_recovery(w, item.holder, item.relay, item.target)) {
            ++w.ledger.inter.lost;
            continue;
        }
        ++w.ledger.inter.delivered;
        if (w.is_sink(item.target)) continue;
        forward_packet(w, item.target, item.hops, pending);
    }
    pending = std::move(keep);
}

}  // namespace mwsn
