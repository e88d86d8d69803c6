#pragma once

#include <cstddef>
#include <optional>

#include "mwsn/world.hpp"

namespace mwsn {

// Manhattan distance from a node to its zone's center; lower is better for
// position-based election.
inline double centerness(Vec2 pos, Vec2 zone_c) {
    return std::abs(zone_c.x - pos.x) + std::abs(zone_c.y - pos.y);
}

// w1 * (remaining/initial) - w2 * (centerness / c_max), c_max being the
// largest Manhattan distance from a zone point to its center. Range
// [-w2, w1].
double grc_weight(const EnergyBudget& e, double centerness_m, double cell_w, double cell_h,
                  double w1, double w2);

// w1 * (remaining/initial) + w2 * (id/max_id); the id term breaks energy
// ties, higher id winning.
double demc_weight(const EnergyBudget& e, NodeId id, NodeId max_id, double w1, double w2);

// w1 * energy + w2 * degree share + w3 * id share.
double deca_weight(const EnergyBudget& e, std::size_t degree, std::size_t max_degree, NodeId id,
                   NodeId max_id, double w1, double w2, double w3);

// (zone transitions, id); the zone's head is the alive node minimizing it.
MarKey mar_key(const MobilityFactor& mf, NodeId id);

// t_max * (1 - rank): the strongest candidate (rank 1) fires immediately.
double announcement_delay(double rank, double t_max_s);

// True when announcement a outranks announcement b under protocol p's
// election ordering (this is also the suppression test).
bool announcement_beats(ProtocolKind p, double weight_a, const MarKey& key_a, NodeId id_a,
                        double weight_b, const MarKey& key_b, NodeId id_b);

// Round phases, in execution order. All operate on the single trial thread
// and iterate nodes in deterministic order.
void hello_phase(World& w);       // DECA only
void run_election(World& w);      // tick 0; positions frozen for the window
void associate_phase(World& w);   // tick 1
void build_gradient(World& w);    // non-position protocols, after association
void intra_phase(World& w);       // data tick

// An accepted recovery whose data legs are still outstanding. The handshake
// (request, replies, relay choice) runs when the hop fails; the two data
// legs run three ticks later, so either link can break mid-relay.
struct PendingRelay {
    NodeId holder = kBroadcast;
    NodeId relay = kBroadcast;
    NodeId target = kBroadcast;
    int hops = 0;
    int due_tick = 0;
};

void inter_phase(World& w, std::vector<PendingRelay>& pending);  // inter tick

// Executes the data legs of every pending relay due at the current tick;
// recovered packets keep forwarding (and may park again).
void recovery_wave(World& w, std::vector<PendingRelay>& pending);

// Believed next hop for an aggregate held at `holder`; nullopt when stuck.
std::optional<NodeId> next_hop(const World& w, NodeId holder);

// Recovery handshake: request broadcast, replies from every alive node in
// range that currently covers the target, relay selection. Returns the
// relay, or nullopt when nobody replied.
std::optional<NodeId> prepare_recovery(World& w, NodeId holder, NodeId target);

// The two data legs through the relay.
bool complete_recovery(World& w, NodeId holder, NodeId relay, NodeId target);

// Immediate-form recovery (handshake and legs back to back); the engine
// splits the two halves across ticks instead.
bool recover(World& w, NodeId holder, NodeId target);

}  // namespace mwsn
