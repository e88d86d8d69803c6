#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <vector>

#include "mwsn/config.hpp"
#include "mwsn/metrics.hpp"
#include "mwsn/mobility.hpp"
#include "mwsn/radio.hpp"
#include "mwsn/rng.hpp"
#include "mwsn/types.hpp"

namespace mwsn {

inline constexpr int kLevelUnreached = std::numeric_limits<int>::max();

struct NeighborEntry {
    std::uint64_t last_heard_tick = 0;
    double weight = 0.0;
};

// Announcement as remembered by a receiver; feeds association and the
// position-based next-hop choice (positions are as announced, not live).
struct HeardAnnouncement {
    NodeId id = 0;
    double weight = 0.0;
    MarKey key{};
    int zone = -1;
    Vec2 pos{};
};

struct NodeState {
    NodeId id = 0;
    Kinematics kin{};
    EnergyBudget energy{};
    Role role{};
    MobilityFactor mf{};
    LocalizationState loc{};

    // DECA neighbor table and hello cadence state
    std::map<NodeId, NeighborEntry> neighbors;
    Vec2 pos_at_last_hello{};
    std::int64_t last_hello_tick = -(1 << 20);

    // per-round election scratch
    double weight = 0.0;
    MarKey key{};
    int zone = -1;       // zone at election time
    double delay_s = 0.0;
    bool suppressed = false;
    bool announced = false;
    std::vector<HeardAnnouncement> heard;

    // per-round gradient state (non-position protocols)
    int grad_level = kLevelUnreached;
    NodeId grad_parent = kBroadcast;

    std::uint32_t member_data_received = 0;

    bool alive() const { return role.kind != RoleKind::Dead; }
};

// Exclusive per-trial state; a trial runs single-threaded.
struct World {
    SimConfig cfg{};
    RadioParams radio{};
    MobilityParams mobility{};

    std::vector<NodeState> nodes;
    NodeId sink_id = 0;
    Vec2 sink_pos{};

    MetricsLedger ledger{};
    std::uint64_t round = 0;  // 1-based, set by the trial loop
    int tick = 0;
    std::vector<RandomStream> mobility_streams;

    std::ostream* events = nullptr;  // optional human-readable log

    static World make(const SimConfig& cfg);

    bool is_sink(NodeId id) const { return id == sink_id; }

    Vec2 position_of(NodeId id) const {
        return is_sink(id) ? sink_pos : nodes[id].kin.position;
    }

    bool alive(NodeId id) const { return is_sink(id) || nodes[id].alive(); }

    std::size_t alive_count() const;

    // Deducts joules, clamping at zero; a node that cannot cover the charge
    // drains what it has and dies. The sink is never charged.
    double charge(NodeId id, double joules);

    // Deducts a transmit cost that must be payable in full; returns false
    // (and kills the sender, charging nothing) when it is not.
    bool try_tx_charge(NodeId id, double joules);

    void kill(NodeId id);

    double total_energy_drawn() const;
};

enum class DeliveryKind {
    Delivered,
    LostOutOfRange,
    LostDeadSender,
    LostDeadReceiver,
};

struct Delivery {
    DeliveryKind kind = DeliveryKind::Delivered;
    std::vector<NodeId> receivers;  // broadcast: alive in-range nodes, id order
};

// One transmission attempt. The sender pays tx energy (amplifier at the
// receiver distance for unicast, at full range for broadcast); receivers pay
// rx energy. The sink pays nothing in either direction.
Delivery transmit(World& w, NodeId src, NodeId dst, const Packet& pkt);

}  // namespace mwsn
