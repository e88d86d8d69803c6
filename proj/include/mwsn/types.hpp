#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mwsn/geometry.hpp"

namespace mwsn {

using NodeId = std::uint32_t;

// Destination of a transmission: a concrete node id or broadcast.
constexpr NodeId kBroadcast = 0xFFFFFFFFu;

enum class ProtocolKind {
    DECA,
    DEMC,
    DEMC_RECOVERY,
    MAR,
    GRC,
    GRC_RECOVERY,
};

inline bool is_position_based(ProtocolKind p) {
    return p == ProtocolKind::MAR || p == ProtocolKind::GRC ||
           p == ProtocolKind::GRC_RECOVERY;
}

inline bool has_recovery(ProtocolKind p) {
    return p == ProtocolKind::DEMC_RECOVERY || p == ProtocolKind::GRC_RECOVERY;
}

const char* protocol_name(ProtocolKind p);
std::optional<ProtocolKind> parse_protocol(const std::string& name);

enum class RoleKind {
    ClusterHead,
    Member,
    Unassociated,
    Dead,
};

// A node's role within the current round. `head` is meaningful only for
// members.
struct Role {
    RoleKind kind = RoleKind::Unassociated;
    NodeId head = kBroadcast;

    static Role cluster_head() { return {RoleKind::ClusterHead, kBroadcast}; }
    static Role member_of(NodeId h) { return {RoleKind::Member, h}; }
    static Role unassociated() { return {RoleKind::Unassociated, kBroadcast}; }
    static Role dead() { return {RoleKind::Dead, kBroadcast}; }
};

// Remaining energy is tracked as initial minus everything drawn, so the
// energy audit (sum of drawn == sum of logged charges) is exact.
struct EnergyBudget {
    double initial = 3.0;
    double drawn = 0.0;

    double remaining() const { return initial - drawn; }
};

enum class PacketKind {
    ChAnnouncement,
    Join,
    Hello,
    Data,
    AggregatedData,
    GradientBeacon,
    RecoveryRequest,
    RecoveryReply,
};

// MAR election key: (zone transitions, id), smaller wins.
struct MarKey {
    std::uint64_t transitions = 0;
    NodeId id = 0;

    friend bool operator<(const MarKey& a, const MarKey& b) {
        if (a.transitions != b.transitions) return a.transitions < b.transitions;
        return a.id < b.id;
    }
    friend bool operator==(const MarKey& a, const MarKey& b) {
        return a.transitions == b.transitions && a.id == b.id;
    }
};

// Typed message. Field usage depends on kind; size in bytes drives the
// energy cost at the radio boundary (bits = 8 * size).
struct Packet {
    PacketKind kind = PacketKind::Data;
    std::uint32_t size_bytes = 0;
    NodeId src = 0;
    NodeId dst = kBroadcast;
    std::uint64_t origin_round = 0;

    // kind-specific payload
    double weight = 0.0;       // ChAnnouncement (non-position)
    MarKey key{};              // ChAnnouncement (MAR)
    int zone = -1;             // ChAnnouncement (position-based)
    Vec2 src_pos{};            // ChAnnouncement (position-based), RecoveryReply
    int level = 0;             // GradientBeacon
    NodeId target = kBroadcast;  // RecoveryRequest, Data/AggregatedData origin
};

}  // namespace mwsn
