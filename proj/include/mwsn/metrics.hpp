#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mwsn/types.hpp"

namespace mwsn {

struct PhaseCounters {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;
};

// Phase-tagged counters appended to by the engine; every reported metric is
// derived from this ledger.
struct MetricsLedger {
    PhaseCounters intra{};
    PhaseCounters inter{};

    std::uint64_t election_packets = 0;   // ChAnnouncement broadcasts only
    std::uint64_t hello_packets = 0;
    std::uint64_t gradient_packets = 0;
    std::uint64_t join_packets = 0;
    std::uint64_t recovery_requests = 0;
    std::uint64_t recovery_replies = 0;

    std::uint64_t rounds_completed = 0;
    // sum over rounds of the alive-node count when the election started
    std::uint64_t alive_node_rounds = 0;
    std::optional<std::uint64_t> first_death_round;

    // mirror of every tx/rx/fix charge, for the energy audit
    double total_charged_j = 0.0;
};

// 100 * lost / sent over both data phases; absent when nothing was sent.
std::optional<double> packet_loss_pct(const MetricsLedger& ledger);

// delivered / sent over both data phases; absent when nothing was sent.
std::optional<double> pdr(const MetricsLedger& ledger);

std::optional<double> phase_loss_pct(const PhaseCounters& phase);

// ChAnnouncements per node-round; hellos, joins, beacons and recovery
// traffic are excluded.
std::optional<double> avg_election_packets_per_node(const MetricsLedger& ledger);

// One trial's reported figures.
struct TrialResult {
    std::string config_fingerprint;
    ProtocolKind protocol = ProtocolKind::DEMC;
    std::uint32_t nodes = 0;
    double speed_mps = 0.0;
    std::uint64_t seed = 0;

    std::optional<double> pdr;
    std::optional<double> loss_pct;
    std::optional<double> intra_loss_pct;
    std::optional<double> inter_loss_pct;
    std::uint64_t lifetime_rounds = 0;
    bool censored = false;
    std::optional<double> avg_election_packets;

    std::uint64_t election_packets = 0;
    std::uint64_t hello_packets = 0;
    std::uint64_t gradient_packets = 0;
    std::uint64_t recovery_requests = 0;
    std::uint64_t recovery_replies = 0;

    std::uint64_t intra_sent = 0, intra_delivered = 0, intra_lost = 0;
    std::uint64_t inter_sent = 0, inter_delivered = 0, inter_lost = 0;
    std::uint64_t rounds_completed = 0;
    double total_energy_drawn_j = 0.0;
};

}  // namespace mwsn
