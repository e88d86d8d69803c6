#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "mwsn/config.hpp"
#include "mwsn/metrics.hpp"
#include "mwsn/world.hpp"

namespace mwsn {

// One full round: position fixes, election (tick 0), association (tick 1),
// hellos on their schedule, intra-cluster data, inter-cluster forwarding,
// movement on every tick.
void run_round(World& w);

// Derives the reported figures from a finished world.
TrialResult summarize_trial(const World& w);

// Runs rounds until the first death is recorded (finishing that round) or
// the round cap is reached. Pure function of the config.
TrialResult run_trial(const SimConfig& cfg, std::ostream* events = nullptr);

struct SweepRequest {
    ConfigDoc base;
    std::vector<ProtocolKind> protocols;
    std::vector<std::uint32_t> node_counts;
    std::vector<double> speeds;
    int seeds = 1;
    int jobs = 1;
};

struct AggValue {
    std::optional<double> mean;
    std::optional<double> stddev;  // sample stddev; 0 for a single sample
};

struct SweepAggRow {
    ProtocolKind protocol;
    std::uint32_t nodes = 0;
    double speed_mps = 0.0;
    int seeds = 0;
    AggValue pdr, loss_pct, intra_loss_pct, inter_loss_pct, lifetime_rounds, avg_election_packets;
    AggValue hello_packets, gradient_packets, recovery_requests, recovery_replies, inter_lost;
};

// Trials in lexicographic (protocol name, nodes, speed, seed) order plus
// per-cell aggregates; identical output for any worker-pool size.
struct SweepResult {
    std::vector<TrialResult> trials;
    std::vector<SweepAggRow> aggregate;
};

SweepResult run_sweep(const SweepRequest& req);

}  // namespace mwsn
