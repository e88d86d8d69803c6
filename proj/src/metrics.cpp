#include "mwsn/metrics.hpp"

namespace mwsn {

std::optional<double> packet_loss_pct(const MetricsLedger& ledger) {
    const std::uint64_t sent = ledger.intra.sent + ledger.inter.sent;
    if (sent == 0) return std::nullopt;
    return 100.0 * static_cast<double>(ledger.intra.lost + ledger.inter.lost) /
           static_cast<double>(sent);
}

std::optional<double> pdr(const MetricsLedger& ledger) {
    const std::uint64_t sent = ledger.intra.sent + ledger.inter.sent;
    if (sent == 0) return std::nullopt;
    return static_cast<double>(ledger.intra.delivered + ledger.inter.delivered) /
           static_cast<double>(sent);
}

std::optional<double> phase_loss_pct(const PhaseCounters& phase) {
    if (phase.sent == 0) return std::nullopt;
    return 100.0 * static_cast<double>(phase.lost) / static_cast<double>(phase.sent);
}

std::optional<double> avg_election_packets_per_node(const MetricsLedger& ledger) {
    if (ledger.alive_node_rounds == 0) return std::nullopt;
    return static_cast<double>(ledger.election_packets) /
           static_cast<double>(ledger.alive_node_rounds);
}

}  // namespace mwsn
