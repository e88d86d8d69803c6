#include "mwsn/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace mwsn {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string opt(const std::optional<double>& v) {
    return v ? num(*v) : std::string();
}

std::string agg_pair(const AggValue& v) {
    return opt(v.mean) + "," + opt(v.stddev);
}

}  // namespace

std::string trial_csv_header() {
    return "protocol,nodes,speed_mps,seed,pdr,loss_pct,intra_loss_pct,inter_loss_pct,"
           "lifetime_rounds,censored,avg_election_pkts,hello_pkts,gradient_pkts,"
           "recovery_requests,recovery_replies";
}

std::string trial_csv_row(const TrialResult& t) {
    std::ostringstream out;
    out << protocol_name(t.protocol) << ',' << t.nodes << ',' << num(t.speed_mps) << ',' << t.seed
        << ',' << opt(t.pdr) << ',' << opt(t.loss_pct) << ',' << opt(t.intra_loss_pct) << ','
        << opt(t.inter_loss_pct) << ',' << t.lifetime_rounds << ',' << (t.censored ? 1 : 0) << ','
        << opt(t.avg_election_packets) << ',' << t.hello_packets << ',' << t.gradient_packets << ','
        << t.recovery_requests << ',' << t.recovery_replies;
    return out.str();
}

std::string sweep_raw_csv(const std::vector<TrialResult>& trials) {
    std::ostringstream out;
    out << trial_csv_header() << '\n';
    for (const auto& t : trials) out << trial_csv_row(t) << '\n';
    return out.str();
}

std::string sweep_agg_csv(const std::vector<SweepAggRow>& agg) {
    std::ostringstream out;
    out << "protocol,nodes,speed_mps,seeds,pdr_mean,pdr_std,loss_pct_mean,loss_pct_std,"
           "intra_loss_pct_mean,intra_loss_pct_std,inter_loss_pct_mean,inter_loss_pct_std,"
           "lifetime_rounds_mean,lifetime_rounds_std,avg_election_pkts_mean,avg_election_pkts_std,"
           "hello_pkts_mean,hello_pkts_std,gradient_pkts_mean,gradient_pkts_std,"
           "recovery_requests_mean,recovery_requests_std,recovery_replies_mean,recovery_replies_std\n";
    for (const auto& r : agg) {
        out << protocol_name(r.protocol) << ',' << r.nodes << ',' << num(r.speed_mps) << ','
            << r.seeds << ',' << agg_pair(r.pdr) << ',' << agg_pair(r.loss_pct) << ','
            << agg_pair(r.intra_loss_pct) << ',' << agg_pair(r.inter_loss_pct) << ','
            << agg_pair(r.lifetime_rounds) << ',' << agg_pair(r.avg_election_packets) << ','
            << agg_pair(r.hello_packets) << ',' << agg_pair(r.gradient_packets) << ','
            << agg_pair(r.recovery_requests) << ',' << agg_pair(r.recovery_replies) << '\n';
    }
    return out.str();
}

namespace {

double closest(const std::vector<double>& values, double anchor) {
    double best = values.front();
    for (double v : values)
        if (std::abs(v - anchor) < std::abs(best - anchor)) best = v;
    return best;
}

const SweepAggRow* find_row(const std::vector<SweepAggRow>& agg, ProtocolKind p, std::uint32_t n,
                            double s) {
    for (const auto& r : agg)
        if (r.protocol == p && r.nodes == n && r.speed_mps == s) return &r;
    return nullptr;
}

using MetricOf = const AggValue& (*)(const SweepAggRow&);

std::string table_vs_nodes(const SweepResult& sweep, const std::vector<ProtocolKind>& protocols,
                           const std::vector<std::uint32_t>& nodes, double anchor_speed,
                           MetricOf metric) {
    std::ostringstream out;
    out << "nodes";
    for (auto p : protocols) out << ',' << protocol_name(p);
    out << '\n';
    for (auto n : nodes) {
        out << n;
        for (auto p : protocols) {
            const SweepAggRow* r = find_row(sweep.aggregate, p, n, anchor_speed);
            out << ',' << (r ? opt(metric(*r).mean) : std::string());
        }
        out << '\n';
    }
    return out.str();
}

std::string table_vs_speed(const SweepResult& sweep, const std::vector<ProtocolKind>& protocols,
                           const std::vector<double>& speeds, std::uint32_t anchor_nodes,
                           MetricOf metric) {
    std::ostringstream out;
    out << "speed_mps";
    for (auto p : protocols) out << ',' << protocol_name(p);
    out << '\n';
    for (auto s : speeds) {
        out << num(s);
        for (auto p : protocols) {
            const SweepAggRow* r = find_row(sweep.aggregate, p, anchor_nodes, s);
            out << ',' << (r ? opt(metric(*r).mean) : std::string());
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::map<std::string, std::string> figure_csvs(const SweepResult& sweep) {
    std::vector<ProtocolKind> protocols;
    std::vector<std::uint32_t> nodes;
    std::vector<double> speeds;
    for (const auto& r : sweep.aggregate) {
        if (std::find(protocols.begin(), protocols.end(), r.protocol) == protocols.end())
            protocols.push_back(r.protocol);
        if (std::find(nodes.begin(), nodes.end(), r.nodes) == nodes.end()) nodes.push_back(r.nodes);
        if (std::find(speeds.begin(), speeds.end(), r.speed_mps) == speeds.end())
            speeds.push_back(r.speed_mps);
    }
    std::sort(protocols.begin(), protocols.end(), [](ProtocolKind a, ProtocolKind b) {
        return std::string(protocol_name(a)) < protocol_name(b);
    });
    std::sort(nodes.begin(), nodes.end());
    std::sort(speeds.begin(), speeds.end());

    const double anchor_speed = closest(speeds, 5.0);
    std::uint32_t anchor_nodes = nodes.front();
    for (auto n : nodes)
        if (std::llabs(static_cast<long long>(n) - 100) <
            std::llabs(static_cast<long long>(anchor_nodes) - 100))
            anchor_nodes = n;

    std::map<std::string, std::string> files;
    files["fig_pdr_vs_nodes.csv"] = table_vs_nodes(
        sweep, protocols, nodes, anchor_speed, [](const SweepAggRow& r) -> const AggValue& { return r.pdr; });
    files["fig_pdr_vs_speed.csv"] = table_vs_speed(
        sweep, protocols, speeds, anchor_nodes, [](const SweepAggRow& r) -> const AggValue& { return r.pdr; });
    files["fig_loss_vs_speed.csv"] =
        table_vs_speed(sweep, protocols, speeds, anchor_nodes,
                       [](const SweepAggRow& r) -> const AggValue& { return r.loss_pct; });
    files["fig_loss_vs_nodes.csv"] =
        table_vs_nodes(sweep, protocols, nodes, anchor_speed,
                       [](const SweepAggRow& r) -> const AggValue& { return r.loss_pct; });
    files["fig_ctrl_pkts.csv"] =
        table_vs_nodes(sweep, protocols, nodes, anchor_speed,
                       [](const SweepAggRow& r) -> const AggValue& { return r.avg_election_packets; });
    files["fig_lifetime_vs_nodes.csv"] =
        table_vs_nodes(sweep, protocols, nodes, anchor_speed,
                       [](const SweepAggRow& r) -> const AggValue& { return r.lifetime_rounds; });
    files["fig_lifetime_vs_speed.csv"] =
        table_vs_speed(sweep, protocols, speeds, anchor_nodes,
                       [](const SweepAggRow& r) -> const AggValue& { return r.lifetime_rounds; });
    return files;
}

}  // namespace mwsn
