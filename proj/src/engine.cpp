#include "mwsn/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>

#include "mwsn/protocols.hpp"

namespace mwsn {

namespace {

std::string fingerprint(const SimConfig& cfg) {
    const std::string text = print_config(cfg);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

void run_round(World& w) {
    const SimConfig& cfg = w.cfg;
    const bool posb = is_position_based(cfg.protocol);
    const PhaseCounters inter_before = w.ledger.inter;
    const auto recoveries_before = w.ledger.recovery_requests;
    std::vector<PendingRelay> pending;

    for (int tick = 0; tick < cfg.ticks_per_round; ++tick) {
        w.tick = tick;
        const double now =
            static_cast<double>((w.round - 1) * static_cast<std::uint64_t>(cfg.ticks_per_round) + tick);

        if (posb) {
            for (auto& n : w.nodes) {
                if (!n.alive()) continue;
                auto [loc, joules] = maybe_position_fix(n.loc, n.kin.position);
                n.loc = loc;
                if (joules > 0.0) w.charge(n.id, joules);
            }
        }
        if (cfg.protocol == ProtocolKind::DECA && tick % cfg.hello_period_ticks == 0) hello_phase(w);

        if (tick == 0) {
            const auto before = w.ledger.election_packets;
            run_election(w);
            if (w.events) {
                std::size_t heads = 0;
                for (const auto& n : w.nodes)
                    if (n.alive() && n.role.kind == RoleKind::ClusterHead) ++heads;
                *w.events << "round " << w.round
                          << " election: announcements=" << (w.ledger.election_packets - before)
                          << " heads=" << heads << " alive=" << w.alive_count() << "\n";
            }
        }
        if (tick == 1) {
            associate_phase(w);
            if (!posb) build_gradient(w);
            if (w.events) {
                std::size_t members = 0, heads = 0;
                for (const auto& n : w.nodes) {
                    if (!n.alive()) continue;
                    if (n.role.kind == RoleKind::Member) ++members;
                    if (n.role.kind == RoleKind::ClusterHead) ++heads;
                }
                *w.events << "round " << w.round << " association: members=" << members
                          << " heads=" << heads << "\n";
            }
        }
        if (tick == cfg.data_tick) {
            const auto before = w.ledger.intra;
            intra_phase(w);
            if (w.events)
                *w.events << "round " << w.round << " intra: sent=" << (w.ledger.intra.sent - before.sent)
                          << " delivered=" << (w.ledger.intra.delivered - before.delivered)
                          << " lost=" << (w.ledger.intra.lost - before.lost) << "\n";
        }
        if (tick == cfg.inter_tick) inter_phase(w, pending);
        if (tick > cfg.inter_tick && !pending.empty()) recovery_wave(w, pending);

        for (auto& n : w.nodes) {
            if (!n.alive()) continue;
            n.kin = step(n.kin, now, 1.0, w.mobility, cfg.field, w.mobility_streams[n.id]);
            n.mf = update_mobility_factor(n.mf, n.kin.position, cfg.grid, cfg.field);
        }
    }
    if (w.events)
        *w.events << "round " << w.round << " inter: sent=" << (w.ledger.inter.sent - inter_before.sent)
                  << " delivered=" << (w.ledger.inter.delivered - inter_before.delivered)
                  << " lost=" << (w.ledger.inter.lost - inter_before.lost)
                  << " recoveries=" << (w.ledger.recovery_requests - recoveries_before) << "\n";
    ++w.ledger.rounds_completed;
}

TrialResult summarize_trial(const World& w) {
    const MetricsLedger& led = w.ledger;
    TrialResult r;
    r.config_fingerprint = fingerprint(w.cfg);
    r.protocol = w.cfg.protocol;
    r.nodes = w.cfg.nodes;
    r.speed_mps = w.cfg.mean_speed_mps;
    r.seed = w.cfg.seed;
    r.pdr = pdr(led);
    r.loss_pct = packet_loss_pct(led);
    r.intra_loss_pct = phase_loss_pct(led.intra);
    r.inter_loss_pct = phase_loss_pct(led.inter);
    r.censored = !led.first_death_round.has_value();
    r.lifetime_rounds = led.first_death_round.value_or(w.cfg.max_rounds);
    r.avg_election_packets = avg_election_packets_per_node(led);
    r.election_packets = led.election_packets;
    r.hello_packets = led.hello_packets;
    r.gradient_packets = led.gradient_packets;
    r.recovery_requests = led.recovery_requests;
    r.recovery_replies = led.recovery_replies;
    r.intra_sent = led.intra.sent;
    r.intra_delivered = led.intra.delivered;
    r.intra_lost = led.intra.lost;
    r.inter_sent = led.inter.sent;
    r.inter_delivered = led.inter.delivered;
    r.inter_lost = led.inter.lost;
    r.rounds_completed = led.rounds_completed;
    r.total_energy_drawn_j = w.total_energy_drawn();
    return r;
}

TrialResult run_trial(const SimConfig& cfg, std::ostream* events) {
    World w = World::make(cfg);
    w.events = events;
    if (events)
        *events << "trial protocol=" << protocol_name(cfg.protocol) << " nodes=" << cfg.nodes
                << " speed=" << cfg.mean_speed_mps << " seed=" << cfg.seed << "\n";
    for (std::uint64_t r = 1; r <= cfg.max_rounds; ++r) {
        if (w.alive_count() == 0) break;
        w.round = r;
        run_round(w);
        if (w.ledger.first_death_round) break;  // finish the death round, then stop
    }
    if (events)
        *events << "trial end: rounds=" << w.ledger.rounds_completed << " first_death_round="
                << (w.ledger.first_death_round ? std::to_string(*w.ledger.first_death_round)
                                               : std::string("none"))
                << "\n";
    return summarize_trial(w);
}

namespace {

struct Welford {
    int n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    AggValue value() const {
        if (n == 0) return {};
        return {mean, n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0};
    }
};

std::string cell_name(ProtocolKind p, std::uint32_t nodes, double speed, std::uint64_t seed) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%s, nodes=%u, speed=%g, seed=%llu)", protocol_name(p), nodes,
                  speed, static_cast<unsigned long long>(seed));
    return buf;
}

}  // namespace

SweepResult run_sweep(const SweepRequest& req) {
    if (req.protocols.empty() || req.node_counts.empty() || req.speeds.empty() || req.seeds < 1)
        throw ConfigError{"", 0, "sweep axes must be nonempty and seeds >= 1"};

    auto protocols = req.protocols;
    std::sort(protocols.begin(), protocols.end(), [](ProtocolKind a, ProtocolKind b) {
        return std::string(protocol_name(a)) < protocol_name(b);
    });
    protocols.erase(std::unique(protocols.begin(), protocols.end()), protocols.end());
    auto node_counts = req.node_counts;
    std::sort(node_counts.begin(), node_counts.end());
    node_counts.erase(std::unique(node_counts.begin(), node_counts.end()), node_counts.end());
    auto speeds = req.speeds;
    std::sort(speeds.begin(), speeds.end());
    speeds.erase(std::unique(speeds.begin(), speeds.end()), speeds.end());

    ConfigDoc base = req.base;
    base.erase("protocol.kind");
    base.erase("recovery.enabled");
    std::uint64_t base_seed = 1;
    if (const std::string* s = base.find("sim.seed")) base_seed = std::strtoull(s->c_str(), nullptr, 10);

    struct Cell {
        ProtocolKind protocol;
        std::uint32_t nodes;
        double speed;
        SimConfig cfg;
    };
    std::vector<Cell> cells;
    for (ProtocolKind p : protocols) {
        for (std::uint32_t n : node_counts) {
            for (double s : speeds) {
                for (int k = 0; k < req.seeds; ++k) {
                    ConfigDoc doc = base;
                    doc.set("protocol.kind", protocol_name(p));
                    doc.set("sim.nodes", std::to_string(n));
                    char sp[32];
                    std::snprintf(sp, sizeof(sp), "%.17g", s);
                    doc.set("mobility.mean_speed_mps", sp);
                    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
                    doc.set("sim.seed", std::to_string(seed));
                    try {
                        cells.push_back({p, n, s, resolve_config(doc)});
                    } catch (ConfigError& e) {
                        e.message = "sweep cell " + cell_name(p, n, s, seed) + ": " + e.message;
                        throw;
                    }
                }
            }
        }
    }

    SweepResult out;
    out.trials.resize(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                out.trials[i] = run_trial(cells[i].cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    const int jobs = std::max(1, req.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // aggregate per (protocol, nodes, speed); trials are already grouped
    for (std::size_t i = 0; i < out.trials.size();) {
        const Cell& c = cells[i];
        Welford pdr_w, loss_w, intra_w, inter_w, life_w, elect_w, hello_w, grad_w, rreq_w, rrep_w,
            ilost_w;
        std::size_t j = i;
        for (; j < out.trials.size() && cells[j].protocol == c.protocol && cells[j].nodes == c.nodes &&
               cells[j].speed == c.speed;
             ++j) {
            const TrialResult& t = out.trials[j];
            if (t.pdr) pdr_w.add(*t.pdr);
            if (t.loss_pct) loss_w.add(*t.loss_pct);
            if (t.intra_loss_pct) intra_w.add(*t.intra_loss_pct);
            if (t.inter_loss_pct) inter_w.add(*t.inter_loss_pct);
            life_w.add(static_cast<double>(t.lifetime_rounds));
            if (t.avg_election_packets) elect_w.add(*t.avg_election_packets);
            hello_w.add(static_cast<double>(t.hello_packets));
            grad_w.add(static_cast<double>(t.gradient_packets));
            rreq_w.add(static_cast<double>(t.recovery_requests));
            rrep_w.add(static_cast<double>(t.recovery_replies));
            ilost_w.add(static_cast<double>(t.inter_lost));
        }
        SweepAggRow row;
        row.protocol = c.protocol;
        row.nodes = c.nodes;
        row.speed_mps = c.speed;
        row.seeds = static_cast<int>(j - i);
        row.pdr = pdr_w.value();
        row.loss_pct = loss_w.value();
        row.intra_loss_pct = intra_w.value();
        row.inter_loss_pct = inter_w.value();
        row.lifetime_rounds = life_w.value();
        row.avg_election_packets = elect_w.value();
        row.hello_packets = hello_w.value();
        row.gradient_packets = grad_w.value();
        row.recovery_requests = rreq_w.value();
        row.recovery_replies = rrep_w.value();
        row.inter_lost = ilost_w.value();
        out.aggregate.push_back(row);
        i = j;
    }
    return out;
}

}  // namespace mwsn
