#include <doctest.h>

#include <cmath>
#include <set>

#include "test_helpers.hpp"

using namespace mwsn;
using mwsn::test::make_config;
using mwsn::test::make_world;

namespace {

bool results_equal(const TrialResult& a, const TrialResult& b) {
    return a.config_fingerprint == b.config_fingerprint && a.pdr == b.pdr &&
           a.loss_pct == b.loss_pct && a.intra_loss_pct == b.intra_loss_pct &&
           a.inter_loss_pct == b.inter_loss_pct && a.lifetime_rounds == b.lifetime_rounds &&
           a.censored == b.censored && a.avg_election_packets == b.avg_election_packets &&
           a.election_packets == b.election_packets && a.hello_packets == b.hello_packets &&
           a.gradient_packets == b.gradient_packets && a.recovery_requests == b.recovery_requests &&
           a.recovery_replies == b.recovery_replies && a.intra_sent == b.intra_sent &&
           a.inter_sent == b.inter_sent && a.total_energy_drawn_j == b.total_energy_drawn_j;
}

}  // namespace

// Hand-simulated round: member (node 0), head (node 1), sink on one line,
// everything stationary and in range. Every counter and every joule is
// derived step by step next to the assertions.
TEST_CASE("one demc round matches the hand-computed ledger exactly") {
    const SimConfig cfg = make_config({{"protocol.kind", "demc"},
                                       {"sim.nodes", "2"},
                                       {"mobility.mean_speed_mps", "0"},
                                       {"mobility.speed_stddev_mps", "0"},
                                       {"sim.max_rounds", "1"}});
    World w = make_world(cfg, {{700, 500}, {600, 500}});  // sink at (500,500)
    w.round = 1;
    run_round(w);

    // weights: node1 = 0.9 + 0.1 = 1.0, node0 = 0.9; node 1 fires first and
    // suppresses node 0 -> one announcement, node 0 joins node 1
    CHECK(w.ledger.election_packets == 1);
    CHECK(w.ledger.join_packets == 1);
    CHECK(w.nodes[1].role.kind == RoleKind::ClusterHead);
    CHECK(w.nodes[0].role.kind == RoleKind::Member);

    // gradient flood: sink root beacon + one beacon per reached node
    CHECK(w.ledger.gradient_packets == 3);

    // one member data packet, one head-to-sink aggregate hop, no losses
    CHECK(w.ledger.intra.sent == 1);
    CHECK(w.ledger.intra.delivered == 1);
    CHECK(w.ledger.intra.lost == 0);
    CHECK(w.ledger.inter.sent == 1);
    CHECK(w.ledger.inter.delivered == 1);
    CHECK(w.ledger.inter.lost == 0);
    CHECK(w.ledger.hello_packets == 0);
    CHECK(w.ledger.recovery_requests == 0);
    CHECK(w.ledger.rounds_completed == 1);
    CHECK(w.ledger.alive_node_rounds == 2);
    CHECK(!w.ledger.first_death_round);

    // energy, charge by charge (control = 200 bits, data = 800 bits,
    // node0-node1 = 100 m, node1-sink = 100 m)
    const RadioParams& r = w.radio;
    const double ctrl_rx = rx_energy(200, r);
    const double ctrl_bcast = tx_energy(200, r.range_m, r);

    double n0 = 0.0;
    n0 += ctrl_rx;                   // hears node 1's announcement
    n0 += tx_energy(200, 100.0, r);  // join to node 1
    n0 += ctrl_rx;                   // sink's root gradient beacon
    n0 += ctrl_bcast;                // its own gradient beacon
    n0 += ctrl_rx;                   // node 1's gradient beacon
    n0 += tx_energy(800, 100.0, r);  // data to its head
    CHECK(w.nodes[0].energy.drawn == n0);

    double n1 = 0.0;
    n1 += ctrl_bcast;                // announcement broadcast
    n1 += rx_energy(200, r);         // node 0's join
    n1 += ctrl_rx;                   // sink's root gradient beacon
    n1 += ctrl_rx;                   // node 0's gradient beacon
    n1 += ctrl_bcast;                // its own gradient beacon
    n1 += rx_energy(800, r);         // member data
    n1 += tx_energy(800, 100.0, r);  // aggregate to the sink
    CHECK(w.nodes[1].energy.drawn == n1);

    const double total = w.total_energy_drawn();
    CHECK(std::abs(total - w.ledger.total_charged_j) <= 1e-12 * total);
}

TEST_CASE("a member drifting out of range loses its data packet") {
    const SimConfig cfg = make_config({{"protocol.kind", "demc"},
                                       {"sim.nodes", "2"},
                                       {"radio.range_m", "100"},
                                       {"mobility.mean_speed_mps", "0"},
                                       {"mobility.speed_stddev_mps", "0"},
                                       {"sim.max_rounds", "1"}});
    World w = make_world(cfg, {{550, 500}, {600, 500}});
    // member heads straight away from its head at 30 m/s, no redraws
    w.nodes[0].kin.heading_rad = M_PI;
    w.nodes[0].kin.speed_mps = 30.0;
    w.nodes[0].kin.next_update_at_s = 1e18;
    w.nodes[1].kin.speed_mps = 0.0;
    w.nodes[1].kin.next_update_at_s = 1e18;
    w.round = 1;
    run_round(w);

    CHECK(w.nodes[0].role.head == 1);  // associated at tick 1 (80 m apart)
    // by the data tick the member sits 200 m out -> intra loss
    CHECK(w.ledger.intra.sent == 1);
    CHECK(w.ledger.intra.lost == 1);
    // the head still reaches the sink (100 m, inclusive boundary)
    CHECK(w.ledger.inter.delivered == 1);
}

TEST_CASE("trials are deterministic functions of (config, seed)") {
    const SimConfig cfg = make_config({{"protocol.kind", "demc_recovery"},
                                       {"sim.nodes", "30"},
                                       {"sim.max_rounds", "30"},
                                       {"sim.seed", "99"}});
    const TrialResult a = run_trial(cfg);
    const TrialResult b = run_trial(cfg);
    CHECK(results_equal(a, b));

    SimConfig other = cfg;
    other.seed = 100;
    const TrialResult c = run_trial(other);
    CHECK_FALSE(results_equal(a, c));
}

TEST_CASE("energy audit and ledger conservation hold over whole trials") {
    for (const char* kind : {"deca", "demc", "mar", "grc_recovery"}) {
        const SimConfig cfg = make_config({{"protocol.kind", kind},
                                           {"sim.nodes", "40"},
                                           {"sim.max_rounds", "25"},
                                           {"sim.seed", "7"}});
        World w = World::make(cfg);
        std::size_t dead_before = 0;
        for (std::uint64_t round = 1; round <= cfg.max_rounds; ++round) {
            w.round = round;
            run_round(w);
            // ledger conservation per phase
            REQUIRE(w.ledger.intra.sent == w.ledger.intra.delivered + w.ledger.intra.lost);
            REQUIRE(w.ledger.inter.sent == w.ledger.inter.delivered + w.ledger.inter.lost);
            // deaths are monotone
            const std::size_t dead = w.nodes.size() - w.alive_count();
            REQUIRE(dead >= dead_before);
            dead_before = dead;
        }
        // audit: initial - remaining == everything charged, node by node
        double gap_total = 0.0;
        for (const auto& n : w.nodes) gap_total += n.energy.initial - n.energy.remaining();
        REQUIRE(std::abs(gap_total - w.ledger.total_charged_j) <=
                1e-12 * std::max(1.0, w.ledger.total_charged_j));
    }
}

TEST_CASE("metric formulas") {
    MetricsLedger led;
    led.intra = {50, 45, 5};
    led.inter = {0, 0, 0};
    CHECK(*packet_loss_pct(led) == doctest::Approx(10.0));
    CHECK(*pdr(led) == doctest::Approx(0.9));
    CHECK(*pdr(led) + *packet_loss_pct(led) / 100.0 == doctest::Approx(1.0).epsilon(1e-9));

    led.intra = {50, 50, 0};
    CHECK(*packet_loss_pct(led) == 0.0);
    CHECK(*pdr(led) == 1.0);

    const MetricsLedger empty;
    CHECK(!packet_loss_pct(empty));
    CHECK(!pdr(empty));

    MetricsLedger e;
    e.election_packets = 30;
    e.alive_node_rounds = 60;
    CHECK(*avg_election_packets_per_node(e) == 0.5);
}

TEST_CASE("pdr and loss stay complementary on simulated ledgers") {
    for (int seed = 1; seed <= 5; ++seed) {
        const SimConfig cfg = make_config({{"protocol.kind", "grc"},
                                           {"sim.nodes", "60"},
                                           {"sim.max_rounds", "15"},
                                           {"sim.seed", std::to_string(seed)}});
        const TrialResult t = run_trial(cfg);
        REQUIRE(t.pdr);
        REQUIRE(t.loss_pct);
        REQUIRE(std::abs(*t.pdr + *t.loss_pct / 100.0 - 1.0) <= 1e-9);
        REQUIRE(t.lifetime_rounds <= std::max<std::uint64_t>(t.rounds_completed, cfg.max_rounds));
    }
}

TEST_CASE("max_rounds 0 yields an empty, censored trial") {
    const SimConfig cfg = make_config({{"sim.max_rounds", "0"}, {"sim.nodes", "10"}});
    const TrialResult t = run_trial(cfg);
    CHECK(t.rounds_completed == 0);
    CHECK(t.censored);
    CHECK(t.lifetime_rounds == 0);
    CHECK(!t.pdr);
    CHECK(!t.loss_pct);
    CHECK(!t.avg_election_packets);
}

TEST_CASE("a starving network dies in round one") {
    const SimConfig cfg = make_config({{"protocol.kind", "demc"},
                                       {"sim.nodes", "12"},
                                       {"energy.initial_j", "2e-5"},
                                       {"sim.max_rounds", "50"}});
    const TrialResult t = run_trial(cfg);
    CHECK(t.lifetime_rounds == 1);
    CHECK_FALSE(t.censored);
    CHECK(t.rounds_completed == 1);
}

TEST_CASE("deca hello cadence adapts to mobility") {
    const SimConfig cfg = make_config({{"protocol.kind", "deca"},
                                       {"deca.hello_period_ticks", "2"},
                                       {"sim.nodes", "5"},
                                       {"radio.range_m", "100"},
                                       {"mobility.mean_speed_mps", "0"},
                                       {"mobility.speed_stddev_mps", "0"},
                                       {"sim.max_rounds", "1"}});

    SUBCASE("static nodes refresh once per round") {
        World w = make_world(cfg, {{500, 500}, {520, 500}, {540, 500}, {560, 500}, {580, 500}});
        w.round = 1;
        run_round(w);
        CHECK(w.ledger.hello_packets == 5);
    }
    SUBCASE("fast movers hello at every period tick") {
        World w = make_world(cfg, {{100, 500}, {100, 520}, {100, 540}, {100, 560}, {100, 580}});
        for (auto& n : w.nodes) {
            n.kin.heading_rad = 0.0;  // straight +x at 20 m/s, no redraws
            n.kin.speed_mps = 20.0;
            n.kin.next_update_at_s = 1e18;
        }
        w.round = 1;
        run_round(w);
        // 20-tick round, period 2 -> hello ticks 0,2,...,18 -> 10 per node
        CHECK(w.ledger.hello_packets == 50);
    }

    const SimConfig demc = make_config({{"protocol.kind", "demc"}, {"sim.nodes", "5"},
                                        {"sim.max_rounds", "1"}});
    const TrialResult t = run_trial(demc);
    CHECK(t.hello_packets == 0);
}

TEST_CASE("deca neighbor tables evict entries older than two hello periods") {
    const SimConfig cfg = make_config({{"protocol.kind", "deca"},
                                       {"sim.nodes", "2"},
                                       {"mobility.mean_speed_mps", "0"},
                                       {"mobility.speed_stddev_mps", "0"}});
    World w = make_world(cfg, {{500, 500}, {550, 500}});
    w.round = 1;
    w.tick = 0;
    hello_phase(w);
    CHECK(w.nodes[0].neighbors.count(1) == 1);
    w.kill(1);
    // two hello periods later the silent neighbor ages out
    w.round = 4;  // absolute tick 60 with 20-tick rounds
    w.tick = 0;
    hello_phase(w);
    CHECK(w.nodes[0].neighbors.count(1) == 0);
}

TEST_CASE("deca sends exactly one election packet per node-round") {
    const SimConfig cfg = make_config({{"protocol.kind", "deca"},
                                       {"sim.nodes", "25"},
                                       {"sim.max_rounds", "8"},
                                       {"sim.seed", "3"}});
    const TrialResult t = run_trial(cfg);
    REQUIRE(t.avg_election_packets);
    CHECK(*t.avg_election_packets == 1.0);
}

TEST_CASE("a lone node elects itself and still counts one announcement") {
    const SimConfig cfg = make_config({{"protocol.kind", "demc"},
                                       {"sim.nodes", "1"},
                                       {"sim.max_rounds", "3"}});
    const TrialResult t = run_trial(cfg);
    REQUIRE(t.avg_election_packets);
    CHECK(*t.avg_election_packets == 1.0);
}
