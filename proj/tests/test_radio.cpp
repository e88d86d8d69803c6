#include <doctest.h>

#include "mwsn/radio.hpp"
#include "mwsn/rng.hpp"
#include "test_helpers.hpp"

using namespace mwsn;
using mwsn::test::make_config;
using mwsn::test::make_world;

namespace {
// default radio constants: 50 nJ/bit, 0.0013 pJ/bit/m^2
const RadioParams kRadio{353.5533905932738, 50e-9, 0.0013e-12, 2};
}  // namespace

TEST_CASE("tx energy follows the two-term radio model") {
    CHECK(tx_energy(0, 50, kRadio) == 0.0);
    CHECK(tx_energy(800, 0, kRadio) == doctest::Approx(4.0e-5).epsilon(1e-12));
    // 800 bits over 100 m: 4e-5 + 800 * 1.3e-15 * 1e4
    CHECK(tx_energy(800, 100, kRadio) == doctest::Approx(4.00104e-5).epsilon(1e-12));

    RadioParams fourth = kRadio;
    fourth.path_loss_exponent = 4;
    CHECK(tx_energy(800, 10, fourth) == doctest::Approx(4.00104e-5).epsilon(1e-12));
}

TEST_CASE("rx energy is electronics only") {
    CHECK(rx_energy(0, kRadio) == 0.0);
    CHECK(rx_energy(800, kRadio) == doctest::Approx(4.0e-5).epsilon(1e-12));
    CHECK(rx_energy(200, kRadio) == doctest::Approx(1.0e-5).epsilon(1e-12));
}

TEST_CASE("tx at zero distance equals rx for any size") {
    RandomStream rng(11, 0, StreamPurpose::Generic);
    for (int i = 0; i < 200; ++i) {
        const double k = std::floor(rng.uniform(0, 1e5));
        CHECK(tx_energy(k, 0.0, kRadio) == rx_energy(k, kRadio));
    }
}

TEST_CASE("disk link is inclusive at the boundary and symmetric") {
    RadioParams r = kRadio;
    r.range_m = 100.0;
    CHECK(in_range({0, 0}, {0, 0}, r));
    CHECK(in_range({0, 0}, {100, 0}, r));
    CHECK_FALSE(in_range({0, 0}, {100.001, 0}, r));

    RandomStream rng(12, 0, StreamPurpose::Generic);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 a{rng.uniform(0, 500), rng.uniform(0, 500)};
        const Vec2 b{rng.uniform(0, 500), rng.uniform(0, 500)};
        CHECK(in_range(a, b, r) == in_range(b, a, r));
    }
}

TEST_CASE("position fix charging") {
    LocalizationState loc{{100, 100}, 1e-5, 10.0};

    SUBCASE("stationary node is never charged") {
        for (int i = 0; i < 100; ++i) {
            auto [next, j] = maybe_position_fix(loc, {100, 100});
            loc = next;
            REQUIRE(j == 0.0);
        }
    }

    SUBCASE("5 m per tick with a 10 m threshold fixes every second tick") {
        int fixes = 0;
        for (int t = 1; t <= 20; ++t) {
            auto [next, j] = maybe_position_fix(loc, {100.0 + 5.0 * t, 100.0});
            loc = next;
            if (j > 0) {
                ++fixes;
                CHECK(t % 2 == 0);
                CHECK(j == 1e-5);
            }
        }
        CHECK(fixes == 10);
    }

    SUBCASE("charge count stays proportional to distance travelled") {
        loc.fix_displacement_m = 4.0;
        double charged = 0.0;
        for (int t = 1; t <= 20; ++t) {
            auto [next, j] = maybe_position_fix(loc, {100.0 + 5.0 * t, 100.0});
            loc = next;
            charged += j;
        }
        // 100 m travelled at threshold 4 -> exactly 25 charges
        CHECK(charged == doctest::Approx(25 * 1e-5).epsilon(1e-9));
    }
}

namespace {

SimConfig two_node_config() {
    return make_config({{"sim.nodes", "2"},
                        {"mobility.mean_speed_mps", "0"},
                        {"mobility.speed_stddev_mps", "0"},
                        {"radio.range_m", "100"},
                        {"sim.seed", "5"}});
}

}  // namespace

TEST_CASE("unicast delivery pays both ends") {
    const SimConfig cfg = two_node_config();
    World w = make_world(cfg, {{200, 200}, {250, 200}});  // d = 50 = 0.5 * range
    Packet p;
    p.kind = PacketKind::Data;
    p.size_bytes = 100;
    p.src = 0;
    p.dst = 1;
    const Delivery d = transmit(w, 0, 1, p);
    CHECK(d.kind == DeliveryKind::Delivered);
    REQUIRE(d.receivers.size() == 1);
    CHECK(d.receivers[0] == 1);
    CHECK(w.nodes[0].energy.drawn == doctest::Approx(tx_energy(800, 50, w.radio)).epsilon(1e-12));
    CHECK(w.nodes[1].energy.drawn == doctest::Approx(rx_energy(800, w.radio)).epsilon(1e-12));
}

TEST_CASE("out-of-range unicast is lost but the sender still pays") {
    const SimConfig cfg = two_node_config();
    World w = make_world(cfg, {{200, 200}, {320, 200}});  // d = 120 = 1.2 * range
    Packet p;
    p.kind = PacketKind::Data;
    p.size_bytes = 100;
    p.src = 0;
    p.dst = 1;
    const Delivery d = transmit(w, 0, 1, p);
    CHECK(d.kind == DeliveryKind::LostOutOfRange);
    CHECK(w.nodes[0].energy.drawn == doctest::Approx(tx_energy(800, 120, w.radio)).epsilon(1e-12));
    CHECK(w.nodes[1].energy.drawn == 0.0);
}

TEST_CASE("broadcast with zero neighbors still delivers and only the sender pays") {
    const SimConfig cfg = two_node_config();
    World w = make_world(cfg, {{0, 0}, {900, 900}});
    Packet p;
    p.kind = PacketKind::Hello;
    p.size_bytes = 25;
    p.src = 0;
    const Delivery d = transmit(w, 0, kBroadcast, p);
    CHECK(d.kind == DeliveryKind::Delivered);
    CHECK(d.receivers.empty());
    CHECK(w.nodes[0].energy.drawn ==
          doctest::Approx(tx_energy(200, w.radio.range_m, w.radio)).epsilon(1e-12));
    CHECK(w.nodes[1].energy.drawn == 0.0);
}

TEST_CASE("dead sender transmits nothing and pays nothing") {
    const SimConfig cfg = two_node_config();
    World w = make_world(cfg, {{200, 200}, {250, 200}});
    w.kill(0);
    Packet p;
    p.kind = PacketKind::Data;
    p.size_bytes = 100;
    const Delivery d = transmit(w, 0, 1, p);
    CHECK(d.kind == DeliveryKind::LostDeadSender);
    CHECK(w.nodes[0].energy.drawn == 0.0);
    CHECK(w.nodes[1].energy.drawn == 0.0);
}

TEST_CASE("a sender that cannot afford the transmission dies without emitting") {
    SimConfig cfg = make_config({{"sim.nodes", "2"},
                                 {"mobility.mean_speed_mps", "0"},
                                 {"radio.range_m", "100"},
                                 {"energy.initial_j", "1e-6"}});  // below one data tx
    World w = make_world(cfg, {{200, 200}, {250, 200}});
    Packet p;
    p.kind = PacketKind::Data;
    p.size_bytes = 100;
    const Delivery d = transmit(w, 0, 1, p);
    CHECK(d.kind == DeliveryKind::LostDeadSender);
    CHECK_FALSE(w.nodes[0].alive());
    CHECK(w.nodes[0].energy.drawn == 0.0);  // residue kept, nothing emitted
    CHECK(w.nodes[1].energy.drawn == 0.0);
    CHECK(w.ledger.first_death_round == 1);
}

TEST_CASE("a receiver that cannot afford reception drains to zero and the packet is lost") {
    SimConfig cfg = make_config({{"sim.nodes", "2"},
                                 {"mobility.mean_speed_mps", "0"},
                                 {"radio.range_m", "100"},
                                 {"energy.initial_j", "5e-5"}});
    World w = make_world(cfg, {{200, 200}, {250, 200}});
    w.nodes[1].energy.drawn = 4.5e-5;  // 0.5e-5 left < rx cost of 100 bytes
    Packet p;
    p.kind = PacketKind::Data;
    p.size_bytes = 100;
    const Delivery d = transmit(w, 0, 1, p);
    CHECK(d.kind == DeliveryKind::LostDeadReceiver);
    CHECK_FALSE(w.nodes[1].alive());
    CHECK(w.nodes[1].energy.remaining() == 0.0);
}

TEST_CASE("dead nodes never appear in receiver sets and never change again") {
    const SimConfig cfg = two_node_config();
    World w = make_world(cfg, {{200, 200}, {250, 200}});
    w.kill(1);
    const double drawn_before = w.nodes[1].energy.drawn;
    Packet p;
    p.kind = PacketKind::Hello;
    p.size_bytes = 25;
    const Delivery d = transmit(w, 0, kBroadcast, p);
    CHECK(d.kind == DeliveryKind::Delivered);
    CHECK(d.receivers.empty());
    CHECK(w.nodes[1].energy.drawn == drawn_before);
    CHECK(w.nodes[1].role.kind == RoleKind::Dead);
}
