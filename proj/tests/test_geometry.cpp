#include <doctest.h>

#include "mwsn/geometry.hpp"
#include "mwsn/rng.hpp"

using namespace mwsn;

namespace {
const FieldGeometry kField{1000.0, 1000.0};
const ZoneGrid kGrid{4, 4};
}  // namespace

TEST_CASE("zone_index maps points row-major with boundary clamping") {
    CHECK(zone_index({0, 0}, kGrid, kField) == 0);
    // floor arithmetic: row 3, col 3 -> 3*4 + 3
    CHECK(zone_index({999.9, 999.9}, kGrid, kField) == 15);
    // row 0, col 1
    CHECK(zone_index({260, 10}, kGrid, kField) == 1);
    // exact max boundary clamps into the last row/col
    CHECK(zone_index({1000, 1000}, kGrid, kField) == 15);
    CHECK(zone_index({250, 0}, kGrid, kField) == 1);

    CHECK_THROWS_AS(zone_index({-0.1, 10}, kGrid, kField), std::invalid_argument);
    CHECK_THROWS_AS(zone_index({10, 1000.5}, kGrid, kField), std::invalid_argument);
}

TEST_CASE("zone_center is the midpoint of the zone rectangle") {
    CHECK(zone_center(0, kGrid, kField) == Vec2{125, 125});
    CHECK(zone_center(15, kGrid, kField) == Vec2{875, 875});
    const ZoneGrid whole{1, 1};
    CHECK(zone_center(0, whole, kField) == Vec2{500, 500});

    CHECK_THROWS_AS(zone_center(-1, kGrid, kField), std::invalid_argument);
    CHECK_THROWS_AS(zone_center(16, kGrid, kField), std::invalid_argument);
}

TEST_CASE("distance basics") {
    CHECK(distance({0, 0}, {0, 0}) == 0.0);
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({100, 100}, {100, 350}) == 250.0);
}

TEST_CASE("zone partition is total and centers stay in their zone") {
    RandomStream rng(2024, 0, StreamPurpose::Generic);
    for (int i = 0; i < 10000; ++i) {
        const Vec2 p{rng.uniform(0, kField.width), rng.uniform(0, kField.height)};
        const int z = zone_index(p, kGrid, kField);
        REQUIRE(z >= 0);
        REQUIRE(z < kGrid.zone_count());
        REQUIRE(zone_index(zone_center(z, kGrid, kField), kGrid, kField) == z);
    }
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
    RandomStream rng(7, 0, StreamPurpose::Generic);
    for (int i = 0; i < 2000; ++i) {
        const Vec2 a{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        const Vec2 b{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        const Vec2 c{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        CHECK(distance(a, b) == distance(b, a));
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
    }
}
