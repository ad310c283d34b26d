#include <doctest.h>

#include <cmath>
#include <vector>

#include "swarmsim/core/rng.hpp"
#include "swarmsim/core/types.hpp"
#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/sensing/geometry.hpp"
#include "swarmsim/sensing/sensor.hpp"
#include "swarmsim/util/error.hpp"

using namespace swarmsim;
using kernels::kPi;

namespace {

SensorModel cone_sensor(double range, double half_angle) {
    SensorModel s;
    s.kind = SensorModel::Kind::Cone;
    s.cone.range = range;
    s.cone.half_angle = half_angle;
    s.false_positive_rate = 0.0;
    s.false_negative_rate = 0.0;
    return s;
}

const std::vector<Vec2> kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST_SUITE("sensing") {

TEST_CASE("cone hits a target dead ahead and misses one behind") {
    SensorModel s = cone_sensor(0.6, 0.2617993877991494);
    AgentState obs{0, 0, 0, 0};
    CHECK(in_fov(obs, AgentState{0.5, 0, 0, 1}, s, 0.075));
    CHECK_FALSE(in_fov(obs, AgentState{-0.3, 0, 0, 1}, s, 0.075));
}

TEST_CASE("range cut counts the target disk, not just its center") {
    SensorModel s = cone_sensor(0.6, 0.2617993877991494);
    AgentState obs{0, 0, 0, 0};
    // disk edge at d - r: 0.595 reaches the 0.6 arc, 0.601 does not
    CHECK(in_fov(obs, AgentState{0.67, 0, 0, 1}, s, 0.075));
    CHECK_FALSE(in_fov(obs, AgentState{0.676, 0, 0, 1}, s, 0.075));
}

TEST_CASE("angular halo widens the cone by asin(r/d)") {
    const double half = 0.2617993877991494;
    SensorModel s = cone_sensor(0.6, half);
    AgentState obs{0, 0, 0, 0};
    const double d = 0.4;
    const double halo = std::asin(0.075 / d);
    double in = half + halo - 1e-3;
    double out = half + halo + 1e-3;
    CHECK(in_fov(obs, AgentState{d * std::cos(in), d * std::sin(in), 0, 1}, s, 0.075));
    CHECK_FALSE(
        in_fov(obs, AgentState{d * std::cos(out), d * std::sin(out), 0, 1}, s, 0.075));
    // same on the clockwise side
    CHECK(in_fov(obs, AgentState{d * std::cos(-in), d * std::sin(-in), 0, 1}, s, 0.075));
    CHECK_FALSE(
        in_fov(obs, AgentState{d * std::cos(-out), d * std::sin(-out), 0, 1}, s, 0.075));
}

TEST_CASE("cone rotates with the observer heading") {
    SensorModel s = cone_sensor(0.6, 0.2617993877991494);
    AgentState obs{1, 2, kPi / 2, 0};
    CHECK(in_fov(obs, AgentState{1, 2.5, 0, 1}, s, 0.075));   // dead ahead
    CHECK_FALSE(in_fov(obs, AgentState{1.5, 2, 0, 1}, s, 0.075));  // off the right hip
}

TEST_CASE("polygon field of view works in the sensor frame") {
    SensorModel s;
    s.kind = SensorModel::Kind::Polygon;
    s.polygon.vertices = {{0.05, -0.25}, {0.55, -0.25}, {0.55, 0.25}, {0.05, 0.25}};
    s.false_positive_rate = 0.0;
    s.false_negative_rate = 0.0;

    AgentState obs{0, 0, 0, 0};
    CHECK(in_fov(obs, AgentState{0.3, 0, 0, 1}, s, 0.075));    // inside
    CHECK(in_fov(obs, AgentState{0.6, 0, 0, 1}, s, 0.075));    // edge peek within r
    CHECK_FALSE(in_fov(obs, AgentState{0.7, 0, 0, 1}, s, 0.075));

    obs.heading = kPi / 2;
    CHECK(in_fov(obs, AgentState{0, 0.3, 0, 1}, s, 0.075));    // rotates with heading
    CHECK_FALSE(in_fov(obs, AgentState{0.4, 0, 0, 1}, s, 0.075));
    CHECK(s.max_range() == doctest::Approx(std::hypot(0.55, 0.25)));
}

TEST_CASE("point in polygon includes the boundary") {
    CHECK(point_in_polygon(kUnitSquare, {0.5, 0.5}));
    for (const Vec2& v : kUnitSquare) CHECK(point_in_polygon(kUnitSquare, v));
    CHECK(point_in_polygon(kUnitSquare, {0.5, 0.0}));
    CHECK(point_in_polygon(kUnitSquare, {1.0, 0.5}));
    CHECK(point_in_polygon(kUnitSquare, {0.5, 1.0}));
    CHECK(point_in_polygon(kUnitSquare, {0.0, 0.5}));
    CHECK_FALSE(point_in_polygon(kUnitSquare, {1.0000001, 0.5}));
    CHECK_FALSE(point_in_polygon(kUnitSquare, {-0.2, 0.5}));
    CHECK_FALSE(point_in_polygon(kUnitSquare, {0.5, -1e-9}));
    // rays through vertices and collinear with edges must not confuse the count
    CHECK_FALSE(point_in_polygon(kUnitSquare, {1.5, 0.0}));
    CHECK_FALSE(point_in_polygon(kUnitSquare, {1.5, 1.0}));
    CHECK_FALSE(point_in_polygon(kUnitSquare, {-0.5, 0.0}));
    CHECK_FALSE(point_in_polygon(kUnitSquare, {2.0, 2.0}));
}

TEST_CASE("signed area is positive counterclockwise") {
    CHECK(polygon_signed_area(kUnitSquare) == doctest::Approx(1.0));
    std::vector<Vec2> cw(kUnitSquare.rbegin(), kUnitSquare.rend());
    CHECK(polygon_signed_area(cw) == doctest::Approx(-1.0));
    CHECK(polygon_signed_area({{0, 0}, {1, 0}, {0, 1}}) == doctest::Approx(0.5));
}

TEST_CASE("simplicity check rejects self-intersection") {
    CHECK(polygon_is_simple(kUnitSquare));
    CHECK(polygon_is_simple({{0, 0}, {1, 0}, {0, 1}}));
    CHECK_FALSE(polygon_is_simple({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));  // bowtie
}

TEST_CASE("boundary distance measures to the outline") {
    CHECK(polygon_boundary_distance(kUnitSquare, {0.5, 0.5}) == doctest::Approx(0.5));
    CHECK(polygon_boundary_distance(kUnitSquare, {2.0, 0.5}) == doctest::Approx(1.0));
    CHECK(polygon_boundary_distance(kUnitSquare, {0.25, 0.0}) == doctest::Approx(0.0));
    CHECK(polygon_boundary_distance(kUnitSquare, {1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("disk hit covers interior and near-outline points") {
    CHECK(polygon_hits_disk(kUnitSquare, {0.5, 0.5}, 0.01));
    CHECK_FALSE(polygon_hits_disk(kUnitSquare, {1.5, 0.5}, 0.4));
    CHECK(polygon_hits_disk(kUnitSquare, {1.5, 0.5}, 0.6));
    CHECK(polygon_hits_disk(kUnitSquare, {-0.05, -0.05}, 0.075));
}

TEST_CASE("shrink keeps the safety margin and orientation") {
    for (double margin : {0.05, 0.1, 0.2}) {
        std::vector<Vec2> shrunk = shrink_polygon(kUnitSquare, margin);
        REQUIRE(shrunk.size() >= 3);
        CHECK(polygon_is_simple(shrunk));
        CHECK(polygon_signed_area(shrunk) > 0.0);
        CHECK(polygon_signed_area(shrunk) < 1.0);
        for (const Vec2& v : shrunk) {
            CHECK(point_in_polygon(kUnitSquare, v));
            CHECK(polygon_boundary_distance(kUnitSquare, v) >= margin - 1e-9);
        }
    }
}

TEST_CASE("shrink survives a reflex corner") {
    std::vector<Vec2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    std::vector<Vec2> shrunk = shrink_polygon(ell, 0.2);
    REQUIRE(shrunk.size() >= 3);
    CHECK(polygon_is_simple(shrunk));
    CHECK(polygon_signed_area(shrunk) > 0.0);
    for (const Vec2& v : shrunk) {
        CHECK(point_in_polygon(ell, v));
        CHECK(polygon_boundary_distance(ell, v) >= 0.2 - 1e-9);
    }
}

TEST_CASE("shrink throws when the margin swallows the polygon") {
    CHECK_THROWS_AS(shrink_polygon(kUnitSquare, 0.51), Error);
}

TEST_CASE("noise channel consumes one draw regardless of the raw bit") {
    SensorModel s = cone_sensor(0.6, 0.26);
    s.false_positive_rate = 0.08;
    s.false_negative_rate = 0.20;
    Rng a(7), b(7);
    noisy_output(true, s, a);
    noisy_output(false, s, b);
    CHECK(a.next_double() == b.next_double());  // streams stayed aligned
}

TEST_CASE("noise channel extremes") {
    SensorModel s = cone_sensor(0.6, 0.26);
    Rng rng(11);
    s.false_positive_rate = 0.0;
    s.false_negative_rate = 0.0;
    for (int i = 0; i < 100; ++i) {
        CHECK(noisy_output(true, s, rng) == 1);
        CHECK(noisy_output(false, s, rng) == 0);
    }
    s.false_positive_rate = 1.0;
    s.false_negative_rate = 1.0;
    for (int i = 0; i < 100; ++i) {
        CHECK(noisy_output(true, s, rng) == 0);
        CHECK(noisy_output(false, s, rng) == 1);
    }
}

TEST_CASE("noise channel empirical rates") {
    SensorModel s = cone_sensor(0.6, 0.26);
    s.false_positive_rate = 0.065;
    s.false_negative_rate = 0.05;
    Rng rng(123);
    const int n = 100000;
    int ghosts = 0, dropouts = 0;
    for (int i = 0; i < n; ++i) ghosts += noisy_output(false, s, rng);
    for (int i = 0; i < n; ++i) dropouts += 1 - noisy_output(true, s, rng);
    CHECK(ghosts / double(n) == doctest::Approx(0.065).epsilon(0.06));
    CHECK(dropouts / double(n) == doctest::Approx(0.05).epsilon(0.08));
}

TEST_CASE("binary output sees neighbors, never itself") {
    SensorModel s = cone_sensor(0.6, 0.2617993877991494);
    Rng rng(5);
    std::vector<AgentState> pair{{0, 0, 0, 0}, {0.4, 0, 0, 1}};
    CHECK(binary_output(0, pair, s, 0.075, rng) == 1);  // neighbor ahead
    CHECK(binary_output(1, pair, s, 0.075, rng) == 0);  // neighbor behind
    std::vector<AgentState> alone{{0, 0, 0, 0}};
    CHECK(binary_output(0, alone, s, 0.075, rng) == 0);

    s.false_negative_rate = 1.0;
    CHECK(binary_output(0, pair, s, 0.075, rng) == 0);  // dropout wins
    s.false_negative_rate = 0.0;
    s.false_positive_rate = 1.0;
    CHECK(binary_output(0, alone, s, 0.075, rng) == 1);  // ghost wins
}

}  // TEST_SUITE
