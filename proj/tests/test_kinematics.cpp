#include <doctest.h>

#include <cmath>
#include <vector>

#include "swarmsim/core/rng.hpp"
#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/kinematics/collision.hpp"
#include "swarmsim/kinematics/unicycle.hpp"

using namespace swarmsim;
using kernels::kPi;
using kernels::kTwoPi;

TEST_SUITE("kinematics") {

TEST_CASE("one Euler step moves along the old heading") {
    AgentState s{0.0, 0.0, 0.0, 0};
    AgentState out = integrate(s, {0.15, 0.0}, {}, 0.13);
    CHECK(out.x == doctest::Approx(0.0195).epsilon(1e-15));
    CHECK(out.y == 0.0);
    CHECK(out.heading == 0.0);

    out = integrate(s, {0.0, 0.75}, {}, 0.13);
    CHECK(out.x == 0.0);
    CHECK(out.y == 0.0);
    CHECK(out.heading == doctest::Approx(0.0975).epsilon(1e-15));
}

TEST_CASE("idiosyncrasy factors scale speed and turn independently") {
    AgentState s{1.0, -2.0, 0.5, 0};
    AgentState full = integrate(s, {0.2, 0.6}, {1.0, 1.0, 0.0}, 0.13);
    AgentState slow = integrate(s, {0.2, 0.6}, {0.5, 1.0, 0.0}, 0.13);
    AgentState stiff = integrate(s, {0.2, 0.6}, {1.0, 0.5, 0.0}, 0.13);
    CHECK(slow.x - s.x == doctest::Approx((full.x - s.x) / 2).epsilon(1e-12));
    CHECK(slow.y - s.y == doctest::Approx((full.y - s.y) / 2).epsilon(1e-12));
    CHECK(slow.heading == full.heading);
    CHECK(stiff.x == full.x);
    CHECK(stiff.heading - s.heading ==
          doctest::Approx((full.heading - s.heading) / 2).epsilon(1e-12));
}

TEST_CASE("heading is normalized into [-pi, pi)") {
    AgentState s{0.0, 0.0, 3.1, 0};
    AgentState out = integrate(s, {0.0, 1.5}, {}, 0.13);  // 3.1 + 0.195 wraps
    CHECK(out.heading >= -kPi);
    CHECK(out.heading < kPi);
    CHECK(out.heading == doctest::Approx(3.295 - kTwoPi).epsilon(1e-12));
}

TEST_CASE("constant turn traces the closed-form circle") {
    // the Euler polygon for constant (v, w) is a regular polygon with chord
    // v*dt and exterior angle w*dt, so its vertices lie on a circle of
    // radius (v*dt/2) / sin(w*dt/2)
    const double v = 0.15, w = 0.75, dt = 0.13;
    const double radius = (v * dt / 2.0) / std::sin(w * dt / 2.0);
    const int ticks = static_cast<int>(std::ceil(kTwoPi / (w * dt)));  // 65

    AgentState s{0.0, 0.0, 0.0, 0};
    std::vector<AgentState> path{s};
    for (int k = 0; k < ticks; ++k)
        path.push_back(integrate(path.back(), {v, w}, {}, dt));

    // circumcenter from the first step: the chord from path[0] points along
    // the old heading, so the center sits at +90 degrees minus half the
    // exterior angle
    double cx = path[0].x - radius * std::sin(path[0].heading - w * dt / 2.0);
    double cy = path[0].y + radius * std::cos(path[0].heading - w * dt / 2.0);
    double worst = 0.0;
    for (const AgentState& p : path)
        worst = std::max(worst, std::fabs(std::hypot(p.x - cx, p.y - cy) - radius));
    CHECK(worst < 1e-9);
    CHECK(radius == doctest::Approx(v / w).epsilon(2e-4));  // discrete vs continuous

    // after one full wrap the polygon closes to within a step length
    CHECK(std::hypot(path[ticks].x - path[0].x, path[ticks].y - path[0].y) <
          v * dt + 1e-12);
    CHECK(path[ticks].heading ==
          doctest::Approx(ticks * w * dt - kTwoPi).epsilon(1e-9));
}

TEST_CASE("head-on contact stops both agents") {
    std::vector<double> px{-0.05, 0.05}, py{0.0, 0.0}, ph{0.0, -kPi};
    // both tried to advance into each other this tick
    std::vector<double> x{-0.04, 0.04}, y{0.0, 0.0}, h{0.1, -kPi + 0.1};
    std::vector<std::uint8_t> stuck(2, 0);
    std::vector<CollisionEvent> events;
    resolve_collisions(x, y, h, px, py, ph, 0.075, 7, stuck, events);
    CHECK(x[0] == -0.05);  // full pose revert, heading included
    CHECK(x[1] == 0.05);
    CHECK(h[0] == 0.0);
    CHECK(h[1] == -kPi);
    CHECK(stuck[0] == 1);
    CHECK(stuck[1] == 1);
    REQUIRE(events.size() == 1);
    CHECK(events[0].tick == 7);
    CHECK(events[0].i == 0);
    CHECK(events[0].j == 1);
    // bearing is measured from the pose that collided, heading 0.1
    CHECK(events[0].bearing == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("an agent hit from behind keeps moving") {
    // leader (0) heading +x with the follower behind it; follower (1)
    // overlaps after its step
    std::vector<double> px{0.20, 0.00}, py{0.0, 0.0}, ph{0.0, 0.0};
    std::vector<double> x{0.22, 0.09}, y{0.0, 0.0}, h{0.0, 0.0};
    std::vector<std::uint8_t> stuck(2, 0);
    std::vector<CollisionEvent> events;
    resolve_collisions(x, y, h, px, py, ph, 0.075, 0, stuck, events);
    CHECK(x[0] == 0.22);   // leader unaffected: partner is behind it
    CHECK(x[1] == 0.00);   // follower reverts: partner is ahead
    CHECK(stuck[0] == 0);
    CHECK(stuck[1] == 1);
    CHECK(events.size() == 1);
}

TEST_CASE("contact in the rear quarter affects nobody") {
    // partners at bearings -135 and 180 degrees: outside the frontal sector
    std::vector<double> px{-0.01, 0.07}, py{0.01, -0.07}, ph{kPi / 2, -kPi / 4};
    std::vector<double> x{0.0, 0.06}, y{0.0, -0.06}, h{kPi / 2, -kPi / 4};
    std::vector<std::uint8_t> stuck(2, 0);
    std::vector<CollisionEvent> events;
    resolve_collisions(x, y, h, px, py, ph, 0.075, 0, stuck, events);
    CHECK(x[0] == 0.0);
    CHECK(x[1] == 0.06);
    CHECK(stuck[0] == 0);
    CHECK(stuck[1] == 0);
    CHECK(events.size() == 1);  // the contact is still reported
}

TEST_CASE("a partner exactly abeam still counts as frontal") {
    // 90 degrees is inside the closed sector, so agent 0 stops; agent 1
    // faces +x with its partner dead astern and keeps its step
    std::vector<double> px{-0.01, 0.10}, py{0.0, 0.0}, ph{kPi / 2, 0.0};
    std::vector<double> x{0.0, 0.09}, y{0.0, 0.0}, h{kPi / 2, 0.0};
    std::vector<std::uint8_t> stuck(2, 0);
    std::vector<CollisionEvent> events;
    resolve_collisions(x, y, h, px, py, ph, 0.075, 0, stuck, events);
    CHECK(x[0] == -0.01);  // partner at bearing -90: revert
    CHECK(stuck[0] == 1);
    CHECK(x[1] == 0.09);
    CHECK(stuck[1] == 0);
}

TEST_CASE("resolution only ever restores previous poses") {
    Rng rng(40);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 6;
        std::vector<double> px(n), py(n), ph(n), x(n), y(n), h(n);
        for (int i = 0; i < n; ++i) {
            px[i] = rng.uniform(-0.2, 0.2);
            py[i] = rng.uniform(-0.2, 0.2);
            ph[i] = rng.uniform(-kPi, kPi);
            x[i] = px[i] + rng.uniform(-0.02, 0.02);
            y[i] = py[i] + rng.uniform(-0.02, 0.02);
            h[i] = kernels::normalize_angle(ph[i] + rng.uniform(-0.1, 0.1));
        }
        std::vector<double> lx = x, ly = y, lh = h;
        std::vector<std::uint8_t> stuck(n, 0);
        std::vector<CollisionEvent> events;
        resolve_collisions(x, y, h, px, py, ph, 0.075, 0, stuck, events);

        // poses only move backward, so a pair was in contact when it was
        // examined iff some mix of its live and previous endpoints touches
        auto some_combo_touches = [&](int i, int j) {
            for (double ax : {lx[i], px[i]})
                for (double ay : {ly[i], py[i]})
                    for (double bx : {lx[j], px[j]})
                        for (double by : {ly[j], py[j]})
                            if (std::hypot(ax - bx, ay - by) < 0.15) return true;
            return false;
        };
        std::vector<bool> in_event(n, false);
        std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
        for (const CollisionEvent& e : events) {
            CHECK(e.i < e.j);
            CHECK(!seen[e.i][e.j]);  // each pair examined once
            seen[e.i][e.j] = true;
            in_event[e.i] = in_event[e.j] = true;
            CHECK(some_combo_touches(e.i, e.j));
        }
        for (int i = 0; i < n; ++i) {
            bool reverted = x[i] == px[i] && y[i] == py[i] && h[i] == ph[i];
            bool kept = x[i] == lx[i] && y[i] == ly[i] && h[i] == lh[i];
            CHECK((reverted || kept));  // poses never invent a third state
            CHECK(stuck[i] == (reverted && !kept ? 1 : 0));
            if (!in_event[i]) CHECK(kept);  // only event members ever move
        }
        // a live-contact pair that both ended up keeping their live poses was
        // still touching when examined, so it must have produced an event
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                bool both_kept = x[i] == lx[i] && y[i] == ly[i] && h[i] == lh[i] &&
                                 x[j] == lx[j] && y[j] == ly[j] && h[j] == lh[j];
                if (both_kept && std::hypot(lx[i] - lx[j], ly[i] - ly[j]) < 0.15)
                    CHECK(seen[i][j]);
            }
    }
}

TEST_CASE("walls clamp position and keep heading") {
    std::vector<double> x{5.2, 0.0, -5.3}, y{0.0, -5.1, -5.2};
    std::vector<double> h{0.3, 1.0, -2.0};
    std::vector<CollisionEvent> events;
    clamp_to_arena(x, y, h, Rect{10.0, 10.0}, 3, events);
    CHECK(x[0] == 5.0);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == -5.0);
    CHECK(x[2] == -5.0);
    CHECK(y[2] == -5.0);
    CHECK(h[0] == 0.3);
    REQUIRE(events.size() == 3);
    for (const CollisionEvent& e : events) {
        CHECK(e.j == CollisionEvent::kWall);
        CHECK(e.tick == 3);
    }

    events.clear();
    std::vector<double> ix{1.0}, iy{-2.0}, ih{0.0};
    clamp_to_arena(ix, iy, ih, Rect{10.0, 10.0}, 4, events);
    CHECK(events.empty());
    CHECK(ix[0] == 1.0);
}

TEST_CASE("theta brackets interpolate and clamp") {
    ThetaDistribution d;
    d.brackets = {{0.025, 0.8, 0.02}, {0.05, 0.9, 0.04}};
    CHECK(d.at(0.025).mu == 0.8);
    CHECK(d.at(0.05).mu == 0.9);
    CHECK(d.at(0.0375).mu == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(d.at(0.0375).sigma == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(d.at(0.01).mu == 0.8);   // clamped below
    CHECK(d.at(0.2).mu == 0.9);    // clamped above
    ThetaDistribution ideal;       // default: single identity bracket
    CHECK(ideal.at(0.15).mu == 1.0);
    CHECK(ideal.at(0.15).sigma == 0.0);
}

}  // TEST_SUITE
