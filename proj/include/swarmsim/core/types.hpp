#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace swarmsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct AgentState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians, kept in [-pi, pi)
    int id = 0;
};

struct ControlCommand {
    double forward_speed = 0.0;  // u1, m/s
    double turn_rate = 0.0;      // u2, rad/s
};

/// Arena rectangle centered on the origin.
struct Rect {
    double width = 10.0;
    double height = 10.0;
};

struct ConeFov {
    double range = 0.6;
    double half_angle = 0.2617993877991494;  // 15 degrees
};

/// Sensor-frame polygon, x forward, y left, vertices counterclockwise.
struct PolygonFov {
    std::vector<Vec2> vertices;
};

struct SensorModel {
    enum class Kind { Cone, Polygon };
    Kind kind = Kind::Cone;
    ConeFov cone;
    PolygonFov polygon;
    double false_positive_rate = 0.08;
    double false_negative_rate = 0.20;

    /// Farthest point of the field of view from the sensor origin.
    double max_range() const;
};

/// Normal(mu, sigma) of a multiplicative actuation factor, measured at one
/// commanded magnitude. sigma is the raw measured spread; inflation is
/// applied at sampling time.
struct ThetaBracket {
    double commanded = 1.0;
    double mu = 1.0;
    double sigma = 0.0;
};

struct ThetaDistribution {
    std::vector<ThetaBracket> brackets{ThetaBracket{}};

    /// (mu, sigma) at a commanded magnitude: linear interpolation between
    /// brackets, clamped to the end brackets outside their span.
    ThetaBracket at(double commanded) const;
};

struct InitSpec {
    double ring_radius = 0.0;  // 0 means 1.1 x sensor max range
    bool even = false;         // evenly spaced ring angles instead of random
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct PhaseThresholds {
    double deadlock = 0.5;
    double wall = 0.5;
    double mill = 0.8;
    double mill_semi = 0.5;
    double collision_low = 0.02;
};

struct ControllerSpec {
    enum class Kind { Mill, Constant, Table };
    Kind kind = Kind::Mill;
    // Constant uses on_zero for both sensor outputs; Table maps y=0 / y=1.
    ControlCommand on_zero;
    ControlCommand on_one;
};

struct TrialConfig {
    std::uint64_t seed = 1;
    int n_agents = 9;
    double desired_speed = 0.15;      // v, m/s
    double desired_turn_rate = 0.75;  // omega, rad/s
    double dt = 0.13;
    double duration = 300.0;
    Rect arena;
    double collision_radius = 0.075;
    InitSpec init;
    Interval speed_bounds{0.0, 0.5};
    Interval turn_bounds{-1.5, 1.5};
    double inflation_factor = 2.0;
    double jitter_sd = 0.0;
    ThetaDistribution theta_speed;
    ThetaDistribution theta_turn;
    SensorModel sensor;
    ControllerSpec controller;
    double metrics_window_fraction = 0.3;
    PhaseThresholds thresholds;
    int log_every = 1;

    /// Throws swarmsim::Error on an invalid combination.
    void validate() const;
};

}  // namespace swarmsim
