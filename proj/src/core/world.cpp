#include "swarmsim/core/world.hpp"

#include <algorithm>
#include <cmath>

#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/sensing/geometry.hpp"
#include "swarmsim/sensing/sensor.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {
namespace {

constexpr double kThetaFloor = 1e-12;
constexpr int kPlacementRetries = 1000;

std::uint64_t tick_count(const TrialConfig& c) {
    return static_cast<std::uint64_t>(std::ceil(c.duration / c.dt - 1e-9));
}

}  // namespace

ThetaBracket ThetaDistribution::at(double commanded) const {
    double c = std::fabs(commanded);
    const auto& b = brackets;
    if (b.size() == 1 || c <= b.front().commanded) return b.front();
    if (c >= b.back().commanded) return b.back();
    std::size_t k = 1;
    while (b[k].commanded < c) ++k;
    const ThetaBracket& lo = b[k - 1];
    const ThetaBracket& hi = b[k];
    double t = (c - lo.commanded) / (hi.commanded - lo.commanded);
    return {c, lo.mu + t * (hi.mu - lo.mu), lo.sigma + t * (hi.sigma - lo.sigma)};
}

void TrialConfig::validate() const {
    if (n_agents < 1) throw Error("n_agents must be >= 1");
    if (!(dt > 0.0)) throw Error("dt must be > 0");
    if (!(duration >= dt)) throw Error("duration must be >= dt");
    if (!(arena.width > 0.0) || !(arena.height > 0.0))
        throw Error("arena sides must be > 0");
    if (collision_radius < 0.0) throw Error("collision_radius must be >= 0");
    if (!(inflation_factor >= 1.0))
        throw Error("inflation_factor must be >= 1 (simulated agents are never better than measured)");
    if (jitter_sd < 0.0) throw Error("jitter_sd must be >= 0");
    if (metrics_window_fraction <= 0.0 || metrics_window_fraction > 1.0)
        throw Error("metrics_window_fraction must be in (0, 1]");
    if (log_every < 1) throw Error("log_every must be >= 1");

    auto in = [](const Interval& b, double v) { return v >= b.lo && v <= b.hi; };
    if (!in(speed_bounds, desired_speed))
        throw Error("desired_speed outside the actuation bounds");
    if (!in(turn_bounds, desired_turn_rate) || !in(turn_bounds, -desired_turn_rate))
        throw Error("desired_turn_rate outside the actuation bounds");
    if (controller.kind != ControllerSpec::Kind::Mill) {
        for (const ControlCommand& c : {controller.on_zero, controller.on_one}) {
            if (!in(speed_bounds, c.forward_speed) || !in(turn_bounds, c.turn_rate))
                throw Error("controller table command outside the actuation bounds");
        }
    }

    if (sensor.false_positive_rate < 0.0 || sensor.false_positive_rate > 1.0 ||
        sensor.false_negative_rate < 0.0 || sensor.false_negative_rate > 1.0)
        throw Error("sensor noise rates must be in [0, 1]");
    if (sensor.kind == SensorModel::Kind::Cone) {
        if (!(sensor.cone.range > 0.0)) throw Error("cone range must be > 0");
        if (!(sensor.cone.half_angle > 0.0) || sensor.cone.half_angle > kernels::kPi)
            throw Error("cone half angle must be in (0, pi]");
    } else {
        const auto& v = sensor.polygon.vertices;
        if (v.size() < 3) throw Error("sensor polygon needs at least 3 vertices");
        if (!polygon_is_simple(v)) throw Error("sensor polygon is self-intersecting");
        if (!point_in_polygon(v, {0.0, 0.0}))
            throw Error("sensor polygon must contain the sensor origin");
    }

    for (const ThetaDistribution* d : {&theta_speed, &theta_turn}) {
        if (d->brackets.empty()) throw Error("theta distribution needs at least one bracket");
        for (std::size_t k = 0; k < d->brackets.size(); ++k) {
            const ThetaBracket& b = d->brackets[k];
            if (!(b.mu > 0.0)) throw Error("theta mu must be > 0");
            if (b.sigma < 0.0) throw Error("theta sigma must be >= 0");
            if (k > 0 && !(b.commanded > d->brackets[k - 1].commanded))
                throw Error("theta brackets must have increasing commanded values");
        }
    }
}

WorldState init_ring(const TrialConfig& config) {
    config.validate();
    const int n = config.n_agents;
    const double radius = config.init.ring_radius > 0.0
                              ? config.init.ring_radius
                              : 1.1 * config.sensor.max_range();
    if (!(radius > 0.0)) throw Error("ring radius must be > 0");
    if (radius > std::min(config.arena.width, config.arena.height) / 2.0)
        throw Error("ring radius does not fit the arena");

    WorldState w;
    w.x.resize(n);
    w.y.resize(n);
    w.heading.resize(n);
    w.theta_speed.resize(n);
    w.theta_turn.resize(n);
    w.stuck.assign(n, 0);
    w.prev_x.resize(n);
    w.prev_y.resize(n);
    w.prev_h.resize(n);
    w.hcos.resize(n);
    w.hsin.resize(n);
    w.u1.resize(n);
    w.u2.resize(n);
    w.th1.resize(n);
    w.th2.resize(n);
    w.hits.resize(n);

    Rng root(config.seed);
    Rng placement = root.derive(StreamTag::Placement);
    const double min_sep_sq = 4.0 * config.collision_radius * config.collision_radius;

    auto place = [&](int i, double phi, double rho) {
        double s, c;
        kernels::sincos_scalar(phi, s, c);
        w.x[i] = rho * c;
        w.y[i] = rho * s;
        w.heading[i] = kernels::normalize_angle(phi);
    };
    auto collides = [&](int i) {
        for (int j = 0; j < i; ++j) {
            double dx = w.x[i] - w.x[j];
            double dy = w.y[i] - w.y[j];
            if (dx * dx + dy * dy < min_sep_sq) return true;
        }
        return false;
    };

    // even: agents on the circle itself, evenly spaced. random: anywhere in
    // the enclosed disk (area uniform), so the group starts connected.
    // Headings face away from the arena center either way.
    for (int i = 0; i < n; ++i) {
        if (config.init.even) {
            place(i, kernels::kTwoPi * static_cast<double>(i) / static_cast<double>(n),
                  radius);
            if (collides(i)) throw Error("even ring placement collides; enlarge the ring");
        } else {
            int tries = 0;
            do {
                if (++tries > kPlacementRetries)
                    throw Error("ring placement kept colliding; enlarge the ring or reduce agents");
                double phi = placement.uniform(0.0, kernels::kTwoPi);
                double rho = radius * std::sqrt(placement.next_double());
                place(i, phi, rho);
            } while (collides(i));
        }
    }

    ThetaBracket bs = config.theta_speed.at(config.desired_speed);
    ThetaBracket bt = config.theta_turn.at(config.desired_turn_rate);
    for (int i = 0; i < n; ++i) {
        Rng rs = root.derive(StreamTag::ThetaSpeed, static_cast<std::uint64_t>(i));
        Rng rt = root.derive(StreamTag::ThetaTurn, static_cast<std::uint64_t>(i));
        w.theta_speed[i] = rs.truncated_normal(bs.mu, config.inflation_factor * bs.sigma);
        w.theta_turn[i] = rt.truncated_normal(bt.mu, config.inflation_factor * bt.sigma);
        w.sensor_rng.push_back(root.derive(StreamTag::Sensor, static_cast<std::uint64_t>(i)));
        w.jitter_rng.push_back(root.derive(StreamTag::Jitter, static_cast<std::uint64_t>(i)));
    }
    return w;
}

void step_world(WorldState& w, const TrialConfig& config,
                const Controller& controller, TickOutputs& out) {
    const auto& ops = kernels::active();
    const int n = w.n();
    out.clear();
    out.y.resize(n);
    out.cmd.resize(n);

    // snapshot: sensing reads it, contact resolution reverts to it
    w.prev_x = w.x;
    w.prev_y = w.y;
    w.prev_h = w.heading;
    std::fill(w.stuck.begin(), w.stuck.end(), 0);

    ops.sincos(w.prev_h.data(), w.hsin.data(), w.hcos.data(), n);

    if (config.sensor.kind == SensorModel::Kind::Cone) {
        kernels::ConeSpec spec = kernels::make_cone_spec(
            config.sensor.cone.range, config.sensor.cone.half_angle,
            config.collision_radius);
        for (int i = 0; i < n; ++i) {
            ops.cone_hits(w.prev_x[i], w.prev_y[i], w.hcos[i], w.hsin[i], spec,
                          w.prev_x.data(), w.prev_y.data(), w.hits.data(), n);
            bool raw = false;
            for (int j = 0; j < n; ++j) {
                if (j != i && w.hits[j]) {
                    raw = true;
                    break;
                }
            }
            out.y[i] = noisy_output(raw, config.sensor, w.sensor_rng[i]);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            AgentState oi{w.prev_x[i], w.prev_y[i], w.prev_h[i], i};
            bool raw = false;
            for (int j = 0; j < n && !raw; ++j) {
                if (j == i) continue;
                AgentState tj{w.prev_x[j], w.prev_y[j], w.prev_h[j], j};
                raw = in_fov(oi, tj, config.sensor, config.collision_radius);
            }
            out.y[i] = noisy_output(raw, config.sensor, w.sensor_rng[i]);
        }
    }

    for (int i = 0; i < n; ++i) {
        ControlCommand cmd = controller.command(i, out.y[i], w.tick);
        out.cmd[i] = cmd;
        w.u1[i] = cmd.forward_speed;
        w.u2[i] = cmd.turn_rate;
        double t1 = w.theta_speed[i];
        double t2 = w.theta_turn[i];
        if (config.jitter_sd > 0.0) {
            t1 = std::max(t1 + w.jitter_rng[i].normal(0.0, config.jitter_sd), kThetaFloor);
            t2 = std::max(t2 + w.jitter_rng[i].normal(0.0, config.jitter_sd), kThetaFloor);
        }
        w.th1[i] = t1;
        w.th2[i] = t2;
    }

    ops.step_unicycle(w.prev_x.data(), w.prev_y.data(), w.prev_h.data(),
                      w.u1.data(), w.u2.data(), w.th1.data(), w.th2.data(),
                      config.dt, w.x.data(), w.y.data(), w.heading.data(), n);

    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(w.x[i]) || !std::isfinite(w.y[i]) || !std::isfinite(w.heading[i]))
            throw SimulationError("non-finite agent state at tick " + std::to_string(w.tick));
    }

    resolve_collisions(w.x, w.y, w.heading, w.prev_x, w.prev_y, w.prev_h,
                       config.collision_radius, w.tick, w.stuck, out.events);
    clamp_to_arena(w.x, w.y, w.heading, config.arena, w.tick, out.events);
    ++w.tick;
}

TrialResult run_trial(const TrialConfig& config, TrialSink* sink) {
    WorldState w = init_ring(config);
    auto controller = make_controller(config.controller, config.desired_speed,
                                      config.desired_turn_rate);
    const std::uint64_t ticks = tick_count(config);
    const int n = config.n_agents;

    // evaluation window: trailing snapshots of the (ticks + 1)-state history
    const std::uint64_t n_states = ticks + 1;
    std::uint64_t window_states = static_cast<std::uint64_t>(
        std::llround(config.metrics_window_fraction * static_cast<double>(n_states)));
    window_states = std::clamp<std::uint64_t>(window_states, 2, n_states);
    const std::uint64_t window_start = n_states - window_states;  // snapshot index
    const double window_seconds = static_cast<double>(window_states - 1) * config.dt;

    MillingAccumulator milling;
    double radial_sum = 0.0, radial_sum_sq = 0.0;
    std::uint64_t radial_count = 0;
    double start_cx = 0.0, start_cy = 0.0, end_cx = 0.0, end_cy = 0.0;
    std::uint64_t pair_events = 0;
    std::vector<std::uint64_t> stuck_ticks(n, 0);

    auto absorb_snapshot = [&](std::uint64_t index) {
        if (index < window_start) return;
        double cx = 0.0, cy = 0.0;
        for (int i = 0; i < n; ++i) {
            cx += w.x[i];
            cy += w.y[i];
        }
        cx /= n;
        cy /= n;
        if (index == window_start) {
            start_cx = cx;
            start_cy = cy;
        }
        if (index == n_states - 1) {
            end_cx = cx;
            end_cy = cy;
        }
        for (int i = 0; i < n; ++i) {
            double d = std::hypot(w.x[i] - cx, w.y[i] - cy);
            radial_sum += d;
            radial_sum_sq += d * d;
            ++radial_count;
        }
        if (n >= 2) milling.add_tick(w.x.data(), w.y.data(), w.heading.data(), n);
    };

    if (sink) sink->on_begin(config);
    absorb_snapshot(0);

    TickOutputs out;
    for (std::uint64_t t = 0; t < ticks; ++t) {
        step_world(w, config, *controller, out);
        if (sink) {
            if (t % static_cast<std::uint64_t>(config.log_every) == 0) {
                for (int i = 0; i < n; ++i) {
                    // the state the controller saw plus what it did with it
                    sink->on_record({t, i, w.prev_x[i], w.prev_y[i], w.prev_h[i],
                                     out.y[i], out.cmd[i].forward_speed,
                                     out.cmd[i].turn_rate});
                }
            }
            for (const CollisionEvent& e : out.events) sink->on_event(e);
        }
        if (t >= window_start) {
            for (const CollisionEvent& e : out.events)
                if (e.j != CollisionEvent::kWall) ++pair_events;
            for (int i = 0; i < n; ++i)
                if (w.stuck[i]) ++stuck_ticks[i];
        }
        absorb_snapshot(t + 1);
    }
    if (sink) sink->on_end();

    TrialMetrics m;
    m.milling_order = n >= 2 ? milling.value() : 0.0;
    double mean_r = radial_count ? radial_sum / static_cast<double>(radial_count) : 0.0;
    double var_r = radial_count
                       ? std::max(0.0, radial_sum_sq / static_cast<double>(radial_count) - mean_r * mean_r)
                       : 0.0;
    m.radial_cv = mean_r > 0.0 ? std::sqrt(var_r) / mean_r : 0.0;
    m.centroid_drift = std::hypot(end_cx - start_cx, end_cy - start_cy) / window_seconds;
    m.collision_rate = static_cast<double>(pair_events) /
                       (static_cast<double>(n) * window_seconds);
    const std::uint64_t window_ticks = n_states - 1 - window_start;
    std::uint64_t worst = 0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, stuck_ticks[i]);
    m.deadlock_fraction = window_ticks
                              ? static_cast<double>(worst) / static_cast<double>(window_ticks)
                              : 0.0;
    const double hw = config.arena.width / 2.0;
    const double hh = config.arena.height / 2.0;
    int hugging = 0;
    for (int i = 0; i < n; ++i) {
        double wall_dist = std::min(hw - std::fabs(w.x[i]), hh - std::fabs(w.y[i]));
        if (wall_dist <= config.collision_radius) ++hugging;
    }
    m.wall_fraction = static_cast<double>(hugging) / static_cast<double>(n);

    return {m, classify(m, config.thresholds), ticks};
}

}  // namespace swarmsim
