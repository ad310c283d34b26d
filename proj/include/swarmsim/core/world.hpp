#pragma once

#include <cstdint>
#include <vector>

#include "swarmsim/control/controllers.hpp"
#include "swarmsim/core/rng.hpp"
#include "swarmsim/core/types.hpp"
#include "swarmsim/kernels/kernels.hpp"
#include "swarmsim/kinematics/collision.hpp"
#include "swarmsim/metrics/metrics.hpp"

namespace swarmsim {

/// Agent arrays are SoA so the batch kernels can run over them directly.
struct WorldState {
    std::uint64_t tick = 0;
    std::vector<double> x, y, heading;
    std::vector<double> theta_speed, theta_turn;  // per-agent base factors
    std::vector<std::uint8_t> stuck;              // reverted by a contact this tick
    std::vector<Rng> sensor_rng, jitter_rng;      // one stream per agent

    // previous-tick snapshot: what sensing reads and what contacts revert to
    std::vector<double> prev_x, prev_y, prev_h;

    // per-tick scratch
    std::vector<double> hcos, hsin, u1, u2, th1, th2;
    std::vector<std::uint8_t> hits;

    int n() const { return static_cast<int>(x.size()); }
};

/// Everything one tick produces besides the state itself.
struct TickOutputs {
    std::vector<int> y;                 // sensor outputs per agent
    std::vector<ControlCommand> cmd;    // commands per agent
    std::vector<CollisionEvent> events;

    void clear() {
        y.clear();
        cmd.clear();
        events.clear();
    }
};

/// Agents on a circle of the configured ring radius around the arena
/// center, headings radially outward. Angles are uniform draws, or evenly
/// spaced with init.even. Throws when placements keep colliding or the
/// ring does not fit the arena.
WorldState init_ring(const TrialConfig& config);

/// One synchronous tick: every sensor reads the previous-tick snapshot,
/// all agents integrate, then contacts and walls are resolved.
void step_world(WorldState& world, const TrialConfig& config,
                const Controller& controller, TickOutputs& out);

struct TrajectoryRecord {
    std::uint64_t tick = 0;
    int id = 0;
    double x = 0.0, y = 0.0, heading = 0.0;  // state the controller saw
    int y_out = 0;
    double u1 = 0.0, u2 = 0.0;
};

/// Streaming consumer for trial output; all hooks optional.
class TrialSink {
public:
    virtual ~TrialSink() = default;
    virtual void on_begin(const TrialConfig&) {}
    virtual void on_record(const TrajectoryRecord&) {}
    virtual void on_event(const CollisionEvent&) {}
    virtual void on_end() {}
};

struct TrialResult {
    TrialMetrics metrics;
    Phase phase = Phase::Dispersion;
    std::uint64_t ticks = 0;
};

/// Runs ceil(duration/dt) ticks from a ring init, classifies the evaluation
/// window (the trailing metrics_window_fraction of the trial), and streams
/// records/events to the sink when given.
TrialResult run_trial(const TrialConfig& config, TrialSink* sink = nullptr);

}  // namespace swarmsim
