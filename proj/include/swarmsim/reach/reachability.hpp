#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "swarmsim/core/types.hpp"

namespace swarmsim {

/// One timestamped pose from a real robot log, already projected down to
/// the simulator's state (x, y, heading).
struct RealRecord {
    double t = 0.0;  // seconds
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
};

/// CSV columns t,x,y,heading (optional header); t strictly increasing.
std::vector<RealRecord> load_real_trajectory(const std::string& path);

/// How rollout controls are drawn. UniformRandom redraws both commands
/// every tick within the given ranges; Fixed holds one command throughout.
struct ControlPolicy {
    enum class Kind { UniformRandom, Fixed };
    Kind kind = Kind::UniformRandom;
    ControlCommand command;          // Fixed
    Interval speed_range{0.0, 0.0};  // UniformRandom
    Interval turn_range{0.0, 0.0};
};

/// Admissible-control policy spanning the config's actuation bounds.
ControlPolicy admissible_policy(const TrialConfig& config);

/// Monte-Carlo reachable set: bucket k holds sampled states at time k*dt.
/// Bucket 0 holds exactly the seed state; later buckets hold one state per
/// rollout.
struct ReachableCloud {
    double dt = 0.0;
    int n_rollouts = 0;
    std::vector<std::vector<double>> x, y, heading;

    std::size_t n_buckets() const { return x.size(); }
};

/// Rolls a single agent forward in free space n_rollouts times. Each
/// rollout draws its own actuation factors from the inflated calibration
/// distributions (one persistent deviate per channel, so a slow robot
/// stays slow) and its control sequence from the policy.
ReachableCloud sample_cloud(const AgentState& z0, const TrialConfig& config,
                            double horizon, int n_rollouts,
                            const ControlPolicy& policy, int workers = 0);

/// Convenience overload: uniformly random admissible controls.
ReachableCloud sample_cloud(const AgentState& z0, const TrialConfig& config,
                            double horizon, int n_rollouts, int workers = 0);

struct Violation {
    double t = 0.0;
    std::size_t bucket = 0;
    double pos_err = 0.0;   // distance to the nearest sample, m
    double head_err = 0.0;  // circular heading gap to that sample, rad
    double score = 0.0;     // max of the two errors over their tolerances
};

struct ContainmentReport {
    bool pass = true;
    std::size_t buckets_checked = 0;
    double first_time = 0.0;
    double last_time = 0.0;
    double worst_score = 0.0;
    double worst_time = 0.0;
    double worst_pos_err = 0.0;
    double worst_head_err = 0.0;
    std::vector<Violation> violations;
};

/// Interpolates the real trajectory to each bucket time it spans and
/// requires a cloud sample within tolerance there. Throws when the initial
/// states disagree or the cloud horizon is too short.
ContainmentReport check_containment(const std::vector<RealRecord>& real,
                                    const ReachableCloud& cloud, double tol_pos,
                                    double tol_head);

std::string format_report(const ContainmentReport& r, double tol_pos,
                          double tol_head);

}  // namespace swarmsim
