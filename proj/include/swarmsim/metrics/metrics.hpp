#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "swarmsim/core/types.hpp"

namespace swarmsim {

struct TrialMetrics {
    double milling_order = 0.0;      // [0,1] tangential alignment about centroid
    double radial_cv = 0.0;          // spread of centroid distances
    double centroid_drift = 0.0;     // m/s over the evaluation window
    double collision_rate = 0.0;     // pair contacts per agent per second
    double deadlock_fraction = 0.0;  // worst agent's stopped-tick fraction
    double wall_fraction = 0.0;      // agents hugging a wall at trial end
};

enum class Phase {
    Dispersion = 0,
    StableMilling = 1,
    SemiStableMilling = 2,
    CollidingUnstable = 3,
};
inline constexpr int kPhaseCount = 4;

const char* phase_name(Phase p);
char phase_letter(Phase p);       // D, M, S, C
Phase phase_from_name(const std::string& name);
Phase phase_from_letter(char c);

/// Decision list, first match wins:
///   1. CollidingUnstable  if deadlock_fraction >= deadlock
///   2. Dispersion         if wall_fraction >= wall and milling_order < mill
///   3. StableMilling      if milling_order >= mill and collision_rate <= collision_low
///   4. SemiStableMilling  if milling_order >= mill_semi and collision_rate > collision_low
///   5. Dispersion
Phase classify(const TrialMetrics& m, const PhaseThresholds& t);

/// Streaming milling-order estimator. Feed one state snapshot per tick
/// (n agents, SoA). Per tick the rotation sense is the majority sign of the
/// tangential scores; each agent contributes max(0, sense * score). Agents
/// sitting on the centroid are skipped.
class MillingAccumulator {
public:
    void add_tick(const double* x, const double* y, const double* heading, std::size_t n);

    /// Mean contribution; throws when fewer than 2 ticks were added or every
    /// agent-tick was skipped.
    double value() const;

private:
    std::vector<double> dx_, dy_, hc_, hs_, score_;
    double sum_ = 0.0;
    std::size_t contributions_ = 0;
    std::size_t ticks_ = 0;
};

/// Order over a stored window: tick-major SoA arrays of n_ticks * n_agents.
double milling_order(const double* x, const double* y, const double* heading,
                     std::size_t n_ticks, std::size_t n_agents);

}  // namespace swarmsim
