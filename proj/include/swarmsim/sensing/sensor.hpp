#pragma once

#include <vector>

#include "swarmsim/core/rng.hpp"
#include "swarmsim/core/types.hpp"

namespace swarmsim {

/// Applies the false-positive / false-negative channel to a raw geometric
/// hit. Consumes exactly one uniform draw regardless of `raw`, so the noise
/// stream stays aligned whatever the geometry does.
int noisy_output(bool raw, const SensorModel& sensor, Rng& rng);

/// Binary presence output for observer i: 1 iff some other agent's disk is
/// in the FOV, passed through the noise channel.
int binary_output(int i, const std::vector<AgentState>& agents,
                  const SensorModel& sensor, double target_radius, Rng& rng);

}  // namespace swarmsim
