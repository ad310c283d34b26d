#include "swarmsim/sensing/sensor.hpp"

#include "swarmsim/sensing/geometry.hpp"

namespace swarmsim {

int noisy_output(bool raw, const SensorModel& sensor, Rng& rng) {
    double u = rng.next_double();
    if (raw) return u < sensor.false_negative_rate ? 0 : 1;
    return u < sensor.false_positive_rate ? 1 : 0;
}

int binary_output(int i, const std::vector<AgentState>& agents,
                  const SensorModel& sensor, double target_radius, Rng& rng) {
    bool raw = false;
    for (std::size_t j = 0; j < agents.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        if (in_fov(agents[static_cast<std::size_t>(i)], agents[j], sensor, target_radius)) {
            raw = true;
            break;
        }
    }
    return noisy_output(raw, sensor, rng);
}

}  // namespace swarmsim
