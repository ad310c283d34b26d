#pragma once

#include "swarmsim/core/types.hpp"
#include "swarmsim/kernels/kernels.hpp"

namespace swarmsim {

struct ActuationIdiosyncrasy {
    double speed_factor = 1.0;
    double turn_factor = 1.0;
    double per_step_jitter_sd = 0.0;
};

/// One Euler step of the idiosyncratic unicycle:
///   x' = x + u1 * theta1 * cos(h) * dt
///   y' = y + u1 * theta1 * sin(h) * dt
///   h' = normalize(h + u2 * theta2 * dt)
/// Runs through the same kernel as batch integration, so single-agent and
/// batched trajectories agree bit for bit.
inline AgentState integrate(const AgentState& s, const ControlCommand& cmd,
                            const ActuationIdiosyncrasy& idio, double dt) {
    AgentState out = s;
    kernels::scalar_ops().step_unicycle(&s.x, &s.y, &s.heading,
                                        &cmd.forward_speed, &cmd.turn_rate,
                                        &idio.speed_factor, &idio.turn_factor,
                                        dt, &out.x, &out.y, &out.heading, 1);
    return out;
}

}  // namespace swarmsim
