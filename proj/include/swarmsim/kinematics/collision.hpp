#pragma once

#include <cstdint>
#include <vector>

#include "swarmsim/core/types.hpp"

namespace swarmsim {

/// Contact between two agents, or between an agent and a wall (j == kWall).
/// bearing is the direction of the partner (or of the penetration for a
/// wall) in agent i's body frame, radians in [-pi, pi).
struct CollisionEvent {
    std::uint64_t tick = 0;
    int i = 0;
    int j = 0;
    double bearing = 0.0;

    static constexpr int kWall = -1;
};

/// Frontal-stop contact rule over post-integration poses. Pairs are scanned
/// in ascending (i, j) order against live states; a contact is any pair with
/// center distance < 2 * collision_radius. A member of a contacting pair
/// whose partner lies within +-90 degrees of its heading reverts to its
/// pre-integration pose (prev arrays) and gets stuck[i] = 1 for this tick;
/// an agent hit from behind is unaffected. One event per contacting pair.
void resolve_collisions(std::vector<double>& x, std::vector<double>& y,
                        std::vector<double>& heading,
                        const std::vector<double>& prev_x,
                        const std::vector<double>& prev_y,
                        const std::vector<double>& prev_h,
                        double collision_radius, std::uint64_t tick,
                        std::vector<std::uint8_t>& stuck,
                        std::vector<CollisionEvent>& events);

/// Clamp agent centers into the arena rectangle (centered on the origin),
/// headings unchanged. Emits one wall event per agent that was outside.
void clamp_to_arena(std::vector<double>& x, std::vector<double>& y,
                    const std::vector<double>& heading, const Rect& arena,
                    std::uint64_t tick, std::vector<CollisionEvent>& events);

}  // namespace swarmsim
