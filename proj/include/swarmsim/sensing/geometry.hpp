#pragma once

#include <vector>

#include "swarmsim/core/types.hpp"

namespace swarmsim {

/// Positive for counterclockwise vertex order.
double polygon_signed_area(const std::vector<Vec2>& poly);

/// Boundary-inclusive even-odd test.
bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p);

/// Distance from p to the nearest point of the polygon outline.
double polygon_boundary_distance(const std::vector<Vec2>& poly, Vec2 p);

/// True when no two non-adjacent edges intersect.
bool polygon_is_simple(const std::vector<Vec2>& poly);

/// True when the disk of `radius` around p touches the polygon (inside or
/// within radius of the outline).
bool polygon_hits_disk(const std::vector<Vec2>& poly, Vec2 p, double radius);

/// Inward offset by `margin`, guaranteed to stay inside the input; vertices
/// whose miter would leave the input (reflex artifacts) are dropped.
/// Output is counterclockwise. Throws when the offset collapses the polygon.
std::vector<Vec2> shrink_polygon(const std::vector<Vec2>& measured, double margin);

/// Geometric field-of-view test. The target is a disk of `target_radius`;
/// a hit means the disk intersects the closed FOV region.
bool in_fov(const AgentState& observer, const AgentState& target,
            const SensorModel& sensor, double target_radius);

}  // namespace swarmsim
