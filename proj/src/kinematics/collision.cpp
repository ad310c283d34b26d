#include "swarmsim/kinematics/collision.hpp"

#include <algorithm>
#include <cmath>

#include "swarmsim/kernels/trig.hpp"

namespace swarmsim {
namespace {

double bearing_of(double from_x, double from_y, double from_h, double to_x,
                  double to_y) {
    return kernels::normalize_angle(std::atan2(to_y - from_y, to_x - from_x) - from_h);
}

}  // namespace

void resolve_collisions(std::vector<double>& x, std::vector<double>& y,
                        std::vector<double>& heading,
                        const std::vector<double>& prev_x,
                        const std::vector<double>& prev_y,
                        const std::vector<double>& prev_h,
                        double collision_radius, std::uint64_t tick,
                        std::vector<std::uint8_t>& stuck,
                        std::vector<CollisionEvent>& events) {
    const std::size_t n = x.size();
    const double contact = 2.0 * collision_radius;
    const double contact_sq = contact * contact;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = x[j] - x[i];
            double dy = y[j] - y[i];
            if (dx * dx + dy * dy >= contact_sq) continue;

            double bearing_ij = bearing_of(x[i], y[i], heading[i], x[j], y[j]);
            double bearing_ji = bearing_of(x[j], y[j], heading[j], x[i], y[i]);
            events.push_back({tick, static_cast<int>(i), static_cast<int>(j), bearing_ij});

            if (std::fabs(bearing_ij) <= kernels::kPi / 2.0) {
                x[i] = prev_x[i];
                y[i] = prev_y[i];
                heading[i] = prev_h[i];
                stuck[i] = 1;
            }
            if (std::fabs(bearing_ji) <= kernels::kPi / 2.0) {
                x[j] = prev_x[j];
                y[j] = prev_y[j];
                heading[j] = prev_h[j];
                stuck[j] = 1;
            }
        }
    }
}

void clamp_to_arena(std::vector<double>& x, std::vector<double>& y,
                    const std::vector<double>& heading, const Rect& arena,
                    std::uint64_t tick, std::vector<CollisionEvent>& events) {
    const double hw = arena.width / 2.0;
    const double hh = arena.height / 2.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double cx = std::clamp(x[i], -hw, hw);
        double cy = std::clamp(y[i], -hh, hh);
        if (cx == x[i] && cy == y[i]) continue;
        double bearing = kernels::normalize_angle(
            std::atan2(y[i] - cy, x[i] - cx) - heading[i]);
        events.push_back({tick, static_cast<int>(i), CollisionEvent::kWall, bearing});
        x[i] = cx;
        y[i] = cy;
    }
}

}  // namespace swarmsim
