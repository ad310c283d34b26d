#include "swarmsim/sensing/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmsim/kernels/kernels.hpp"
#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {
namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
    if (cross(a, b, p) != 0.0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    double ex = b.x - a.x;
    double ey = b.y - a.y;
    double len_sq = ex * ex + ey * ey;
    double t = 0.0;
    if (len_sq > 0.0) {
        t = ((p.x - a.x) * ex + (p.y - a.y) * ey) / len_sq;
        t = std::clamp(t, 0.0, 1.0);
    }
    double dx = p.x - (a.x + t * ex);
    double dy = p.y - (a.y + t * ey);
    return std::sqrt(dx * dx + dy * dy);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double d1 = cross(c, d, a);
    double d2 = cross(c, d, b);
    double d3 = cross(a, b, c);
    double d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(a, c, d)) return true;
    if (d2 == 0 && on_segment(b, c, d)) return true;
    if (d3 == 0 && on_segment(c, a, b)) return true;
    if (d4 == 0 && on_segment(d, a, b)) return true;
    return false;
}

}  // namespace

double polygon_signed_area(const std::vector<Vec2>& poly) {
    double twice = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        twice += poly[j].x * poly[i].y - poly[i].x * poly[j].y;
    return twice / 2.0;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        if (on_segment(p, poly[j], poly[i])) return true;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
            double t = (p.y - poly[i].y) / (poly[j].y - poly[i].y);
            double xint = poly[i].x + t * (poly[j].x - poly[i].x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const std::vector<Vec2>& poly, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        best = std::min(best, point_segment_distance(p, poly[j], poly[i]));
    return best;
}

bool polygon_is_simple(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i];
        Vec2 b = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip edges sharing a vertex with edge i
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool polygon_hits_disk(const std::vector<Vec2>& poly, Vec2 p, double radius) {
    if (point_in_polygon(poly, p)) return true;
    return polygon_boundary_distance(poly, p) <= radius;
}

std::vector<Vec2> shrink_polygon(const std::vector<Vec2>& measured, double margin) {
    if (measured.size() < 3) throw Error("polygon needs at least 3 vertices");
    if (!(margin >= 0.0)) throw Error("shrink margin must be >= 0");
    if (!polygon_is_simple(measured)) throw Error("measured polygon is self-intersecting");

    std::vector<Vec2> poly = measured;
    double area = polygon_signed_area(poly);
    if (area == 0.0) throw Error("measured polygon has zero area");
    if (area < 0.0) std::reverse(poly.begin(), poly.end());
    if (margin == 0.0) return poly;

    auto containment_slack = [&](Vec2 p) {
        // how far p sits inside the measured outline; negative when outside
        double d = polygon_boundary_distance(measured, p);
        return point_in_polygon(measured, p) ? d : -d;
    };

    const double tol = margin * (1.0 - 1e-9) - 1e-12;
    while (poly.size() >= 3) {
        const std::size_t n = poly.size();
        std::vector<Vec2> candidate(n);
        for (std::size_t k = 0; k < n; ++k) {
            Vec2 prev = poly[(k + n - 1) % n];
            Vec2 cur = poly[k];
            Vec2 next = poly[(k + 1) % n];
            // inward (left) normals of the two incident edges
            double e1x = cur.x - prev.x, e1y = cur.y - prev.y;
            double e2x = next.x - cur.x, e2y = next.y - cur.y;
            double l1 = std::hypot(e1x, e1y), l2 = std::hypot(e2x, e2y);
            if (l1 == 0.0 || l2 == 0.0) throw Error("degenerate polygon edge");
            double n1x = -e1y / l1, n1y = e1x / l1;
            double n2x = -e2y / l2, n2y = e2x / l2;
            double denom = e1x * e2y - e1y * e2x;
            if (std::fabs(denom) < 1e-12 * l1 * l2) {
                candidate[k] = {cur.x + margin * n1x, cur.y + margin * n1y};
                continue;
            }
            // intersect the two offset edge lines
            // line 1: (prev + m*n1) + s*e1 ; line 2: (cur + m*n2) + t*e2
            double px = prev.x + margin * n1x, py = prev.y + margin * n1y;
            double qx = cur.x + margin * n2x, qy = cur.y + margin * n2y;
            double s = ((qx - px) * e2y - (qy - py) * e2x) / denom;
            candidate[k] = {px + s * e1x, py + s * e1y};
        }

        // find the vertex that violates containment the worst
        std::size_t worst = n;
        double worst_slack = tol;
        for (std::size_t k = 0; k < n; ++k) {
            double slack = containment_slack(candidate[k]);
            if (slack < worst_slack) {
                worst_slack = slack;
                worst = k;
            }
        }
        if (worst == n) {
            // vertices are deep enough; make sure edges stay inside too
            bool crossing = false;
            std::size_t drop = 0;
            double drop_slack = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n && !crossing; ++k) {
                Vec2 a = candidate[k];
                Vec2 b = candidate[(k + 1) % n];
                for (std::size_t e = 0, f = measured.size() - 1; e < measured.size(); f = e++) {
                    if (segments_intersect(a, b, measured[f], measured[e])) {
                        crossing = true;
                        double sa = containment_slack(a);
                        double sb = containment_slack(b);
                        drop = sa <= sb ? k : (k + 1) % n;
                        drop_slack = std::min(sa, sb);
                        break;
                    }
                }
            }
            (void)drop_slack;
            if (!crossing && polygon_is_simple(candidate)) return candidate;
            if (!crossing) {
                // self-intersecting miter; drop the shallowest vertex
                drop = 0;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < n; ++k) {
                    double slack = containment_slack(candidate[k]);
                    if (slack < best) {
                        best = slack;
                        drop = k;
                    }
                }
            }
            poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(drop));
            continue;
        }
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    throw Error("shrink margin collapses the polygon");
}

double SensorModel::max_range() const {
    if (kind == Kind::Cone) return cone.range;
    double best = 0.0;
    for (const Vec2& v : polygon.vertices) best = std::max(best, std::hypot(v.x, v.y));
    return best;
}

bool in_fov(const AgentState& observer, const AgentState& target,
            const SensorModel& sensor, double target_radius) {
    double hs, hc;
    kernels::sincos_scalar(observer.heading, hs, hc);
    if (sensor.kind == SensorModel::Kind::Cone) {
        kernels::ConeSpec spec = kernels::make_cone_spec(
            sensor.cone.range, sensor.cone.half_angle, target_radius);
        std::uint8_t hit = 0;
        kernels::scalar_ops().cone_hits(observer.x, observer.y, hc, hs, spec,
                                        &target.x, &target.y, &hit, 1);
        return hit != 0;
    }
    double dx = target.x - observer.x;
    double dy = target.y - observer.y;
    Vec2 local{std::fma(dx, hc, dy * hs), std::fma(dy, hc, -(dx * hs))};
    return polygon_hits_disk(sensor.polygon.vertices, local, target_radius);
}

}  // namespace swarmsim
