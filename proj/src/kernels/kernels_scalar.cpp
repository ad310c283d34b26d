#include "swarmsim/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmsim/kernels/trig.hpp"

// Reference implementations. The AVX2 variants mirror these operation by
// operation; any change here must be reflected there or the equivalence
// tests will fail.

namespace swarmsim::kernels {

ConeSpec make_cone_spec(double range, double half_angle, double target_radius) {
    ConeSpec spec;
    double s, c;
    sincos_scalar(half_angle, s, c);
    spec.range = range;
    spec.cos_half = c;
    spec.edge_x = range * c;
    spec.edge_y = range * s;
    spec.inv_range_sq = 1.0 / (range * range);
    spec.target_radius = target_radius;
    return spec;
}

namespace {

void sincos_n(const double* a, double* s, double* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        sincos_scalar(a[i], s[i], c[i]);
    }
}

void step_unicycle_n(const double* x, const double* y, const double* h,
                     const double* u1, const double* u2, const double* th1,
                     const double* th2, double dt, double* out_x,
                     double* out_y, double* out_h, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double s, c;
        sincos_scalar(h[i], s, c);
        double step = (u1[i] * th1[i]) * dt;
        double nx = std::fma(step, c, x[i]);
        double ny = std::fma(step, s, y[i]);
        double nh = h[i] + (u2[i] * th2[i]) * dt;
        nh = nh - kTwoPi * std::floor((nh + kPi) * kInvTwoPi);
        if (nh >= kPi) nh -= kTwoPi;
        if (nh < -kPi) nh += kTwoPi;
        out_x[i] = nx;
        out_y[i] = ny;
        out_h[i] = nh;
    }
}

// Exact disk-vs-sector test. With the target mapped into the sensor frame
// and mirrored into the upper half-plane, the distance from the disk center
// to the sector is min(distance to the upper edge segment, distance to the
// arc when the bearing is inside the opening).
void cone_hits_n(double ox, double oy, double hcos, double hsin,
                 const ConeSpec& cone, const double* tx, const double* ty,
                 std::uint8_t* hit, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double dx = tx[j] - ox;
        double dy = ty[j] - oy;
        double lx = std::fma(dx, hcos, dy * hsin);
        double ly = std::fma(dy, hcos, -(dx * hsin));
        double ay = std::fabs(ly);
        double d2 = std::fma(ay, ay, lx * lx);
        double d = std::sqrt(d2);
        bool in_angle = lx >= d * cone.cos_half;
        bool inside = (d <= cone.range) && in_angle;

        double t = std::fma(ay, cone.edge_y, lx * cone.edge_x) * cone.inv_range_sq;
        t = std::min(std::max(t, 0.0), 1.0);
        double ex = lx - t * cone.edge_x;
        double ey = ay - t * cone.edge_y;
        double de = std::sqrt(std::fma(ey, ey, ex * ex));
        double darc = std::fabs(d - cone.range);
        double dist = in_angle ? std::min(de, darc) : de;

        hit[j] = (inside || dist <= cone.target_radius) ? 1 : 0;
    }
}

void tangential_scores_n(const double* dx, const double* dy,
                         const double* hcos, const double* hsin,
                         double* score, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::sqrt(std::fma(dy[i], dy[i], dx[i] * dx[i]));
        double cross = std::fma(dx[i], hsin[i], -(dy[i] * hcos[i]));
        score[i] = cross / d;
    }
}

double containment_min_score_n(double qx, double qy, double qh,
                               const double* sx, const double* sy,
                               const double* sh, std::size_t n,
                               double inv_tol_pos, double inv_tol_head) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double dx = sx[i] - qx;
        double dy = sy[i] - qy;
        double pd = std::sqrt(std::fma(dy, dy, dx * dx));
        double hd = std::fabs(sh[i] - qh);
        hd = hd > kPi ? kTwoPi - hd : hd;
        double score = std::max(pd * inv_tol_pos, hd * inv_tol_head);
        best = std::min(best, score);
    }
    return best;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",          sincos_n,           step_unicycle_n,
        cone_hits_n,       tangential_scores_n, containment_min_score_n,
    };
    return ops;
}

}  // namespace swarmsim::kernels
