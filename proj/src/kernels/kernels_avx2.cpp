#include "swarmsim/kernels/kernels.hpp"

#if defined(SWARMSIM_BUILD_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmsim/kernels/trig.hpp"

// AVX2/FMA variants, 4 doubles per lane. Every lane performs the exact
// operation sequence of the scalar reference (same fma placement, same
// rounding points), so results are bit-identical; remainders are delegated
// to the scalar ops.

namespace swarmsim::kernels {
namespace {

const Ops& ref() { return scalar_ops(); }

struct SinCosPd {
    __m256d s;
    __m256d c;
};

inline SinCosPd sincos_pd(__m256d x) {
    const __m256d inv_pio2 = _mm256_set1_pd(kInvPiOver2);
    const __m256d pio2_hi = _mm256_set1_pd(kPiOver2Hi);
    const __m256d pio2_lo = _mm256_set1_pd(kPiOver2Lo);

    __m256d kd = _mm256_round_pd(_mm256_mul_pd(x, inv_pio2),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(kd, pio2_hi, x);
    r = _mm256_fnmadd_pd(kd, pio2_lo, r);
    __m128i quadrant = _mm256_cvtpd_epi32(kd);  // |k| < 2^31 holds for sim angles

    __m256d z = _mm256_mul_pd(r, r);

    __m256d sp = _mm256_set1_pd(kSin6);
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kSin5));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kSin4));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kSin3));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kSin2));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kSin1));
    __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(r, z), sp, r);

    __m256d cp = _mm256_set1_pd(kCos6);
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kCos5));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kCos4));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kCos3));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kCos2));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kCos1));
    __m256d one_m_hz = _mm256_sub_pd(_mm256_set1_pd(1.0),
                                     _mm256_mul_pd(_mm256_set1_pd(0.5), z));
    __m256d cr = _mm256_fmadd_pd(_mm256_mul_pd(z, z), cp, one_m_hz);

    // quadrant & 1 swaps sin/cos; bit 1 of (q + 1) / (q) drives the signs:
    //   q=0: ( sr,  cr)   q=1: ( cr, -sr)   q=2: (-sr, -cr)   q=3: (-cr,  sr)
    __m128i q_and1 = _mm_and_si128(quadrant, _mm_set1_epi32(1));
    __m256d swap_mask = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(q_and1, _mm_set1_epi32(1))));
    __m256d s_base = _mm256_blendv_pd(sr, cr, swap_mask);
    __m256d c_base = _mm256_blendv_pd(cr, sr, swap_mask);

    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    __m128i q_bit2 = _mm_and_si128(quadrant, _mm_set1_epi32(2));
    __m256d s_neg = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(q_bit2, _mm_set1_epi32(2))));
    __m128i q1 = _mm_add_epi32(quadrant, _mm_set1_epi32(1));
    __m128i q1_bit2 = _mm_and_si128(q1, _mm_set1_epi32(2));
    __m256d c_neg = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(q1_bit2, _mm_set1_epi32(2))));

    SinCosPd out;
    out.s = _mm256_xor_pd(s_base, _mm256_and_pd(s_neg, sign_bit));
    out.c = _mm256_xor_pd(c_base, _mm256_and_pd(c_neg, sign_bit));
    return out;
}

inline __m256d normalize_angle_pd(__m256d h) {
    const __m256d pi = _mm256_set1_pd(kPi);
    const __m256d two_pi = _mm256_set1_pd(kTwoPi);
    const __m256d inv_two_pi = _mm256_set1_pd(kInvTwoPi);
    __m256d f = _mm256_floor_pd(_mm256_mul_pd(_mm256_add_pd(h, pi), inv_two_pi));
    __m256d r = _mm256_fnmadd_pd(two_pi, f, h);
    __m256d ge = _mm256_cmp_pd(r, pi, _CMP_GE_OQ);
    r = _mm256_sub_pd(r, _mm256_and_pd(ge, two_pi));
    __m256d lt = _mm256_cmp_pd(r, _mm256_sub_pd(_mm256_setzero_pd(), pi), _CMP_LT_OQ);
    r = _mm256_add_pd(r, _mm256_and_pd(lt, two_pi));
    return r;
}

void sincos_n(const double* a, double* s, double* c, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        SinCosPd sc = sincos_pd(_mm256_loadu_pd(a + i));
        _mm256_storeu_pd(s + i, sc.s);
        _mm256_storeu_pd(c + i, sc.c);
    }
    if (i < n) ref().sincos(a + i, s + i, c + i, n - i);
}

void step_unicycle_n(const double* x, const double* y, const double* h,
                     const double* u1, const double* u2, const double* th1,
                     const double* th2, double dt, double* out_x,
                     double* out_y, double* out_h, std::size_t n) {
    const __m256d dtv = _mm256_set1_pd(dt);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(h + i);
        SinCosPd sc = sincos_pd(hv);
        __m256d speed = _mm256_mul_pd(_mm256_loadu_pd(u1 + i), _mm256_loadu_pd(th1 + i));
        __m256d step = _mm256_mul_pd(speed, dtv);
        __m256d nx = _mm256_fmadd_pd(step, sc.c, _mm256_loadu_pd(x + i));
        __m256d ny = _mm256_fmadd_pd(step, sc.s, _mm256_loadu_pd(y + i));
        __m256d turn = _mm256_mul_pd(_mm256_loadu_pd(u2 + i), _mm256_loadu_pd(th2 + i));
        __m256d nh = _mm256_add_pd(hv, _mm256_mul_pd(turn, dtv));
        nh = normalize_angle_pd(nh);
        _mm256_storeu_pd(out_x + i, nx);
        _mm256_storeu_pd(out_y + i, ny);
        _mm256_storeu_pd(out_h + i, nh);
    }
    if (i < n) {
        ref().step_unicycle(x + i, y + i, h + i, u1 + i, u2 + i, th1 + i,
                            th2 + i, dt, out_x + i, out_y + i, out_h + i, n - i);
    }
}

void cone_hits_n(double ox, double oy, double hcos, double hsin,
                 const ConeSpec& cone, const double* tx, const double* ty,
                 std::uint8_t* hit, std::size_t n) {
    const __m256d oxv = _mm256_set1_pd(ox);
    const __m256d oyv = _mm256_set1_pd(oy);
    const __m256d hcv = _mm256_set1_pd(hcos);
    const __m256d hsv = _mm256_set1_pd(hsin);
    const __m256d range = _mm256_set1_pd(cone.range);
    const __m256d cos_half = _mm256_set1_pd(cone.cos_half);
    const __m256d edge_x = _mm256_set1_pd(cone.edge_x);
    const __m256d edge_y = _mm256_set1_pd(cone.edge_y);
    const __m256d inv_r2 = _mm256_set1_pd(cone.inv_range_sq);
    const __m256d radius = _mm256_set1_pd(cone.target_radius);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(tx + i), oxv);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ty + i), oyv);
        __m256d lx = _mm256_fmadd_pd(dx, hcv, _mm256_mul_pd(dy, hsv));
        __m256d ly = _mm256_fmadd_pd(dy, hcv,
                       _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(dx, hsv)));
        __m256d ay = _mm256_and_pd(ly, abs_mask);
        __m256d d2 = _mm256_fmadd_pd(ay, ay, _mm256_mul_pd(lx, lx));
        __m256d d = _mm256_sqrt_pd(d2);
        __m256d in_angle = _mm256_cmp_pd(lx, _mm256_mul_pd(d, cos_half), _CMP_GE_OQ);
        __m256d inside = _mm256_and_pd(_mm256_cmp_pd(d, range, _CMP_LE_OQ), in_angle);

        __m256d t = _mm256_mul_pd(
            _mm256_fmadd_pd(ay, edge_y, _mm256_mul_pd(lx, edge_x)), inv_r2);
        t = _mm256_min_pd(_mm256_max_pd(t, _mm256_setzero_pd()), _mm256_set1_pd(1.0));
        __m256d ex = _mm256_sub_pd(lx, _mm256_mul_pd(t, edge_x));
        __m256d ey = _mm256_sub_pd(ay, _mm256_mul_pd(t, edge_y));
        __m256d de = _mm256_sqrt_pd(_mm256_fmadd_pd(ey, ey, _mm256_mul_pd(ex, ex)));
        __m256d darc = _mm256_and_pd(_mm256_sub_pd(d, range), abs_mask);
        __m256d dist = _mm256_blendv_pd(de, _mm256_min_pd(de, darc), in_angle);

        __m256d near = _mm256_cmp_pd(dist, radius, _CMP_LE_OQ);
        __m256d hitv = _mm256_or_pd(inside, near);
        int mask = _mm256_movemask_pd(hitv);
        hit[i + 0] = (mask >> 0) & 1;
        hit[i + 1] = (mask >> 1) & 1;
        hit[i + 2] = (mask >> 2) & 1;
        hit[i + 3] = (mask >> 3) & 1;
    }
    if (i < n) ref().cone_hits(ox, oy, hcos, hsin, cone, tx + i, ty + i, hit + i, n - i);
}

void tangential_scores_n(const double* dx, const double* dy,
                         const double* hcos, const double* hsin,
                         double* score, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dxv = _mm256_loadu_pd(dx + i);
        __m256d dyv = _mm256_loadu_pd(dy + i);
        __m256d d = _mm256_sqrt_pd(_mm256_fmadd_pd(dyv, dyv, _mm256_mul_pd(dxv, dxv)));
        __m256d cross = _mm256_fmadd_pd(
            dxv, _mm256_loadu_pd(hsin + i),
            _mm256_sub_pd(_mm256_setzero_pd(),
                          _mm256_mul_pd(dyv, _mm256_loadu_pd(hcos + i))));
        _mm256_storeu_pd(score + i, _mm256_div_pd(cross, d));
    }
    if (i < n) ref().tangential_scores(dx + i, dy + i, hcos + i, hsin + i, score + i, n - i);
}

double containment_min_score_n(double qx, double qy, double qh,
                               const double* sx, const double* sy,
                               const double* sh, std::size_t n,
                               double inv_tol_pos, double inv_tol_head) {
    const __m256d qxv = _mm256_set1_pd(qx);
    const __m256d qyv = _mm256_set1_pd(qy);
    const __m256d qhv = _mm256_set1_pd(qh);
    const __m256d itp = _mm256_set1_pd(inv_tol_pos);
    const __m256d ith = _mm256_set1_pd(inv_tol_head);
    const __m256d pi = _mm256_set1_pd(kPi);
    const __m256d two_pi = _mm256_set1_pd(kTwoPi);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(sx + i), qxv);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(sy + i), qyv);
        __m256d pd = _mm256_sqrt_pd(_mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx)));
        __m256d hd = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(sh + i), qhv), abs_mask);
        __m256d wrap = _mm256_cmp_pd(hd, pi, _CMP_GT_OQ);
        hd = _mm256_blendv_pd(hd, _mm256_sub_pd(two_pi, hd), wrap);
        __m256d score = _mm256_max_pd(_mm256_mul_pd(pd, itp), _mm256_mul_pd(hd, ith));
        best = _mm256_min_pd(best, score);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double out = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    if (i < n) {
        out = std::min(out, ref().containment_min_score(qx, qy, qh, sx + i, sy + i,
                                                        sh + i, n - i, inv_tol_pos,
                                                        inv_tol_head));
    }
    return out;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2",            sincos_n,            step_unicycle_n,
        cone_hits_n,       tangential_scores_n, containment_min_score_n,
    };
    return ops;
}

}  // namespace swarmsim::kernels

#endif  // SWARMSIM_BUILD_AVX2
