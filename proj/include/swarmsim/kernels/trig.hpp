#pragma once

#include <cmath>

// Scalar sin/cos and angle normalization shared by every kernel variant.
//
// The simulator's determinism contract requires the scalar and SIMD code
// paths to produce bit-identical results, so both evaluate the same
// polynomial with the same operation order instead of calling libm (whose
// rounding may differ between scalar and any vectorized approximation).
// Argument reduction is two fma steps against a double-double pi/2, which
// is exact to far below one ulp for the |x| <= a-few-revolutions range the
// simulator produces. Coefficients are the classic fdlibm minimax set for
// |r| <= pi/4.

namespace swarmsim::kernels {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kInvTwoPi = 0.15915494309189533577;
inline constexpr double kInvPiOver2 = 6.36619772367581382433e-01;
inline constexpr double kPiOver2Hi = 1.57079632679489655800e+00;
inline constexpr double kPiOver2Lo = 6.12323399573676603587e-17;

inline constexpr double kSin1 = -1.66666666666666324348e-01;
inline constexpr double kSin2 = 8.33333333332248946124e-03;
inline constexpr double kSin3 = -1.98412698298579493134e-04;
inline constexpr double kSin4 = 2.75573137070700676789e-06;
inline constexpr double kSin5 = -2.50507602534068634195e-08;
inline constexpr double kSin6 = 1.58969099521155010221e-10;

inline constexpr double kCos1 = 4.16666666666666019037e-02;
inline constexpr double kCos2 = -1.38888888888741095749e-03;
inline constexpr double kCos3 = 2.48015872894767294178e-05;
inline constexpr double kCos4 = -2.75573143513906633035e-07;
inline constexpr double kCos5 = 2.08757232129817482790e-09;
inline constexpr double kCos6 = -1.13596475577881948265e-11;

/// sin and cos of x in one pass. Valid for |x| within a few hundred
/// radians; simulator angles are normalized so |x| < 2*pi in practice.
inline void sincos_scalar(double x, double& s, double& c) {
    double kd = std::nearbyint(x * kInvPiOver2);
    double r = std::fma(-kd, kPiOver2Hi, x);
    r = std::fma(-kd, kPiOver2Lo, r);
    int quadrant = static_cast<int>(kd) & 3;

    double z = r * r;
    double sp = kSin6;
    sp = std::fma(sp, z, kSin5);
    sp = std::fma(sp, z, kSin4);
    sp = std::fma(sp, z, kSin3);
    sp = std::fma(sp, z, kSin2);
    sp = std::fma(sp, z, kSin1);
    double sr = std::fma(r * z, sp, r);

    double cp = kCos6;
    cp = std::fma(cp, z, kCos5);
    cp = std::fma(cp, z, kCos4);
    cp = std::fma(cp, z, kCos3);
    cp = std::fma(cp, z, kCos2);
    cp = std::fma(cp, z, kCos1);
    double cr = std::fma(z * z, cp, 1.0 - 0.5 * z);

    switch (quadrant) {
        case 0: s = sr;  c = cr;  break;
        case 1: s = cr;  c = -sr; break;
        case 2: s = -sr; c = -cr; break;
        default: s = -cr; c = sr; break;
    }
}

/// Wrap an angle into [-pi, pi).
inline double normalize_angle(double h) {
    double r = h - kTwoPi * std::floor((h + kPi) * kInvTwoPi);
    if (r >= kPi) r -= kTwoPi;
    if (r < -kPi) r += kTwoPi;
    return r;
}

/// Circular distance between two normalized angles, in [0, pi].
inline double angle_distance(double a, double b) {
    double d = std::fabs(a - b);
    return d > kPi ? kTwoPi - d : d;
}

}  // namespace swarmsim::kernels
