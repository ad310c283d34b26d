#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Batch kernels for the simulator's data-parallel inner loops: unicycle
// integration, cone-sensor hit tests, milling-order scores, and reachable-
// cloud containment scans. Each entry point has a scalar reference
// implementation and may have SIMD variants; all variants are required to
// be bit-identical, which the kernel equivalence tests enforce. The active
// variant is picked at runtime (CPU detection, overridable via
// SWARMSIM_KERNEL or --kernel).

namespace swarmsim::kernels {

/// Precomputed cone-sector geometry shared by all variants.
/// The target is a disk of radius `target_radius`; a hit means the disk
/// intersects the closed sector of radius `range` and half-opening
/// `half_angle` around the observer's heading.
struct ConeSpec {
    double range = 0.0;
    double cos_half = 1.0;   // cos(half_angle)
    double edge_x = 0.0;     // range * cos(half_angle)
    double edge_y = 0.0;     // range * sin(half_angle)
    double inv_range_sq = 0.0;
    double target_radius = 0.0;
};

ConeSpec make_cone_spec(double range, double half_angle, double target_radius);

struct Ops {
    const char* name;

    // s[i], c[i] = sin/cos(a[i])
    void (*sincos)(const double* a, double* s, double* c, std::size_t n);

    // Euler step of the idiosyncratic unicycle; out_h normalized to
    // [-pi, pi). out arrays may alias the inputs elementwise.
    void (*step_unicycle)(const double* x, const double* y, const double* h,
                          const double* u1, const double* u2,
                          const double* th1, const double* th2, double dt,
                          double* out_x, double* out_y, double* out_h,
                          std::size_t n);

    // hit[j] = 1 iff target disk j intersects the observer's cone sector.
    void (*cone_hits)(double ox, double oy, double hcos, double hsin,
                      const ConeSpec& cone, const double* tx, const double* ty,
                      std::uint8_t* hit, std::size_t n);

    // score[i] = cross(r_i, heading_i) / |r_i| where r_i = (dx[i], dy[i]) is
    // the centroid-to-agent offset; NaN when |r_i| == 0.
    void (*tangential_scores)(const double* dx, const double* dy,
                              const double* hcos, const double* hsin,
                              double* score, std::size_t n);

    // min over samples of max(pos_dist * inv_tol_pos, head_dist * inv_tol_head)
    // for query pose (qx, qy, qh) against normalized sample headings.
    double (*containment_min_score)(double qx, double qy, double qh,
                                    const double* sx, const double* sy,
                                    const double* sh, std::size_t n,
                                    double inv_tol_pos, double inv_tol_head);
};

const Ops& scalar_ops();
#if defined(SWARMSIM_BUILD_AVX2)
const Ops& avx2_ops();
#endif

/// Names of variants usable on this machine (CPU-checked), best first.
std::vector<std::string> available_variants();

/// Currently selected variant. Defaults to the best available, or to the
/// SWARMSIM_KERNEL env var when set.
const Ops& active();

/// Select a variant by name ("auto", "scalar", "avx2").
/// Throws swarmsim::Error for unknown or unsupported names.
void select(const std::string& name);

}  // namespace swarmsim::kernels
