#include "swarmsim/core/rng.hpp"

#include <cmath>

#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double Rng::normal() {
    // u strictly positive so log is finite
    double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double v = next_double();
    double r = std::sqrt(-2.0 * std::log(u));
    double s, c;
    kernels::sincos_scalar(kernels::kTwoPi * v, s, c);
    (void)s;
    return r * c;
}

double Rng::normal(double mu, double sigma) { return mu + sigma * normal(); }

double Rng::truncated_normal(double mu, double sigma) {
    if (!(mu > 0.0)) throw Error("truncated_normal requires a positive mean");
    if (sigma <= 0.0) return mu;
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        double x = normal(mu, sigma);
        if (x > 0.0 && x <= 2.0 * mu) return x;
    }
    throw SimulationError("truncated_normal failed to accept a sample");
}

Rng Rng::derive(std::uint64_t key) const {
    return Rng(mix64(seed_ + kGolden * (key + 0x632be59bd9b4e019ULL)));
}

}  // namespace swarmsim
