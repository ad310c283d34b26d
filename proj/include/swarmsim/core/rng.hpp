#pragma once

#include <cstdint>

// Deterministic random streams. Every consumer of randomness gets its own
// stream derived from the root seed plus a purpose tag (and optional
// indices), so adding a draw in one subsystem never shifts the numbers seen
// by another. Derivation hashes the parent's identity without consuming
// parent state.

namespace swarmsim {

enum class StreamTag : std::uint64_t {
    Placement = 1,
    ThetaSpeed = 2,
    ThetaTurn = 3,
    Sensor = 4,
    Jitter = 5,
    RolloutTheta = 6,
    RolloutControl = 7,
    CellTrial = 8,
};

class Rng {
public:
    Rng() : Rng(0) {}
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double();

    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double normal();
    double normal(double mu, double sigma);

    /// Normal(mu, sigma) rejection-sampled into (0, 2*mu]. Requires mu > 0.
    double truncated_normal(double mu, double sigma);

    /// Child stream keyed off this stream's identity; parent state is
    /// untouched, and the same key always yields the same child.
    Rng derive(std::uint64_t key) const;
    Rng derive(StreamTag tag) const { return derive(static_cast<std::uint64_t>(tag)); }
    Rng derive(StreamTag tag, std::uint64_t a) const { return derive(tag).derive(a); }
    Rng derive(StreamTag tag, std::uint64_t a, std::uint64_t b) const {
        return derive(tag).derive(a).derive(b);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace swarmsim
