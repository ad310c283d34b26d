#include "swarmsim/metrics/metrics.hpp"

#include <algorithm>

#include "swarmsim/kernels/kernels.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Dispersion: return "dispersion";
        case Phase::StableMilling: return "stable_milling";
        case Phase::SemiStableMilling: return "semi_stable_milling";
        case Phase::CollidingUnstable: return "colliding_unstable";
    }
    return "dispersion";
}

char phase_letter(Phase p) {
    switch (p) {
        case Phase::Dispersion: return 'D';
        case Phase::StableMilling: return 'M';
        case Phase::SemiStableMilling: return 'S';
        case Phase::CollidingUnstable: return 'C';
    }
    return 'D';
}

Phase phase_from_name(const std::string& name) {
    if (name == "dispersion") return Phase::Dispersion;
    if (name == "stable_milling") return Phase::StableMilling;
    if (name == "semi_stable_milling") return Phase::SemiStableMilling;
    if (name == "colliding_unstable") return Phase::CollidingUnstable;
    throw Error("unknown phase '" + name + "'");
}

Phase phase_from_letter(char c) {
    switch (c) {
        case 'D': return Phase::Dispersion;
        case 'M': return Phase::StableMilling;
        case 'S': return Phase::SemiStableMilling;
        case 'C': return Phase::CollidingUnstable;
    }
    throw Error(std::string("unknown phase letter '") + c + "'");
}

Phase classify(const TrialMetrics& m, const PhaseThresholds& t) {
    if (m.deadlock_fraction >= t.deadlock) return Phase::CollidingUnstable;
    if (m.wall_fraction >= t.wall && m.milling_order < t.mill) return Phase::Dispersion;
    if (m.milling_order >= t.mill && m.collision_rate <= t.collision_low)
        return Phase::StableMilling;
    if (m.milling_order >= t.mill_semi && m.collision_rate > t.collision_low)
        return Phase::SemiStableMilling;
    return Phase::Dispersion;
}

void MillingAccumulator::add_tick(const double* x, const double* y,
                                  const double* heading, std::size_t n) {
    if (n < 2) throw Error("milling order needs at least 2 agents");
    const auto& ops = kernels::active();
    dx_.resize(n);
    dy_.resize(n);
    hc_.resize(n);
    hs_.resize(n);
    score_.resize(n);

    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx += x[i];
        cy += y[i];
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx_[i] = x[i] - cx;
        dy_[i] = y[i] - cy;
    }
    ops.sincos(heading, hs_.data(), hc_.data(), n);
    ops.tangential_scores(dx_.data(), dy_.data(), hc_.data(), hs_.data(),
                          score_.data(), n);

    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (score_[i] != score_[i]) continue;  // centroid-coincident, skipped
        if (score_[i] > 0.0) ++pos;
        else if (score_[i] < 0.0) ++neg;
    }
    double sense = pos >= neg ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (score_[i] != score_[i]) continue;
        sum_ += std::max(0.0, sense * score_[i]);
        ++contributions_;
    }
    ++ticks_;
}

double MillingAccumulator::value() const {
    if (ticks_ < 2) throw Error("milling order needs a window of at least 2 ticks");
    if (contributions_ == 0) throw Error("milling order undefined: every agent sat on the centroid");
    return sum_ / static_cast<double>(contributions_);
}

double milling_order(const double* x, const double* y, const double* heading,
                     std::size_t n_ticks, std::size_t n_agents) {
    MillingAccumulator acc;
    for (std::size_t t = 0; t < n_ticks; ++t) {
        std::size_t off = t * n_agents;
        acc.add_tick(x + off, y + off, heading + off, n_agents);
    }
    return acc.value();
}

}  // namespace swarmsim
