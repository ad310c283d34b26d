#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "swarmsim/core/world.hpp"
#include "swarmsim/metrics/metrics.hpp"

namespace swarmsim {

/// One sweepable parameter and the grid values it takes. Sweepable names:
/// desired_speed (alias v), desired_turn_rate (alias omega), n_agents
/// (alias n), inflation_factor, dt.
struct AxisSpec {
    std::string name;
    std::vector<double> values;

    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

struct SweepSpec {
    TrialConfig base;
    std::vector<AxisSpec> axes;
    int seeds_per_cell = 1;
};

struct CellResult {
    std::array<int, kPhaseCount> counts{};  // indexed by Phase
    int errors = 0;
    std::string labels;  // one letter per seed: D/M/S/C, E for a failed trial
    Phase modal = Phase::Dispersion;
    double b_s = 0.0;  // fraction of seeds labeled StableMilling

    friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct PhaseDiagram {
    std::vector<AxisSpec> axes;
    int seeds_per_cell = 0;
    std::vector<CellResult> cells;  // row-major over the axes, last axis fastest

    std::size_t cell_count() const;
    std::vector<std::size_t> cell_index(std::size_t flat) const;
    std::vector<double> cell_values(std::size_t flat) const;

    friend bool operator==(const PhaseDiagram&, const PhaseDiagram&) = default;
};

/// Overwrite one sweepable parameter on a config.
void apply_axis_value(TrialConfig& cfg, const std::string& axis_name, double value);

using TrialSinkFactory =
    std::function<std::unique_ptr<TrialSink>(std::size_t cell, int seed)>;

/// Every (cell, seed) trial run and classified. Trial seeds are derived
/// from the base seed by (cell, seed) position, so results do not depend on
/// execution order or worker count. A trial that throws becomes an E label;
/// the sweep keeps going.
PhaseDiagram run_sweep(const SweepSpec& spec, int workers,
                       const TrialSinkFactory& sink_factory = nullptr);

std::string diagram_to_csv(const PhaseDiagram& diagram);
PhaseDiagram diagram_from_csv(const std::string& text);

struct Recommendation {
    std::size_t flat_index = 0;
    std::vector<double> values;
    double b_target = 0.0;   // fraction of seeds with the target label
    int interior_steps = 0;  // Chebyshev grid distance to the nearest cell of another modal phase
};

/// Cell with the best chance of the target phase: maximize the target
/// fraction, break ties toward the deepest interior cell, then the lowest
/// grid index. Throws a CapabilityError naming the best fallback phase when
/// no cell ever produced the target.
Recommendation recommend(const PhaseDiagram& diagram, Phase target);

}  // namespace swarmsim
