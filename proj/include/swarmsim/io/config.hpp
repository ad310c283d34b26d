#pragma once

#include <string>

#include <json.hpp>

#include "swarmsim/calib/calibration.hpp"
#include "swarmsim/core/types.hpp"
#include "swarmsim/sweep/sweep.hpp"

namespace swarmsim {

/// Overlay a partial config onto cfg. Unknown keys are rejected so typos
/// fail loudly. Calibration bundles use the same schema, which is what lets
/// them be consumed directly as config fragments.
void apply_config_fragment(TrialConfig& cfg, const nlohmann::json& fragment);

/// Fully resolved config, suitable for hashing and replay.
nlohmann::ordered_json config_to_json(const TrialConfig& cfg);

nlohmann::json load_json_file(const std::string& path);

/// Defaults, then each fragment file in order (later wins).
TrialConfig load_config(const std::vector<std::string>& fragment_paths);

SweepSpec load_sweep_spec(const std::string& path);

nlohmann::ordered_json bundle_to_json(const CalibrationBundle& bundle);

}  // namespace swarmsim
