#pragma once

#include <string>
#include <vector>

#include "swarmsim/io/jsonl.hpp"
#include "swarmsim/metrics/metrics.hpp"
#include "swarmsim/sweep/sweep.hpp"

namespace swarmsim {

/// A real-world outcome pinned onto the diagram at its axis coordinates.
struct OverlayPoint {
    std::vector<double> values;  // one per axis; snapped to the nearest cell
    Phase phase = Phase::Dispersion;
};

/// Reads a JSON array of {"values": [..], "phase": "<name>"} entries.
std::vector<OverlayPoint> load_overlay(const std::string& path);

/// Heat map of the modal phase per cell; fill opacity is the fraction of
/// seeds that agreed with the modal phase, so solid color means unanimous.
/// Overlay points are drawn as lettered markers. Two axes only.
std::string diagram_svg(const PhaseDiagram& diagram,
                        const std::vector<OverlayPoint>& overlay = {});

/// Strip of evenly spaced frames from a logged trajectory.
std::string trajectory_svg(const TrajectoryFile& traj, int frames = 8);

}  // namespace swarmsim
