#pragma once

#include <string>
#include <vector>

#include "swarmsim/core/types.hpp"

namespace swarmsim {

/// Repeated measurements of one robot driven at one commanded magnitude
/// (speed in m/s or turn rate in rad/s; samples share the unit).
struct SpeedMeasurement {
    std::string robot;
    double commanded = 0.0;
    std::vector<double> samples;
};

struct PopulationDistribution {
    double mu = 1.0;
    double sigma = 0.0;
};

/// Detection attempts of a target parked at (x, y) in the sensor frame.
struct DetectionTrial {
    double x = 0.0;
    double y = 0.0;
    long hits = 0;
    long attempts = 0;
};

/// theta = mean(samples) / commanded.
double compute_theta(const SpeedMeasurement& m);

/// Sample mean and n-1 standard deviation over per-robot theta values.
PopulationDistribution fit_population(const std::vector<double>& thetas);

/// Widen the measured spread: sigma' = factor * sigma, mean unchanged.
/// factor < 1 is refused (would make simulation better than reality).
PopulationDistribution inflate(const PopulationDistribution& d, double factor);

/// Boundary of the region whose trials pass hits/attempts >= threshold.
/// Trials are grouped by bearing; each bearing contributes its last passing
/// range before the first failing one (a failing inner cell truncates the
/// ray). Vertices are joined in bearing order and closed through the origin
/// when the data does not wrap around. Throws a CapabilityError when
/// nothing passes (the sensor is not viable).
std::vector<Vec2> fit_detection_polygon(const std::vector<DetectionTrial>& trials,
                                        double threshold);

/// Measurement rows from a CSV with columns robot,kind,commanded,sample
/// (kind is "speed" or "turn"; one sample per row; optional header).
struct MeasurementTable {
    std::vector<SpeedMeasurement> speed;
    std::vector<SpeedMeasurement> turn;
};
MeasurementTable load_measurements(const std::string& path);

/// Detection rows from a CSV with columns x,y,hits,attempts.
std::vector<DetectionTrial> load_detection_trials(const std::string& path);

/// Group measurements by commanded magnitude and fit a population per
/// group, producing the speed-dependent brackets the simulator interpolates.
ThetaDistribution fit_brackets(const std::vector<SpeedMeasurement>& measurements);

/// Everything cmd_calibrate hands to the simulator, with raw (uninflated)
/// sigmas; inflation_factor is applied at sampling time.
struct CalibrationBundle {
    ThetaDistribution theta_speed;
    ThetaDistribution theta_turn;
    double inflation_factor = 2.0;
    bool has_polygon = false;
    std::vector<Vec2> polygon;
};

}  // namespace swarmsim
