#include "swarmsim/calib/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

#include "swarmsim/io/csv.hpp"
#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/sensing/geometry.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {

double compute_theta(const SpeedMeasurement& m) {
    if (m.commanded == 0.0) throw Error("commanded value is zero; theta ratio undefined");
    if (m.samples.empty()) throw Error("measurement has no samples");
    double sum = 0.0;
    for (double s : m.samples) sum += s;
    return sum / static_cast<double>(m.samples.size()) / m.commanded;
}

PopulationDistribution fit_population(const std::vector<double>& thetas) {
    if (thetas.size() < 2)
        throw Error("population fit needs at least 2 theta values");
    double sum = 0.0;
    for (double t : thetas) sum += t;
    double mu = sum / static_cast<double>(thetas.size());
    double ss = 0.0;
    for (double t : thetas) ss += (t - mu) * (t - mu);
    double sigma = std::sqrt(ss / static_cast<double>(thetas.size() - 1));
    return {mu, sigma};
}

PopulationDistribution inflate(const PopulationDistribution& d, double factor) {
    if (!(factor >= 1.0))
        throw Error("inflation factor must be >= 1; shrinking the spread would make simulated agents better than the measured robots");
    return {d.mu, factor * d.sigma};
}

std::vector<Vec2> fit_detection_polygon(const std::vector<DetectionTrial>& trials,
                                        double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0)
        throw Error("detection threshold must be in (0, 1]");

    // group by bearing; quantized so identical fan angles land together
    std::map<long long, std::vector<const DetectionTrial*>> rays;
    for (const DetectionTrial& t : trials) {
        if (t.attempts < 1) throw Error("detection trial with no attempts");
        if (t.hits < 0 || t.hits > t.attempts)
            throw Error("detection trial hits outside [0, attempts]");
        if (t.x == 0.0 && t.y == 0.0) continue;  // no direction to learn from
        double bearing = std::atan2(t.y, t.x);
        rays[static_cast<long long>(std::llround(bearing * 1e7))].push_back(&t);
    }

    struct Ray {
        double bearing;
        double range;
    };
    std::vector<Ray> kept;
    for (auto& [key, list] : rays) {
        std::sort(list.begin(), list.end(), [](const DetectionTrial* a, const DetectionTrial* b) {
            return std::hypot(a->x, a->y) < std::hypot(b->x, b->y);
        });
        double range = 0.0;
        for (const DetectionTrial* t : list) {
            if (static_cast<double>(t->hits) >= threshold * static_cast<double>(t->attempts))
                range = std::hypot(t->x, t->y);
            else
                break;  // a failing cell truncates the ray
        }
        if (range > 0.0)
            kept.push_back({static_cast<double>(key) * 1e-7, range});
    }
    if (kept.empty())
        throw CapabilityError(
            "no detection trial meets the threshold; the sensor is not viable and the platform cannot support this pipeline");

    std::sort(kept.begin(), kept.end(),
              [](const Ray& a, const Ray& b) { return a.bearing < b.bearing; });

    // widest angular hole decides where (and whether) to close through origin
    std::size_t gap_after = kept.size() - 1;
    double max_gap = kept.front().bearing + kernels::kTwoPi - kept.back().bearing;
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        double gap = kept[i + 1].bearing - kept[i].bearing;
        if (gap > max_gap) {
            max_gap = gap;
            gap_after = i;
        }
    }

    std::vector<Vec2> poly;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const Ray& r = kept[(gap_after + 1 + k) % kept.size()];
        poly.push_back({r.range * std::cos(r.bearing), r.range * std::sin(r.bearing)});
    }
    if (max_gap > kernels::kPi / 2.0) poly.push_back({0.0, 0.0});

    if (poly.size() < 3)
        throw Error("detection data too sparse to form a polygon; measure more bearings");
    if (!polygon_is_simple(poly))
        throw Error("detection data produced a self-intersecting polygon");
    return poly;
}

MeasurementTable load_measurements(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    std::map<std::tuple<std::string, std::string, double>, SpeedMeasurement> groups;
    std::vector<std::tuple<std::string, std::string, double>> order;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string& line = lines[ln];
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f = csv_split(line);
        std::string context = path + ":" + std::to_string(ln + 1);
        if (f.size() != 4)
            throw ParseError(context + ": expected 4 columns robot,kind,commanded,sample");
        if (ln == 0 && (f[1] != "speed" && f[1] != "turn")) continue;  // header row
        if (f[1] != "speed" && f[1] != "turn")
            throw ParseError(context + ": kind must be 'speed' or 'turn', got '" + f[1] + "'");
        double commanded = parse_double(f[2], context);
        double sample = parse_double(f[3], context);
        auto key = std::make_tuple(f[1], f[0], commanded);
        auto it = groups.find(key);
        if (it == groups.end()) {
            it = groups.emplace(key, SpeedMeasurement{f[0], commanded, {}}).first;
            order.push_back(key);
        }
        it->second.samples.push_back(sample);
    }

    MeasurementTable table;
    for (const auto& key : order) {
        const SpeedMeasurement& m = groups.at(key);
        if (m.samples.size() < 2)
            throw Error(path + ": robot '" + m.robot + "' commanded " +
                        format_double(m.commanded) +
                        " has fewer than 2 samples; a spread needs at least 2");
        (std::get<0>(key) == "speed" ? table.speed : table.turn).push_back(m);
    }
    return table;
}

std::vector<DetectionTrial> load_detection_trials(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    std::vector<DetectionTrial> trials;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string& line = lines[ln];
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f = csv_split(line);
        std::string context = path + ":" + std::to_string(ln + 1);
        if (f.size() != 4)
            throw ParseError(context + ": expected 4 columns x,y,hits,attempts");
        if (ln == 0) {
            bool header = false;
            for (char c : f[0])
                if (std::isalpha(static_cast<unsigned char>(c))) header = true;
            if (header) continue;
        }
        trials.push_back({parse_double(f[0], context), parse_double(f[1], context),
                          parse_long(f[2], context), parse_long(f[3], context)});
    }
    return trials;
}

ThetaDistribution fit_brackets(const std::vector<SpeedMeasurement>& measurements) {
    if (measurements.empty()) throw Error("no measurements to fit");
    std::map<double, std::vector<double>> by_commanded;
    for (const SpeedMeasurement& m : measurements)
        by_commanded[std::fabs(m.commanded)].push_back(compute_theta(m));

    ThetaDistribution dist;
    dist.brackets.clear();
    for (auto& [commanded, thetas] : by_commanded) {
        if (thetas.size() < 2)
            throw Error("commanded " + format_double(commanded) +
                        " was measured on fewer than 2 robots; cannot fit a population");
        PopulationDistribution p = fit_population(thetas);
        dist.brackets.push_back({commanded, p.mu, p.sigma});
    }
    return dist;
}

}  // namespace swarmsim
