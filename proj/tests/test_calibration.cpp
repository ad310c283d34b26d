#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swarmsim/calib/calibration.hpp"
#include "swarmsim/sensing/geometry.hpp"
#include "swarmsim/util/error.hpp"

using namespace swarmsim;

namespace {

const double kDeg = 3.14159265358979323846 / 180.0;

std::string write_temp(const std::string& name, const std::string& content) {
    std::filesystem::path p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    out.close();
    return p.string();
}

DetectionTrial fan_trial(double bearing_deg, double range, bool pass) {
    return {range * std::cos(bearing_deg * kDeg), range * std::sin(bearing_deg * kDeg),
            pass ? 10L : 3L, 10L};
}

}  // namespace

TEST_SUITE("calibration") {

TEST_CASE("theta is the mean measured over commanded ratio") {
    auto th = [](std::vector<double> s, double c) {
        return compute_theta({"r", c, std::move(s)});
    };
    CHECK(th({0.02158, 0.02215, 0.02272}, 0.025) ==
          doctest::Approx(0.8859999999999999).epsilon(1e-13));
    CHECK(th({0.02144, 0.02148, 0.02152}, 0.025) ==
          doctest::Approx(0.8592).epsilon(1e-13));
    CHECK(th({0.02186, 0.02232, 0.02278}, 0.025) ==
          doctest::Approx(0.8927999999999998).epsilon(1e-13));
    CHECK(th({0.04809, 0.04847, 0.04885}, 0.05) ==
          doctest::Approx(0.9694).epsilon(1e-13));
    CHECK(th({0.04854, 0.04866, 0.04878}, 0.05) ==
          doctest::Approx(0.9732).epsilon(1e-13));
    CHECK(th({0.04834, 0.04854, 0.04874}, 0.05) ==
          doctest::Approx(0.9708).epsilon(1e-13));
    // two-decimal view used in reports
    CHECK(std::llround(th({0.02158, 0.02215, 0.02272}, 0.025) * 100) == 89);
    CHECK(std::llround(th({0.02144, 0.02148, 0.02152}, 0.025) * 100) == 86);
    CHECK(std::llround(th({0.02186, 0.02232, 0.02278}, 0.025) * 100) == 89);
    CHECK(std::llround(th({0.04809, 0.04847, 0.04885}, 0.05) * 100) == 97);
    // a reversed command flips the samples too, theta stays positive
    CHECK(th({-0.6870, -0.6885, -0.6900}, -0.75) == doctest::Approx(0.918).epsilon(1e-13));
    CHECK_THROWS_AS(th({0.1}, 0.0), Error);
    CHECK_THROWS_AS(th({}, 0.025), Error);
}

TEST_CASE("population fit is the sample mean and n-1 spread") {
    PopulationDistribution p = fit_population({0.886, 0.8592, 0.8928});
    CHECK(p.mu == doctest::Approx(0.8793333333333333).epsilon(1e-13));
    CHECK(p.sigma == doctest::Approx(0.017764383843334803).epsilon(1e-13));

    p = fit_population({0.9694, 0.9732, 0.9708});
    CHECK(p.mu == doctest::Approx(0.9711333333333334).epsilon(1e-13));
    CHECK(p.sigma == doctest::Approx(0.0019218047073865678).epsilon(1e-13));

    p = fit_population({0.918, 0.93, 0.942});
    CHECK(p.mu == doctest::Approx(0.93).epsilon(1e-13));
    CHECK(p.sigma == doctest::Approx(0.011999999999999955).epsilon(1e-13));

    CHECK(fit_population({0.9, 0.9, 0.9}).sigma == 0.0);
    CHECK_THROWS_AS(fit_population({0.9}), Error);
    CHECK_THROWS_AS(fit_population({}), Error);
}

TEST_CASE("inflation widens sigma and never shrinks it") {
    PopulationDistribution d{0.93, 0.012};
    PopulationDistribution w = inflate(d, 2.0);
    CHECK(w.mu == 0.93);
    CHECK(w.sigma == doctest::Approx(0.024).epsilon(1e-15));
    PopulationDistribution same = inflate(d, 1.0);
    CHECK(same.sigma == d.sigma);
    CHECK_THROWS_AS(inflate(d, 0.5), Error);
    CHECK_THROWS_AS(inflate(d, 0.999999), Error);
}

TEST_CASE("bracket fit groups by commanded magnitude, sorted ascending") {
    std::vector<SpeedMeasurement> table{
        // fast group listed first on purpose; output must come back sorted
        {"v1", 0.05, {0.04809, 0.04847, 0.04885}},
        {"v2", 0.05, {0.04854, 0.04866, 0.04878}},
        {"v3", 0.05, {0.04834, 0.04854, 0.04874}},
        {"v1", 0.025, {0.02158, 0.02215, 0.02272}},
        {"v2", 0.025, {0.02144, 0.02148, 0.02152}},
        {"v3", 0.025, {0.02186, 0.02232, 0.02278}},
    };
    ThetaDistribution dist = fit_brackets(table);
    REQUIRE(dist.brackets.size() == 2);
    CHECK(dist.brackets[0].commanded == 0.025);
    CHECK(dist.brackets[0].mu == doctest::Approx(0.8793333333333333).epsilon(1e-13));
    CHECK(dist.brackets[0].sigma == doctest::Approx(0.0177643838433347).epsilon(1e-13));
    CHECK(dist.brackets[1].commanded == 0.05);
    CHECK(dist.brackets[1].mu == doctest::Approx(0.9711333333333334).epsilon(1e-13));
    CHECK(dist.brackets[1].sigma ==
          doctest::Approx(0.0019218047073865678).epsilon(1e-13));
}

TEST_CASE("bracket fit merges opposite-signed commands") {
    std::vector<SpeedMeasurement> table{
        {"v1", 0.75, {0.6870, 0.6885, 0.6900}},
        {"v2", -0.75, {-0.6960, -0.6975, -0.6990}},
        {"v3", 0.75, {0.7050, 0.7065, 0.7080}},
    };
    ThetaDistribution dist = fit_brackets(table);
    REQUIRE(dist.brackets.size() == 1);
    CHECK(dist.brackets[0].commanded == 0.75);
    CHECK(dist.brackets[0].mu == doctest::Approx(0.93).epsilon(1e-13));
    CHECK(dist.brackets[0].sigma == doctest::Approx(0.01200000000000001).epsilon(1e-12));
}

TEST_CASE("bracket fit refuses a one-robot population") {
    std::vector<SpeedMeasurement> lonely{{"v1", 0.025, {0.022, 0.023}}};
    CHECK_THROWS_AS(fit_brackets(lonely), Error);
    CHECK_THROWS_AS(fit_brackets({}), Error);
}

TEST_CASE("detection polygon follows the passing fan and closes at the origin") {
    std::vector<DetectionTrial> trials;
    for (double b : {-15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0})
        for (double r : {0.2, 0.4, 0.6, 0.8, 1.0})
            trials.push_back(fan_trial(b, r, r <= 0.8));
    std::vector<Vec2> poly = fit_detection_polygon(trials, 0.9);
    REQUIRE(poly.size() == 8);  // 7 rays plus the origin
    CHECK(polygon_is_simple(poly));
    CHECK(polygon_signed_area(poly) > 0.0);
    bool has_origin = false;
    for (const Vec2& v : poly)
        if (v.x == 0.0 && v.y == 0.0) has_origin = true;
    CHECK(has_origin);
    for (const Vec2& v : poly)
        if (v.x != 0.0 || v.y != 0.0)
            CHECK(std::hypot(v.x, v.y) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(point_in_polygon(poly, {0.5, 0.0}));
    CHECK_FALSE(point_in_polygon(poly, {0.85, 0.0}));
    CHECK_FALSE(point_in_polygon(poly, {0.3 * std::cos(25 * kDeg), 0.3 * std::sin(25 * kDeg)}));
}

TEST_CASE("a failing inner cell truncates its whole ray") {
    std::vector<DetectionTrial> trials;
    for (double b : {-10.0, 0.0, 10.0})
        for (double r : {0.2, 0.4, 0.6, 0.8})
            trials.push_back(fan_trial(b, r, !(b == 0.0 && r == 0.4) && r <= 0.8));
    // the 0 degree ray fails at 0.4, so it only reaches 0.2 even though
    // 0.6 and 0.8 pass again further out
    std::vector<Vec2> poly = fit_detection_polygon(trials, 0.9);
    REQUIRE(poly.size() == 4);  // two full rays, the truncated ray, the origin
    int full = 0, truncated = 0;
    for (const Vec2& v : poly) {
        double r = std::hypot(v.x, v.y);
        if (r == doctest::Approx(0.8).epsilon(1e-12)) ++full;
        if (r == doctest::Approx(0.2).epsilon(1e-12)) ++truncated;
    }
    CHECK(full == 2);       // the neighboring rays keep their full extent
    CHECK(truncated == 1);  // passing again further out does not resurrect it
    CHECK(point_in_polygon(poly, {0.15, 0.0}));
    CHECK_FALSE(point_in_polygon(poly, {0.6, 0.0}));
}

TEST_CASE("an all-around fan does not pinch through the origin") {
    std::vector<DetectionTrial> trials;
    for (int k = 0; k < 12; ++k) trials.push_back(fan_trial(-165.0 + 30.0 * k, 0.5, true));
    std::vector<Vec2> poly = fit_detection_polygon(trials, 0.9);
    CHECK(poly.size() == 12);
    CHECK(polygon_is_simple(poly));
    CHECK(polygon_signed_area(poly) == doctest::Approx(0.75));  // regular 12-gon
    CHECK(point_in_polygon(poly, {0.0, 0.0}));
    CHECK(point_in_polygon(poly, {0.4, 0.0}));
}

TEST_CASE("detection polygon failure modes") {
    std::vector<DetectionTrial> dead;
    for (double b : {-10.0, 0.0, 10.0}) dead.push_back(fan_trial(b, 0.5, false));
    CHECK_THROWS_AS(fit_detection_polygon(dead, 0.9), CapabilityError);

    std::vector<DetectionTrial> ok{fan_trial(0.0, 0.5, true)};
    CHECK_THROWS_AS(fit_detection_polygon(ok, 0.0), Error);
    CHECK_THROWS_AS(fit_detection_polygon(ok, 1.5), Error);
    CHECK_THROWS_AS(fit_detection_polygon({{0.5, 0.0, 11, 10}}, 0.9), Error);
    CHECK_THROWS_AS(fit_detection_polygon({{0.5, 0.0, 0, 0}}, 0.9), Error);
    // passing rays on a single bearing cannot span a polygon
    std::vector<DetectionTrial> thin{fan_trial(0.0, 0.3, true), fan_trial(0.0, 0.5, true)};
    CHECK_THROWS_AS(fit_detection_polygon(thin, 0.9), Error);
}

TEST_CASE("measurement CSV loads grouped rows with kind routing") {
    std::string path = write_temp("swarmsim_cal_meas.csv",
                                  "robot,kind,commanded,sample\n"
                                  "v1,speed,0.025,0.02158\n"
                                  "v1,speed,0.025,0.02215\n"
                                  "v2,turn,0.75,0.6960\n"
                                  "v1,speed,0.025,0.02272\n"
                                  "v2,turn,0.75,0.6975\n"
                                  "v1,speed,0.05,0.04809\n"
                                  "v1,speed,0.05,0.04885\n");
    MeasurementTable table = load_measurements(path);
    std::filesystem::remove(path);
    REQUIRE(table.speed.size() == 2);
    REQUIRE(table.turn.size() == 1);
    CHECK(table.speed[0].robot == "v1");
    CHECK(table.speed[0].commanded == 0.025);
    REQUIRE(table.speed[0].samples.size() == 3);
    CHECK(table.speed[0].samples[1] == 0.02215);
    CHECK(table.speed[1].commanded == 0.05);
    CHECK(table.speed[1].samples.size() == 2);
    CHECK(table.turn[0].robot == "v2");
    CHECK(table.turn[0].samples.size() == 2);
}

TEST_CASE("measurement CSV rejects malformed rows") {
    std::string bad_kind = write_temp("swarmsim_cal_badkind.csv",
                                      "robot,kind,commanded,sample\n"
                                      "v1,drift,0.025,0.02158\n");
    CHECK_THROWS_AS(load_measurements(bad_kind), ParseError);
    std::filesystem::remove(bad_kind);

    std::string short_row = write_temp("swarmsim_cal_short.csv", "v1,speed,0.025\n");
    CHECK_THROWS_AS(load_measurements(short_row), ParseError);
    std::filesystem::remove(short_row);

    std::string bad_num = write_temp("swarmsim_cal_badnum.csv",
                                     "v1,speed,0.025,fast\n");
    try {
        load_measurements(bad_num);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":1") != std::string::npos);  // names the line
    }
    std::filesystem::remove(bad_num);

    std::string lonely = write_temp("swarmsim_cal_lonely.csv",
                                    "v1,speed,0.025,0.02158\n");
    CHECK_THROWS_AS(load_measurements(lonely), Error);
    std::filesystem::remove(lonely);
}

TEST_CASE("detection CSV loads with or without a header") {
    std::string with = write_temp("swarmsim_cal_dets.csv",
                                  "x,y,hits,attempts\n"
                                  "0.5,0.0,48,50\n"
                                  "0.5,0.1,12,50\n");
    std::vector<DetectionTrial> trials = load_detection_trials(with);
    std::filesystem::remove(with);
    REQUIRE(trials.size() == 2);
    CHECK(trials[0].x == 0.5);
    CHECK(trials[0].hits == 48);
    CHECK(trials[1].attempts == 50);

    std::string bare = write_temp("swarmsim_cal_dets2.csv", "0.4,0.0,50,50\n");
    trials = load_detection_trials(bare);
    std::filesystem::remove(bare);
    REQUIRE(trials.size() == 1);
    CHECK(trials[0].hits == 50);

    std::string bad = write_temp("swarmsim_cal_dets3.csv", "0.4,0.0,50\n");
    CHECK_THROWS_AS(load_detection_trials(bad), ParseError);
    std::filesystem::remove(bad);
}

}  // TEST_SUITE
