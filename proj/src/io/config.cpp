#include "swarmsim/io/config.hpp"

#include <cmath>
#include <fstream>

#include "swarmsim/io/csv.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {
namespace {

using nlohmann::json;

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
    throw ParseError("unknown config key '" + where + key + "'");
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError("config key '" + where + "' must be a number");
    return j.get<double>();
}

ThetaDistribution parse_theta(const json& j, const std::string& where) {
    ThetaDistribution d;
    if (j.contains("brackets")) {
        for (const auto& item : j.items())
            if (item.key() != "brackets") unknown_key(where + ".", item.key());
        d.brackets.clear();
        for (const json& b : j.at("brackets")) {
            ThetaBracket tb;
            for (const auto& [key, value] : b.items()) {
                if (key == "commanded") tb.commanded = num(value, where + ".commanded");
                else if (key == "mu") tb.mu = num(value, where + ".mu");
                else if (key == "sigma") tb.sigma = num(value, where + ".sigma");
                else unknown_key(where + ".brackets.", key);
            }
            d.brackets.push_back(tb);
        }
        if (d.brackets.empty()) throw ParseError("'" + where + ".brackets' is empty");
    } else {
        ThetaBracket tb;
        for (const auto& [key, value] : j.items()) {
            if (key == "mu") tb.mu = num(value, where + ".mu");
            else if (key == "sigma") tb.sigma = num(value, where + ".sigma");
            else unknown_key(where + ".", key);
        }
        d.brackets = {tb};
    }
    return d;
}

json theta_to_json(const ThetaDistribution& d) {
    if (d.brackets.size() == 1 && d.brackets.front().commanded == 1.0) {
        return {{"mu", d.brackets.front().mu}, {"sigma", d.brackets.front().sigma}};
    }
    json brackets = json::array();
    for (const ThetaBracket& b : d.brackets)
        brackets.push_back({{"commanded", b.commanded}, {"mu", b.mu}, {"sigma", b.sigma}});
    return {{"brackets", brackets}};
}

void parse_sensor(SensorModel& s, const json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") {
            std::string kind = value.get<std::string>();
            if (kind == "cone") s.kind = SensorModel::Kind::Cone;
            else if (kind == "polygon") s.kind = SensorModel::Kind::Polygon;
            else throw ParseError("sensor.kind must be 'cone' or 'polygon'");
        } else if (key == "range") {
            s.cone.range = num(value, "sensor.range");
        } else if (key == "half_angle") {
            s.cone.half_angle = num(value, "sensor.half_angle");
        } else if (key == "vertices") {
            s.polygon.vertices.clear();
            for (const json& v : value) {
                if (!v.is_array() || v.size() != 2)
                    throw ParseError("sensor.vertices entries must be [x, y]");
                s.polygon.vertices.push_back({num(v[0], "sensor.vertices"),
                                              num(v[1], "sensor.vertices")});
            }
        } else if (key == "false_positive_rate") {
            s.false_positive_rate = num(value, "sensor.false_positive_rate");
        } else if (key == "false_negative_rate") {
            s.false_negative_rate = num(value, "sensor.false_negative_rate");
        } else {
            unknown_key("sensor.", key);
        }
    }
}

ControlCommand parse_command(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("'" + where + "' must be [forward_speed, turn_rate]");
    return {num(j[0], where), num(j[1], where)};
}

void parse_controller(ControllerSpec& c, const json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") {
            std::string kind = value.get<std::string>();
            if (kind == "mill") c.kind = ControllerSpec::Kind::Mill;
            else if (kind == "constant") c.kind = ControllerSpec::Kind::Constant;
            else if (kind == "table") c.kind = ControllerSpec::Kind::Table;
            else throw ParseError("controller.kind must be mill, constant, or table");
        } else if (key == "command") {
            c.on_zero = parse_command(value, "controller.command");
        } else if (key == "on_zero") {
            c.on_zero = parse_command(value, "controller.on_zero");
        } else if (key == "on_one") {
            c.on_one = parse_command(value, "controller.on_one");
        } else {
            unknown_key("controller.", key);
        }
    }
}

void parse_metrics(TrialConfig& cfg, const json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "window_fraction") {
            cfg.metrics_window_fraction = num(value, "metrics.window_fraction");
        } else if (key == "thresholds") {
            for (const auto& [tk, tv] : value.items()) {
                if (tk == "deadlock") cfg.thresholds.deadlock = num(tv, tk);
                else if (tk == "wall") cfg.thresholds.wall = num(tv, tk);
                else if (tk == "mill") cfg.thresholds.mill = num(tv, tk);
                else if (tk == "mill_semi") cfg.thresholds.mill_semi = num(tv, tk);
                else if (tk == "collision_low") cfg.thresholds.collision_low = num(tv, tk);
                else unknown_key("metrics.thresholds.", tk);
            }
        } else {
            unknown_key("metrics.", key);
        }
    }
}

Interval parse_interval(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("'" + where + "' must be [lo, hi]");
    Interval b{num(j[0], where), num(j[1], where)};
    if (!(b.lo <= b.hi)) throw ParseError("'" + where + "' must have lo <= hi");
    return b;
}

}  // namespace

void apply_config_fragment(TrialConfig& cfg, const json& fragment) {
    if (!fragment.is_object()) throw ParseError("config fragment must be a JSON object");
    for (const auto& [key, value] : fragment.items()) {
        if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "n_agents") cfg.n_agents = value.get<int>();
        else if (key == "desired_speed") cfg.desired_speed = num(value, key);
        else if (key == "desired_turn_rate") cfg.desired_turn_rate = num(value, key);
        else if (key == "dt") cfg.dt = num(value, key);
        else if (key == "duration") cfg.duration = num(value, key);
        else if (key == "arena") {
            for (const auto& [ak, av] : value.items()) {
                if (ak == "width") cfg.arena.width = num(av, "arena.width");
                else if (ak == "height") cfg.arena.height = num(av, "arena.height");
                else unknown_key("arena.", ak);
            }
        } else if (key == "collision_radius") cfg.collision_radius = num(value, key);
        else if (key == "init") {
            for (const auto& [ik, iv] : value.items()) {
                if (ik == "ring_radius") cfg.init.ring_radius = num(iv, "init.ring_radius");
                else if (ik == "even") cfg.init.even = iv.get<bool>();
                else unknown_key("init.", ik);
            }
        } else if (key == "speed_bounds") cfg.speed_bounds = parse_interval(value, key);
        else if (key == "turn_bounds") cfg.turn_bounds = parse_interval(value, key);
        else if (key == "inflation_factor") cfg.inflation_factor = num(value, key);
        else if (key == "jitter_sd") cfg.jitter_sd = num(value, key);
        else if (key == "theta_speed") cfg.theta_speed = parse_theta(value, key);
        else if (key == "theta_turn") cfg.theta_turn = parse_theta(value, key);
        else if (key == "sensor") parse_sensor(cfg.sensor, value);
        else if (key == "controller") parse_controller(cfg.controller, value);
        else if (key == "metrics") parse_metrics(cfg, value);
        else if (key == "log_every") cfg.log_every = value.get<int>();
        else unknown_key("", key);
    }
}

nlohmann::ordered_json config_to_json(const TrialConfig& cfg) {
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["n_agents"] = cfg.n_agents;
    j["desired_speed"] = cfg.desired_speed;
    j["desired_turn_rate"] = cfg.desired_turn_rate;
    j["dt"] = cfg.dt;
    j["duration"] = cfg.duration;
    j["arena"] = {{"width", cfg.arena.width}, {"height", cfg.arena.height}};
    j["collision_radius"] = cfg.collision_radius;
    j["init"] = {{"ring_radius", cfg.init.ring_radius}, {"even", cfg.init.even}};
    j["speed_bounds"] = {cfg.speed_bounds.lo, cfg.speed_bounds.hi};
    j["turn_bounds"] = {cfg.turn_bounds.lo, cfg.turn_bounds.hi};
    j["inflation_factor"] = cfg.inflation_factor;
    j["jitter_sd"] = cfg.jitter_sd;
    j["theta_speed"] = theta_to_json(cfg.theta_speed);
    j["theta_turn"] = theta_to_json(cfg.theta_turn);
    if (cfg.sensor.kind == SensorModel::Kind::Cone) {
        j["sensor"] = {{"kind", "cone"},
                       {"range", cfg.sensor.cone.range},
                       {"half_angle", cfg.sensor.cone.half_angle},
                       {"false_positive_rate", cfg.sensor.false_positive_rate},
                       {"false_negative_rate", cfg.sensor.false_negative_rate}};
    } else {
        nlohmann::ordered_json verts = nlohmann::ordered_json::array();
        for (const Vec2& v : cfg.sensor.polygon.vertices) verts.push_back({v.x, v.y});
        j["sensor"] = {{"kind", "polygon"},
                       {"vertices", verts},
                       {"false_positive_rate", cfg.sensor.false_positive_rate},
                       {"false_negative_rate", cfg.sensor.false_negative_rate}};
    }
    switch (cfg.controller.kind) {
        case ControllerSpec::Kind::Mill:
            j["controller"] = {{"kind", "mill"}};
            break;
        case ControllerSpec::Kind::Constant:
            j["controller"] = {{"kind", "constant"},
                               {"command", {cfg.controller.on_zero.forward_speed,
                                            cfg.controller.on_zero.turn_rate}}};
            break;
        case ControllerSpec::Kind::Table:
            j["controller"] = {{"kind", "table"},
                               {"on_zero", {cfg.controller.on_zero.forward_speed,
                                            cfg.controller.on_zero.turn_rate}},
                               {"on_one", {cfg.controller.on_one.forward_speed,
                                           cfg.controller.on_one.turn_rate}}};
            break;
    }
    j["metrics"] = {{"window_fraction", cfg.metrics_window_fraction},
                    {"thresholds",
                     {{"deadlock", cfg.thresholds.deadlock},
                      {"wall", cfg.thresholds.wall},
                      {"mill", cfg.thresholds.mill},
                      {"mill_semi", cfg.thresholds.mill_semi},
                      {"collision_low", cfg.thresholds.collision_low}}}};
    j["log_every"] = cfg.log_every;
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

TrialConfig load_config(const std::vector<std::string>& fragment_paths) {
    TrialConfig cfg;
    for (const std::string& path : fragment_paths)
        apply_config_fragment(cfg, load_json_file(path));
    return cfg;
}

SweepSpec load_sweep_spec(const std::string& path) {
    json j = load_json_file(path);
    SweepSpec spec;
    bool has_axes = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "base") {
            apply_config_fragment(spec.base, value);
        } else if (key == "axes") {
            has_axes = true;
            for (const json& a : value) {
                AxisSpec axis;
                for (const auto& [ak, av] : a.items()) {
                    if (ak == "name") axis.name = av.get<std::string>();
                    else if (ak == "values") {
                        for (const json& v : av) axis.values.push_back(num(v, "axis value"));
                    } else unknown_key("axes.", ak);
                }
                if (axis.name.empty()) throw ParseError(path + ": axis without a name");
                if (axis.values.empty())
                    throw ParseError(path + ": axis '" + axis.name + "' has no values");
                spec.axes.push_back(axis);
            }
        } else if (key == "seeds_per_cell") {
            spec.seeds_per_cell = value.get<int>();
        } else {
            unknown_key("", key);
        }
    }
    if (!has_axes || spec.axes.empty()) throw ParseError(path + ": sweep needs axes");
    if (spec.seeds_per_cell < 1) throw ParseError(path + ": seeds_per_cell must be >= 1");
    return spec;
}

nlohmann::ordered_json bundle_to_json(const CalibrationBundle& bundle) {
    nlohmann::ordered_json j;
    j["inflation_factor"] = bundle.inflation_factor;
    j["theta_speed"] = theta_to_json(bundle.theta_speed);
    j["theta_turn"] = theta_to_json(bundle.theta_turn);
    if (bundle.has_polygon) {
        nlohmann::ordered_json verts = nlohmann::ordered_json::array();
        for (const Vec2& v : bundle.polygon) verts.push_back({v.x, v.y});
        j["sensor"] = {{"kind", "polygon"}, {"vertices", verts}};
    }
    return j;
}

}  // namespace swarmsim
