#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmsim/calib/calibration.hpp"
#include "swarmsim/core/world.hpp"
#include "swarmsim/io/config.hpp"
#include "swarmsim/io/csv.hpp"
#include "swarmsim/io/jsonl.hpp"
#include "swarmsim/io/manifest.hpp"
#include "swarmsim/kernels/kernels.hpp"
#include "swarmsim/metrics/metrics.hpp"
#include "swarmsim/reach/reachability.hpp"
#include "swarmsim/sensing/geometry.hpp"
#include "swarmsim/sweep/svg.hpp"
#include "swarmsim/sweep/sweep.hpp"
#include "swarmsim/util/error.hpp"
#include "swarmsim/util/parallel.hpp"

namespace fs = std::filesystem;
using namespace swarmsim;

namespace {

struct CalibrateOpts {
    std::string speed_csv, turn_csv, detect_csv, out;
    double inflate = 2.0;
    double threshold = 0.8;
    double shrink_margin = 0.0;
};

int cmd_calibrate(const CalibrateOpts& o) {
    if (o.inflate < 1.0)
        throw Error("inflation below 1 would model robots better than measured");

    MeasurementTable table = load_measurements(o.speed_csv);
    if (!o.turn_csv.empty()) {
        MeasurementTable more = load_measurements(o.turn_csv);
        table.speed.insert(table.speed.end(), more.speed.begin(), more.speed.end());
        table.turn.insert(table.turn.end(), more.turn.begin(), more.turn.end());
    }
    if (table.speed.empty())
        throw Error(o.speed_csv + ": no speed measurements found");

    CalibrationBundle bundle;
    bundle.inflation_factor = o.inflate;
    bundle.theta_speed = fit_brackets(table.speed);
    if (table.turn.empty()) {
        std::cerr << "warning: no turn measurements; assuming ideal turning\n";
    } else {
        bundle.theta_turn = fit_brackets(table.turn);
    }

    for (const SpeedMeasurement& m : table.speed)
        std::cout << "robot " << m.robot << " speed @ " << format_double(m.commanded)
                  << ": theta = " << format_double(compute_theta(m)) << "\n";
    for (const SpeedMeasurement& m : table.turn)
        std::cout << "robot " << m.robot << " turn @ " << format_double(m.commanded)
                  << ": theta = " << format_double(compute_theta(m)) << "\n";
    for (const ThetaBracket& b : bundle.theta_speed.brackets)
        std::cout << "theta_speed @ " << format_double(b.commanded)
                  << ": mu = " << format_double(b.mu)
                  << ", sigma = " << format_double(b.sigma) << "\n";
    for (const ThetaBracket& b : bundle.theta_turn.brackets)
        std::cout << "theta_turn @ " << format_double(b.commanded)
                  << ": mu = " << format_double(b.mu)
                  << ", sigma = " << format_double(b.sigma) << "\n";

    if (!o.detect_csv.empty()) {
        std::vector<DetectionTrial> trials = load_detection_trials(o.detect_csv);
        std::vector<Vec2> poly = fit_detection_polygon(trials, o.threshold);
        if (o.shrink_margin > 0.0) poly = shrink_polygon(poly, o.shrink_margin);
        bundle.polygon = std::move(poly);
        bundle.has_polygon = true;
        std::cout << "detection polygon: " << bundle.polygon.size() << " vertices\n";
    } else {
        std::cerr << "warning: no detection data; keeping the default cone "
                     "field of view\n";
    }

    write_file_atomic(o.out, bundle_to_json(bundle).dump(2) + "\n");
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

struct SimulateOpts {
    std::vector<std::string> configs;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long ticks = 0;
    bool ticks_set = false;
    int log_every = 0;
    std::string out = "sim_out";
    bool render = false;
    int frames = 8;
};

nlohmann::ordered_json metrics_json(const TrialResult& result) {
    nlohmann::ordered_json j;
    j["phase"] = phase_name(result.phase);
    j["ticks"] = result.ticks;
    j["metrics"]["milling_order"] = result.metrics.milling_order;
    j["metrics"]["radial_cv"] = result.metrics.radial_cv;
    j["metrics"]["centroid_drift"] = result.metrics.centroid_drift;
    j["metrics"]["collision_rate"] = result.metrics.collision_rate;
    j["metrics"]["deadlock_fraction"] = result.metrics.deadlock_fraction;
    j["metrics"]["wall_fraction"] = result.metrics.wall_fraction;
    return j;
}

int cmd_simulate(const SimulateOpts& o) {
    TrialConfig cfg = load_config(o.configs);
    if (o.seed_set) cfg.seed = o.seed;
    if (o.ticks_set) {
        if (o.ticks < 1) throw Error("--ticks must be >= 1");
        cfg.duration = static_cast<double>(o.ticks) * cfg.dt;
    }
    if (o.log_every > 0) cfg.log_every = o.log_every;
    cfg.validate();

    fs::create_directories(o.out);
    TrialResult result;
    {
        JsonlTrialSink sink(o.out + "/trajectory.jsonl");
        result = run_trial(cfg, &sink);
    }
    write_file_atomic(o.out + "/metrics.json", metrics_json(result).dump(2) + "\n");
    write_manifest(o.out, make_manifest("simulate", cfg.seed, config_to_json(cfg),
                                        o.configs));
    if (o.render) {
        TrajectoryFile traj = load_trajectory(o.out + "/trajectory.jsonl");
        write_file_atomic(o.out + "/trajectory.svg", trajectory_svg(traj, o.frames));
    }

    std::cout << "phase: " << phase_name(result.phase) << "\n";
    std::cout << "milling_order: " << format_double(result.metrics.milling_order)
              << "\n";
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

struct SweepOpts {
    std::string spec;
    std::string out = "sweep_out";
    std::string overlay;
    bool keep_trajectories = false;
    int workers = 0;
};

int cmd_sweep(const SweepOpts& o) {
    SweepSpec spec = load_sweep_spec(o.spec);
    fs::create_directories(o.out);

    TrialSinkFactory factory;
    if (o.keep_trajectories) {
        std::size_t cells = 1;
        for (const AxisSpec& a : spec.axes) cells *= a.values.size();
        for (std::size_t c = 0; c < cells; ++c)
            fs::create_directories(o.out + "/trials/" + std::to_string(c));
        std::string out = o.out;
        factory = [out](std::size_t cell, int seed) -> std::unique_ptr<TrialSink> {
            return std::make_unique<JsonlTrialSink>(out + "/trials/" +
                                                    std::to_string(cell) + "/" +
                                                    std::to_string(seed) + ".jsonl");
        };
    }

    int workers = o.workers > 0 ? o.workers : default_workers();
    PhaseDiagram diagram = run_sweep(spec, workers, factory);
    write_file_atomic(o.out + "/diagram.csv", diagram_to_csv(diagram));

    std::vector<OverlayPoint> overlay;
    if (!o.overlay.empty()) overlay = load_overlay(o.overlay);
    if (diagram.axes.size() == 2) {
        write_file_atomic(o.out + "/diagram.svg", diagram_svg(diagram, overlay));
    } else {
        std::cerr << "note: " << diagram.axes.size()
                  << "-axis sweep; no SVG, slice the CSV to render\n";
    }

    nlohmann::ordered_json resolved;
    resolved["base"] = config_to_json(spec.base);
    resolved["axes"] = nlohmann::ordered_json::array();
    for (const AxisSpec& a : diagram.axes)
        resolved["axes"].push_back({{"name", a.name}, {"values", a.values}});
    resolved["seeds_per_cell"] = diagram.seeds_per_cell;
    std::vector<std::string> inputs{o.spec};
    if (!o.overlay.empty()) inputs.push_back(o.overlay);
    write_manifest(o.out, make_manifest("sweep", spec.base.seed, resolved, inputs));

    std::array<int, kPhaseCount> modal_cells{};
    for (const CellResult& c : diagram.cells)
        ++modal_cells[static_cast<std::size_t>(c.modal)];
    for (int p = 0; p < kPhaseCount; ++p)
        std::cout << phase_name(static_cast<Phase>(p)) << " cells: "
                  << modal_cells[static_cast<std::size_t>(p)] << "\n";
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

struct RecommendOpts {
    std::string diagram;
    std::string target = "stable_milling";
};

int cmd_recommend(const RecommendOpts& o) {
    PhaseDiagram diagram = diagram_from_csv(read_file(o.diagram));
    Recommendation rec = recommend(diagram, phase_from_name(o.target));
    std::cout << "recommendation:";
    for (std::size_t a = 0; a < diagram.axes.size(); ++a)
        std::cout << (a ? ", " : " ") << diagram.axes[a].name << " = "
                  << format_double(rec.values[a]);
    std::cout << "\n";
    std::cout << "b_" << o.target << ": " << format_double(rec.b_target) << " over "
              << diagram.seeds_per_cell << " seeds\n";
    std::cout << "interior depth: " << rec.interior_steps << " grid steps\n";
    return 0;
}

struct ValidateOpts {
    std::string real;
    std::vector<std::string> configs;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long rollouts = 10000;
    double horizon = -1.0;
    double tol_pos = 0.05;
    double tol_head = 0.15;
    double inflate = -1.0;
    std::string policy = "random";
    double u1 = 0.0, u2 = 0.0;
    bool u1_set = false, u2_set = false;
    std::string out;
    int workers = 0;
};

int cmd_validate(const ValidateOpts& o) {
    TrialConfig cfg = load_config(o.configs);
    if (o.seed_set) cfg.seed = o.seed;
    if (o.inflate >= 0.0) cfg.inflation_factor = o.inflate;
    if (o.rollouts < 1) throw Error("--rollouts must be >= 1");

    std::vector<RealRecord> real = load_real_trajectory(o.real);
    ControlPolicy policy;
    if (o.policy == "fixed") {
        if (!o.u1_set) throw Error("fixed policy needs --u1 (and optionally --u2)");
        policy.kind = ControlPolicy::Kind::Fixed;
        policy.command.forward_speed = o.u1;
        policy.command.turn_rate = o.u2;
    } else if (o.policy == "random") {
        policy = admissible_policy(cfg);
        if (o.u1_set || o.u2_set)
            throw Error("--u1/--u2 only apply to the fixed policy");
    } else {
        throw Error("unknown policy '" + o.policy + "' (fixed or random)");
    }

    AgentState z0{real.front().x, real.front().y, real.front().heading, 0};
    double horizon = o.horizon > 0.0 ? o.horizon : real.back().t;
    ReachableCloud cloud = sample_cloud(z0, cfg, horizon,
                                        static_cast<int>(o.rollouts), policy,
                                        o.workers);
    ContainmentReport report = check_containment(real, cloud, o.tol_pos, o.tol_head);
    std::string text = format_report(report, o.tol_pos, o.tol_head);
    std::cout << text;
    if (!o.out.empty()) write_file_atomic(o.out, text);
    return report.pass ? 0 : 2;
}

struct RenderOpts {
    std::string trajectory;
    std::string diagram;
    std::string overlay;
    std::string out;
    int frames = 8;
};

int cmd_render(const RenderOpts& o) {
    if (!o.trajectory.empty()) {
        TrajectoryFile traj = load_trajectory(o.trajectory);
        write_file_atomic(o.out, trajectory_svg(traj, o.frames));
    } else if (!o.diagram.empty()) {
        PhaseDiagram diagram = diagram_from_csv(read_file(o.diagram));
        std::vector<OverlayPoint> overlay;
        if (!o.overlay.empty()) overlay = load_overlay(o.overlay);
        write_file_atomic(o.out, diagram_svg(diagram, overlay));
    } else {
        throw Error("render needs --trajectory or --diagram");
    }
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-fidelity swarm simulator and calibration toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string kernel;
    int workers = 0;
    auto* kernel_opt =
        app.add_option("--kernel", kernel, "kernel variant: auto, scalar, avx2");
    app.add_option("--workers", workers,
                   "worker threads (default: SWARMSIM_WORKERS or all cores)");

    CalibrateOpts cal;
    CLI::App* c = app.add_subcommand("calibrate", "fit robot idiosyncrasies");
    c->add_option("--speed-csv", cal.speed_csv, "robot,kind,commanded,sample rows")
        ->required();
    c->add_option("--turn-csv", cal.turn_csv, "extra measurement rows");
    c->add_option("--detect-csv", cal.detect_csv, "x,y,hits,attempts rows");
    c->add_option("--inflate", cal.inflate, "sigma inflation factor (>= 1)")
        ->capture_default_str();
    c->add_option("--threshold", cal.threshold, "detection pass rate")
        ->capture_default_str();
    c->add_option("--shrink-margin", cal.shrink_margin,
                  "inset the fitted polygon by this margin (m)");
    c->add_option("--out", cal.out, "bundle path (a config fragment)")->required();

    SimulateOpts sim;
    CLI::App* s = app.add_subcommand("simulate", "run one trial");
    auto* sim_seed = s->add_option("--seed", sim.seed, "root seed override");
    auto* sim_ticks = s->add_option("--ticks", sim.ticks, "run exactly this many steps");
    s->add_option("--config,--params", sim.configs,
                  "config fragments, applied in order");
    s->add_option("--log-every", sim.log_every, "trajectory log stride");
    s->add_option("--out", sim.out, "output directory")->capture_default_str();
    s->add_flag("--render", sim.render, "also write an SVG frame strip");
    s->add_option("--frames", sim.frames, "frames in the strip")->capture_default_str();

    SweepOpts swp;
    CLI::App* w = app.add_subcommand("sweep", "map a parameter grid to phases");
    w->add_option("--spec", swp.spec, "sweep spec (base config + axes)")->required();
    w->add_option("--out", swp.out, "output directory")->capture_default_str();
    w->add_option("--overlay", swp.overlay, "real outcomes to mark on the SVG");
    w->add_flag("--keep-trajectories", swp.keep_trajectories,
                "write trials/<cell>/<seed>.jsonl");

    RecommendOpts rec;
    CLI::App* r = app.add_subcommand("recommend", "pick operating point from a diagram");
    r->add_option("--diagram", rec.diagram, "diagram.csv from a sweep")->required();
    r->add_option("--target", rec.target, "phase to aim for")->capture_default_str();

    ValidateOpts val;
    CLI::App* v = app.add_subcommand("validate",
                                     "check a real trajectory against the "
                                     "simulated reachable set");
    v->add_option("--real", val.real, "t,x,y,heading CSV")->required();
    v->add_option("--config,--params", val.configs,
                  "config fragments, applied in order");
    auto* val_seed = v->add_option("--seed", val.seed, "root seed override");
    v->add_option("--rollouts", val.rollouts, "sample count")->capture_default_str();
    v->add_option("--horizon", val.horizon, "seconds (default: last record)");
    v->add_option("--tol-pos", val.tol_pos, "position tolerance, m")
        ->capture_default_str();
    v->add_option("--tol-head", val.tol_head, "heading tolerance, rad")
        ->capture_default_str();
    v->add_option("--inflate", val.inflate, "override the bundle inflation factor");
    v->add_option("--policy", val.policy, "rollout controls: random or fixed")
        ->capture_default_str();
    auto* val_u1 = v->add_option("--u1", val.u1, "fixed forward speed, m/s");
    auto* val_u2 = v->add_option("--u2", val.u2, "fixed turn rate, rad/s");
    v->add_option("--out", val.out, "also write the report here");

    RenderOpts ren;
    CLI::App* n = app.add_subcommand("render", "draw SVGs from logged outputs");
    n->add_option("--trajectory", ren.trajectory, "trajectory.jsonl to strip");
    n->add_option("--diagram", ren.diagram, "diagram.csv to heat-map");
    n->add_option("--overlay", ren.overlay, "real outcomes to mark");
    n->add_option("--out", ren.out, "SVG path")->required();
    n->add_option("--frames", ren.frames, "frames in the strip")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (kernel_opt->count() > 0) kernels::select(kernel);
        if (workers > 0) {
            swp.workers = workers;
            val.workers = workers;
        }
        sim.seed_set = sim_seed->count() > 0;
        sim.ticks_set = sim_ticks->count() > 0;
        val.seed_set = val_seed->count() > 0;
        val.u1_set = val_u1->count() > 0;
        val.u2_set = val_u2->count() > 0;

        if (*c) return cmd_calibrate(cal);
        if (*s) return cmd_simulate(sim);
        if (*w) return cmd_sweep(swp);
        if (*r) return cmd_recommend(rec);
        if (*v) return cmd_validate(val);
        if (*n) return cmd_render(ren);
        return 1;
    } catch (const CapabilityError& e) {
        std::cerr << "capability: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
