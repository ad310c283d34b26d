#include "swarmsim/reach/reachability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "swarmsim/core/rng.hpp"
#include "swarmsim/io/csv.hpp"
#include "swarmsim/kernels/kernels.hpp"
#include "swarmsim/kernels/trig.hpp"
#include "swarmsim/util/error.hpp"
#include "swarmsim/util/parallel.hpp"

namespace swarmsim {

namespace {

constexpr double kTimeEps = 1e-6;  // slack when snapping log times to buckets

double clamped_theta(const ThetaDistribution& dist, double commanded,
                     double inflation, double zeta) {
    ThetaBracket b = dist.at(commanded);
    double theta = b.mu + inflation * b.sigma * zeta;
    return std::clamp(theta, 1e-12, 2.0 * b.mu);
}

}  // namespace

std::vector<RealRecord> load_real_trajectory(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    std::vector<RealRecord> records;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::vector<std::string> fields = csv_split(lines[i]);
        if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
        if (records.empty() && i == 0 && !fields[0].empty() &&
            !(std::isdigit(static_cast<unsigned char>(fields[0][0])) ||
              fields[0][0] == '-' || fields[0][0] == '+' || fields[0][0] == '.'))
            continue;  // header row
        std::string where = path + ":" + std::to_string(i + 1);
        if (fields.size() != 4)
            throw ParseError(where + ": expected t,x,y,heading");
        RealRecord r;
        r.t = parse_double(fields[0], where + " t");
        r.x = parse_double(fields[1], where + " x");
        r.y = parse_double(fields[2], where + " y");
        r.heading = kernels::normalize_angle(parse_double(fields[3], where + " heading"));
        if (!records.empty() && r.t <= records.back().t)
            throw ParseError(where + ": timestamps must be strictly increasing");
        records.push_back(r);
    }
    if (records.empty()) throw ParseError(path + ": no trajectory records");
    return records;
}

ControlPolicy admissible_policy(const TrialConfig& config) {
    ControlPolicy p;
    p.kind = ControlPolicy::Kind::UniformRandom;
    p.speed_range = config.speed_bounds;
    p.turn_range = config.turn_bounds;
    return p;
}

ReachableCloud sample_cloud(const AgentState& z0, const TrialConfig& config,
                            double horizon, int n_rollouts,
                            const ControlPolicy& policy, int workers) {
    if (n_rollouts < 1) throw Error("need at least one rollout");
    if (!(horizon >= config.dt)) throw Error("horizon must cover at least one step");
    if (workers <= 0) workers = default_workers();

    const double dt = config.dt;
    const std::size_t steps =
        static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));

    ReachableCloud cloud;
    cloud.dt = dt;
    cloud.n_rollouts = n_rollouts;
    cloud.x.resize(steps + 1);
    cloud.y.resize(steps + 1);
    cloud.heading.resize(steps + 1);
    cloud.x[0] = {z0.x};
    cloud.y[0] = {z0.y};
    cloud.heading[0] = {kernels::normalize_angle(z0.heading)};
    const std::size_t rollouts = static_cast<std::size_t>(n_rollouts);
    for (std::size_t k = 1; k <= steps; ++k) {
        cloud.x[k].resize(rollouts);
        cloud.y[k].resize(rollouts);
        cloud.heading[k].resize(rollouts);
    }

    const Rng root(config.seed);
    const kernels::Ops& ops = kernels::active();
    const bool fixed = policy.kind == ControlPolicy::Kind::Fixed;
    const double jitter_sd = config.jitter_sd;

    const std::size_t chunk = 512;
    const std::size_t n_chunks = (rollouts + chunk - 1) / chunk;

    parallel_for_index(n_chunks, workers, [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        const std::size_t count = std::min(chunk, rollouts - begin);

        std::vector<double> x(count, z0.x), y(count, z0.y);
        std::vector<double> h(count, kernels::normalize_angle(z0.heading));
        std::vector<double> u1(count), u2(count), th1(count), th2(count);
        std::vector<double> zeta1(count), zeta2(count);
        std::vector<Rng> theta_rng, control_rng;
        theta_rng.reserve(count);
        control_rng.reserve(count);
        for (std::size_t r = 0; r < count; ++r) {
            theta_rng.push_back(root.derive(StreamTag::RolloutTheta, begin + r));
            control_rng.push_back(root.derive(StreamTag::RolloutControl, begin + r));
            zeta1[r] = theta_rng[r].normal();
            zeta2[r] = theta_rng[r].normal();
        }

        for (std::size_t k = 1; k <= steps; ++k) {
            for (std::size_t r = 0; r < count; ++r) {
                if (fixed) {
                    u1[r] = policy.command.forward_speed;
                    u2[r] = policy.command.turn_rate;
                } else {
                    u1[r] = control_rng[r].uniform(policy.speed_range.lo,
                                                   policy.speed_range.hi);
                    u2[r] = control_rng[r].uniform(policy.turn_range.lo,
                                                   policy.turn_range.hi);
                }
                th1[r] = clamped_theta(config.theta_speed, u1[r],
                                       config.inflation_factor, zeta1[r]);
                th2[r] = clamped_theta(config.theta_turn, u2[r],
                                       config.inflation_factor, zeta2[r]);
                if (jitter_sd > 0.0) {
                    th1[r] = std::max(th1[r] + jitter_sd * theta_rng[r].normal(), 1e-12);
                    th2[r] = std::max(th2[r] + jitter_sd * theta_rng[r].normal(), 1e-12);
                }
            }
            ops.step_unicycle(x.data(), y.data(), h.data(), u1.data(), u2.data(),
                              th1.data(), th2.data(), dt, x.data(), y.data(),
                              h.data(), count);
            std::copy(x.begin(), x.end(), cloud.x[k].begin() + static_cast<std::ptrdiff_t>(begin));
            std::copy(y.begin(), y.end(), cloud.y[k].begin() + static_cast<std::ptrdiff_t>(begin));
            std::copy(h.begin(), h.end(),
                      cloud.heading[k].begin() + static_cast<std::ptrdiff_t>(begin));
        }
    });

    return cloud;
}

ReachableCloud sample_cloud(const AgentState& z0, const TrialConfig& config,
                            double horizon, int n_rollouts, int workers) {
    return sample_cloud(z0, config, horizon, n_rollouts, admissible_policy(config),
                        workers);
}

ContainmentReport check_containment(const std::vector<RealRecord>& real,
                                    const ReachableCloud& cloud, double tol_pos,
                                    double tol_head) {
    if (real.empty()) throw Error("real trajectory is empty");
    if (cloud.n_buckets() == 0 || cloud.x[0].empty())
        throw Error("reachable cloud is empty");
    if (!(tol_pos > 0.0) || !(tol_head > 0.0))
        throw Error("tolerances must be positive");

    const double dt = cloud.dt;
    {
        double dx = real[0].x - cloud.x[0][0];
        double dy = real[0].y - cloud.y[0][0];
        double dh = std::fabs(
            kernels::angle_distance(real[0].heading, cloud.heading[0][0]));
        if (std::sqrt(dx * dx + dy * dy) > tol_pos || dh > tol_head)
            throw Error(
                "real trajectory and cloud do not share an initial state; "
                "seed the cloud from the first real record");
    }

    const double t0 = real.front().t;
    const double t_end = real.back().t;
    std::size_t k_lo =
        static_cast<std::size_t>(std::max(0.0, std::ceil((t0 - kTimeEps) / dt)));
    std::size_t k_hi =
        static_cast<std::size_t>(std::floor((t_end + kTimeEps) / dt));
    if (k_hi >= cloud.n_buckets())
        throw Error("cloud horizon (" + format_double(
                        static_cast<double>(cloud.n_buckets() - 1) * dt) +
                    " s) is shorter than the real trajectory (" +
                    format_double(t_end) + " s); extend the horizon");

    const kernels::Ops& ops = kernels::active();
    const double itp = 1.0 / tol_pos;
    const double ith = 1.0 / tol_head;

    ContainmentReport report;
    report.first_time = static_cast<double>(k_lo) * dt;
    report.last_time = static_cast<double>(k_hi) * dt;
    double worst_qx = 0.0, worst_qy = 0.0, worst_qh = 0.0;
    std::size_t worst_bucket = 0;

    std::size_t seg = 0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double tau = static_cast<double>(k) * dt;
        while (seg + 1 < real.size() && real[seg + 1].t < tau - kTimeEps) ++seg;
        const RealRecord& a = real[seg];
        const RealRecord& b = real[std::min(seg + 1, real.size() - 1)];
        double span = b.t - a.t;
        double alpha = span > 0.0 ? std::clamp((tau - a.t) / span, 0.0, 1.0) : 0.0;
        double qx = a.x + alpha * (b.x - a.x);
        double qy = a.y + alpha * (b.y - a.y);
        double qh = kernels::normalize_angle(
            a.heading + alpha * kernels::angle_distance(b.heading, a.heading));

        const std::vector<double>& sx = cloud.x[k];
        double score = ops.containment_min_score(qx, qy, qh, sx.data(),
                                                 cloud.y[k].data(),
                                                 cloud.heading[k].data(),
                                                 sx.size(), itp, ith);
        ++report.buckets_checked;
        if (score > report.worst_score || report.buckets_checked == 1) {
            report.worst_score = score;
            report.worst_time = tau;
            worst_qx = qx;
            worst_qy = qy;
            worst_qh = qh;
            worst_bucket = k;
        }
        if (score > 1.0) {
            // rerun the argmin in plain arithmetic for the report detail
            Violation v;
            v.t = tau;
            v.bucket = k;
            v.score = score;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < sx.size(); ++i) {
                double dx = sx[i] - qx;
                double dy = cloud.y[k][i] - qy;
                double pd = std::sqrt(dx * dx + dy * dy);
                double hd = std::fabs(kernels::angle_distance(cloud.heading[k][i], qh));
                double s = std::max(pd * itp, hd * ith);
                if (s < best) {
                    best = s;
                    v.pos_err = pd;
                    v.head_err = hd;
                }
            }
            report.violations.push_back(v);
        }
    }

    if (report.buckets_checked > 0) {
        double best = std::numeric_limits<double>::infinity();
        const std::vector<double>& sx = cloud.x[worst_bucket];
        for (std::size_t i = 0; i < sx.size(); ++i) {
            double dx = sx[i] - worst_qx;
            double dy = cloud.y[worst_bucket][i] - worst_qy;
            double pd = std::sqrt(dx * dx + dy * dy);
            double hd = std::fabs(
                kernels::angle_distance(cloud.heading[worst_bucket][i], worst_qh));
            double s = std::max(pd * itp, hd * ith);
            if (s < best) {
                best = s;
                report.worst_pos_err = pd;
                report.worst_head_err = hd;
            }
        }
    }

    report.pass = report.violations.empty();
    return report;
}

std::string format_report(const ContainmentReport& r, double tol_pos,
                          double tol_head) {
    std::ostringstream out;
    out << "verdict: " << (r.pass ? "PASS" : "FAIL") << "\n";
    out << "tolerance: " << format_double(tol_pos) << " m, " << format_double(tol_head)
        << " rad\n";
    out << "buckets checked: " << r.buckets_checked << " (t = "
        << format_double(r.first_time) << " .. " << format_double(r.last_time)
        << " s)\n";
    out << "worst score: " << format_double(r.worst_score) << " at t = "
        << format_double(r.worst_time) << " s (nearest sample "
        << format_double(r.worst_pos_err) << " m, " << format_double(r.worst_head_err)
        << " rad away)\n";
    out << "violations: " << r.violations.size() << "\n";
    const std::size_t cap = 20;
    for (std::size_t i = 0; i < r.violations.size() && i < cap; ++i) {
        const Violation& v = r.violations[i];
        out << "  t = " << format_double(v.t) << " s: nearest sample "
            << format_double(v.pos_err) << " m, " << format_double(v.head_err)
            << " rad away (score " << format_double(v.score) << ")\n";
    }
    if (r.violations.size() > cap)
        out << "  ... " << (r.violations.size() - cap) << " more\n";
    return out.str();
}

}  // namespace swarmsim
