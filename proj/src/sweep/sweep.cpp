#include "swarmsim/sweep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swarmsim/io/csv.hpp"
#include "swarmsim/util/error.hpp"
#include "swarmsim/util/parallel.hpp"

namespace swarmsim {

std::size_t PhaseDiagram::cell_count() const {
    std::size_t n = 1;
    for (const AxisSpec& a : axes) n *= a.values.size();
    return n;
}

std::vector<std::size_t> PhaseDiagram::cell_index(std::size_t flat) const {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        idx[a] = flat % axes[a].values.size();
        flat /= axes[a].values.size();
    }
    return idx;
}

std::vector<double> PhaseDiagram::cell_values(std::size_t flat) const {
    std::vector<std::size_t> idx = cell_index(flat);
    std::vector<double> vals(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) vals[a] = axes[a].values[idx[a]];
    return vals;
}

void apply_axis_value(TrialConfig& cfg, const std::string& axis_name, double value) {
    const std::string& n = axis_name;
    if (n == "desired_speed" || n == "v") {
        cfg.desired_speed = value;
    } else if (n == "desired_turn_rate" || n == "omega") {
        cfg.desired_turn_rate = value;
    } else if (n == "n_agents" || n == "n") {
        double r = std::llround(value);
        if (std::fabs(value - r) > 1e-9 || value < 1)
            throw Error("n_agents axis value must be a positive integer");
        cfg.n_agents = static_cast<int>(r);
    } else if (n == "inflation_factor") {
        cfg.inflation_factor = value;
    } else if (n == "dt") {
        cfg.dt = value;
    } else {
        throw Error("axis '" + n + "' is not sweepable; only controllable parameters are");
    }
}

PhaseDiagram run_sweep(const SweepSpec& spec, int workers,
                       const TrialSinkFactory& sink_factory) {
    if (spec.axes.empty()) throw Error("sweep needs at least one axis");
    if (spec.seeds_per_cell < 1) throw Error("seeds_per_cell must be >= 1");

    {
        TrialConfig probe = spec.base;  // axis names fail fast, not per trial
        for (const AxisSpec& a : spec.axes) {
            if (a.values.empty()) throw Error("axis '" + a.name + "' has no values");
            apply_axis_value(probe, a.name, a.values.front());
        }
    }

    PhaseDiagram diagram;
    diagram.axes = spec.axes;
    diagram.seeds_per_cell = spec.seeds_per_cell;
    const std::size_t cells = diagram.cell_count();
    const std::size_t seeds = static_cast<std::size_t>(spec.seeds_per_cell);
    const std::size_t trials = cells * seeds;

    Rng root(spec.base.seed);
    std::vector<char> letters(trials, 'E');

    parallel_for_index(trials, workers, [&](std::size_t task) {
        const std::size_t cell = task / seeds;
        const std::size_t seed = task % seeds;
        char label = 'E';
        try {
            TrialConfig cfg = spec.base;
            std::vector<double> vals = diagram.cell_values(cell);
            for (std::size_t a = 0; a < spec.axes.size(); ++a)
                apply_axis_value(cfg, spec.axes[a].name, vals[a]);
            cfg.seed = root.derive(StreamTag::CellTrial, cell, seed).seed();
            std::unique_ptr<TrialSink> sink;
            if (sink_factory) sink = sink_factory(cell, static_cast<int>(seed));
            TrialResult result = run_trial(cfg, sink.get());
            label = phase_letter(result.phase);
        } catch (const std::exception&) {
            label = 'E';  // the cell keeps its other seeds
        }
        letters[task] = label;
    });

    diagram.cells.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        CellResult& cell = diagram.cells[c];
        cell.labels.assign(letters.begin() + static_cast<std::ptrdiff_t>(c * seeds),
                           letters.begin() + static_cast<std::ptrdiff_t>((c + 1) * seeds));
        for (char l : cell.labels) {
            if (l == 'E') ++cell.errors;
            else ++cell.counts[static_cast<std::size_t>(phase_from_letter(l))];
        }
        int best = -1;
        for (int p = 0; p < kPhaseCount; ++p) {
            if (cell.counts[static_cast<std::size_t>(p)] > best) {
                best = cell.counts[static_cast<std::size_t>(p)];
                cell.modal = static_cast<Phase>(p);
            }
        }
        cell.b_s = static_cast<double>(
                       cell.counts[static_cast<std::size_t>(Phase::StableMilling)]) /
                   static_cast<double>(seeds);
    }
    return diagram;
}

std::string diagram_to_csv(const PhaseDiagram& diagram) {
    std::ostringstream out;
    out << "# swarmsim-diagram v1\n";
    for (const AxisSpec& a : diagram.axes) {
        out << "# axis," << a.name;
        for (double v : a.values) out << ',' << format_double(v);
        out << '\n';
    }
    out << "# seeds_per_cell," << diagram.seeds_per_cell << '\n';
    for (const AxisSpec& a : diagram.axes) out << a.name << ',';
    out << "dispersion,stable_milling,semi_stable_milling,colliding_unstable,"
           "errors,b_s,modal,labels\n";
    for (std::size_t c = 0; c < diagram.cells.size(); ++c) {
        for (double v : diagram.cell_values(c)) out << format_double(v) << ',';
        const CellResult& cell = diagram.cells[c];
        for (int p = 0; p < kPhaseCount; ++p)
            out << cell.counts[static_cast<std::size_t>(p)] << ',';
        out << cell.errors << ',' << format_double(cell.b_s) << ','
            << phase_name(cell.modal) << ',' << cell.labels << '\n';
    }
    return out.str();
}

PhaseDiagram diagram_from_csv(const std::string& text) {
    PhaseDiagram diagram;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::size_t row = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string context = "diagram csv line " + std::to_string(line_no);
        if (line[0] == '#') {
            std::vector<std::string> f = csv_split(line.substr(1));
            for (std::string& s : f) {
                std::size_t a = s.find_first_not_of(' ');
                s = a == std::string::npos ? "" : s.substr(a);
            }
            if (f.empty()) continue;
            if (f[0] == "axis") {
                if (f.size() < 3) throw ParseError(context + ": axis needs values");
                AxisSpec axis;
                axis.name = f[1];
                for (std::size_t k = 2; k < f.size(); ++k)
                    axis.values.push_back(parse_double(f[k], context));
                diagram.axes.push_back(axis);
            } else if (f[0] == "seeds_per_cell") {
                if (f.size() != 2) throw ParseError(context + ": bad seeds_per_cell");
                diagram.seeds_per_cell = static_cast<int>(parse_long(f[1], context));
            }
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            diagram.cells.resize(diagram.cell_count());
            continue;
        }
        if (row >= diagram.cells.size())
            throw ParseError(context + ": more rows than grid cells");
        std::vector<std::string> f = csv_split(line);
        const std::size_t na = diagram.axes.size();
        if (f.size() != na + 8)
            throw ParseError(context + ": expected " + std::to_string(na + 8) + " columns");
        std::vector<double> expect = diagram.cell_values(row);
        for (std::size_t a = 0; a < na; ++a) {
            if (parse_double(f[a], context) != expect[a])
                throw ParseError(context + ": axis values out of grid order");
        }
        CellResult& cell = diagram.cells[row];
        for (int p = 0; p < kPhaseCount; ++p)
            cell.counts[static_cast<std::size_t>(p)] =
                static_cast<int>(parse_long(f[na + static_cast<std::size_t>(p)], context));
        cell.errors = static_cast<int>(parse_long(f[na + 4], context));
        cell.b_s = parse_double(f[na + 5], context);
        cell.modal = phase_from_name(f[na + 6]);
        cell.labels = f[na + 7];
        if (static_cast<int>(cell.labels.size()) != diagram.seeds_per_cell)
            throw ParseError(context + ": labels length != seeds_per_cell");
        ++row;
    }
    if (diagram.axes.empty()) throw ParseError("diagram csv: no axis metadata");
    if (row != diagram.cells.size()) throw ParseError("diagram csv: missing rows");
    return diagram;
}

Recommendation recommend(const PhaseDiagram& diagram, Phase target) {
    const std::size_t cells = diagram.cell_count();
    if (cells == 0 || diagram.cells.size() != cells)
        throw Error("diagram is incomplete");

    bool any_target = false;
    std::array<long, kPhaseCount> totals{};
    for (const CellResult& cell : diagram.cells) {
        if (cell.counts[static_cast<std::size_t>(target)] > 0) any_target = true;
        for (int p = 0; p < kPhaseCount; ++p)
            totals[static_cast<std::size_t>(p)] += cell.counts[static_cast<std::size_t>(p)];
    }
    if (!any_target) {
        Phase fallback = Phase::Dispersion;
        long best = -1;
        for (int p = 0; p < kPhaseCount; ++p) {
            if (p == static_cast<int>(target)) continue;
            if (totals[static_cast<std::size_t>(p)] > best) {
                best = totals[static_cast<std::size_t>(p)];
                fallback = static_cast<Phase>(p);
            }
        }
        throw CapabilityError(std::string("no cell produced ") + phase_name(target) +
                              "; the closest the platform gets is " + phase_name(fallback) +
                              ". The robots are not capable of this behavior as modeled; "
                              "improve the hardware or recalibrate before retrying");
    }

    // interior depth: Chebyshev grid distance to the nearest off-target cell;
    // a diagram with no such cell caps the depth at the largest axis extent
    int depth_cap = 0;
    for (const AxisSpec& a : diagram.axes)
        depth_cap = std::max(depth_cap, static_cast<int>(a.values.size()) - 1);
    std::vector<std::vector<std::size_t>> indices(cells);
    for (std::size_t c = 0; c < cells; ++c) indices[c] = diagram.cell_index(c);
    auto interior = [&](std::size_t c) {
        int best = depth_cap;
        for (std::size_t d = 0; d < cells; ++d) {
            if (diagram.cells[d].modal == target && diagram.cells[d].errors == 0) continue;
            int cheb = 0;
            for (std::size_t a = 0; a < indices[c].size(); ++a) {
                int diff = std::abs(static_cast<int>(indices[c][a]) -
                                    static_cast<int>(indices[d][a]));
                cheb = std::max(cheb, diff);
            }
            best = std::min(best, cheb);
        }
        return best;
    };

    Recommendation rec;
    double best_b = -1.0;
    int best_depth = -1;
    for (std::size_t c = 0; c < cells; ++c) {
        double b = static_cast<double>(
                       diagram.cells[c].counts[static_cast<std::size_t>(target)]) /
                   static_cast<double>(diagram.seeds_per_cell);
        if (b < best_b) continue;
        int depth = interior(c);
        if (b > best_b || depth > best_depth) {
            best_b = b;
            best_depth = depth;
            rec.flat_index = c;
            rec.values = diagram.cell_values(c);
            rec.b_target = b;
            rec.interior_steps = depth;
        }
    }
    return rec;
}

}  // namespace swarmsim
