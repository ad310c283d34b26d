#include "swarmsim/sweep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "swarmsim/io/csv.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {

namespace {

const char* phase_color(Phase p) {
    switch (p) {
        case Phase::Dispersion: return "#4878b0";
        case Phase::StableMilling: return "#3a9e4e";
        case Phase::SemiStableMilling: return "#e0a32e";
        case Phase::CollidingUnstable: return "#c8442c";
    }
    return "#000000";
}

std::size_t nearest_index(const std::vector<double>& grid, double v) {
    std::size_t best = 0;
    double gap = std::fabs(grid[0] - v);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double g = std::fabs(grid[i] - v);
        if (g < gap) {
            gap = g;
            best = i;
        }
    }
    return best;
}

void text(std::ostringstream& out, double x, double y, const std::string& s,
          const char* anchor, int size, const char* extra = "") {
    out << "<text x=\"" << format_double(x) << "\" y=\"" << format_double(y)
        << "\" text-anchor=\"" << anchor << "\" font-family=\"sans-serif\" font-size=\""
        << size << "\"" << extra << ">" << s << "</text>\n";
}

}  // namespace

std::vector<OverlayPoint> load_overlay(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_array()) throw ParseError(path + ": overlay must be a JSON array");
    std::vector<OverlayPoint> points;
    for (const auto& item : j) {
        OverlayPoint p;
        if (!item.contains("values") || !item.contains("phase"))
            throw ParseError(path + ": overlay entries need 'values' and 'phase'");
        for (const auto& v : item.at("values")) p.values.push_back(v.get<double>());
        p.phase = phase_from_name(item.at("phase").get<std::string>());
        points.push_back(std::move(p));
    }
    return points;
}

std::string diagram_svg(const PhaseDiagram& diagram,
                        const std::vector<OverlayPoint>& overlay) {
    if (diagram.axes.size() != 2)
        throw Error("only 2-axis diagrams can be rendered; slice the CSV first");
    if (diagram.cells.size() != diagram.cell_count())
        throw Error("diagram is incomplete");

    const std::vector<double>& xs = diagram.axes[0].values;
    const std::vector<double>& ys = diagram.axes[1].values;
    const double cell = 44.0;
    const double left = 64.0, top = 16.0, bottom = 50.0, legend_w = 170.0;
    const double plot_w = cell * static_cast<double>(xs.size());
    const double plot_h = cell * static_cast<double>(ys.size());
    const double width = left + plot_w + 18.0 + legend_w;
    const double height = top + plot_h + bottom;

    auto cx = [&](std::size_t ix) { return left + (static_cast<double>(ix) + 0.5) * cell; };
    auto cy = [&](std::size_t iy) {
        return top + (static_cast<double>(ys.size() - 1 - iy) + 0.5) * cell;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(width)
        << "\" height=\"" << format_double(height) << "\" viewBox=\"0 0 "
        << format_double(width) << " " << format_double(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        for (std::size_t iy = 0; iy < ys.size(); ++iy) {
            const CellResult& c = diagram.cells[ix * ys.size() + iy];
            int modal_count = c.counts[static_cast<std::size_t>(c.modal)];
            double opacity = static_cast<double>(modal_count) /
                             static_cast<double>(diagram.seeds_per_cell);
            out << "<rect x=\"" << format_double(cx(ix) - cell / 2) << "\" y=\""
                << format_double(cy(iy) - cell / 2) << "\" width=\"" << format_double(cell)
                << "\" height=\"" << format_double(cell) << "\" fill=\""
                << phase_color(c.modal) << "\" fill-opacity=\"" << format_double(opacity)
                << "\" stroke=\"" << (c.errors > 0 ? "#c8442c" : "#999999")
                << "\" stroke-width=\"" << (c.errors > 0 ? "1.5" : "0.5") << "\"/>\n";
        }
    }

    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        text(out, cx(ix), top + plot_h + 14.0, format_double(xs[ix]), "middle", 10);
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
        text(out, left - 6.0, cy(iy) + 3.5, format_double(ys[iy]), "end", 10);
    text(out, left + plot_w / 2, top + plot_h + 34.0, diagram.axes[0].name, "middle", 12);
    {
        std::ostringstream extra;
        extra << " transform=\"rotate(-90 16 " << format_double(top + plot_h / 2) << ")\"";
        text(out, 16.0, top + plot_h / 2, diagram.axes[1].name, "middle", 12,
             extra.str().c_str());
    }

    double lx = left + plot_w + 18.0;
    double ly = top + 8.0;
    for (int p = 0; p < kPhaseCount; ++p) {
        out << "<rect x=\"" << format_double(lx) << "\" y=\"" << format_double(ly)
            << "\" width=\"12\" height=\"12\" fill=\"" << phase_color(static_cast<Phase>(p))
            << "\" stroke=\"#666666\" stroke-width=\"0.5\"/>\n";
        text(out, lx + 18.0, ly + 10.0, phase_name(static_cast<Phase>(p)), "start", 10);
        ly += 18.0;
    }
    text(out, lx, ly + 12.0, "opacity: modal share", "start", 9);
    if (!overlay.empty())
        text(out, lx, ly + 26.0, "letters: real runs", "start", 9);

    for (const OverlayPoint& p : overlay) {
        if (p.values.size() != 2)
            throw Error("overlay point needs one value per diagram axis");
        double mx = cx(nearest_index(xs, p.values[0]));
        double my = cy(nearest_index(ys, p.values[1]));
        out << "<circle cx=\"" << format_double(mx) << "\" cy=\"" << format_double(my)
            << "\" r=\"9\" fill=\"white\" fill-opacity=\"0.9\" stroke=\"#222222\" "
               "stroke-width=\"1\"/>\n";
        text(out, mx, my + 4.0, std::string(1, phase_letter(p.phase)), "middle", 11,
             " font-weight=\"bold\"");
    }

    out << "</svg>\n";
    return out.str();
}

std::string trajectory_svg(const TrajectoryFile& traj, int frames) {
    if (frames < 1) throw Error("frame count must be >= 1");
    if (traj.records.empty()) throw Error("trajectory has no state records");

    double aw = 10.0, ah = 10.0, dt = 0.0;
    if (traj.meta.contains("arena")) {
        aw = traj.meta["arena"]["width"].get<double>();
        ah = traj.meta["arena"]["height"].get<double>();
    }
    if (traj.meta.contains("dt")) dt = traj.meta["dt"].get<double>();

    std::set<std::uint64_t> tick_set;
    for (const TrajectoryRecord& r : traj.records) tick_set.insert(r.tick);
    std::vector<std::uint64_t> ticks(tick_set.begin(), tick_set.end());

    std::vector<std::uint64_t> chosen;
    if (frames == 1 || ticks.size() == 1) {
        chosen.push_back(ticks.back());
    } else {
        for (int f = 0; f < frames; ++f) {
            double pos = static_cast<double>(f) * static_cast<double>(ticks.size() - 1) /
                         static_cast<double>(frames - 1);
            std::uint64_t t = ticks[static_cast<std::size_t>(std::llround(pos))];
            if (chosen.empty() || chosen.back() != t) chosen.push_back(t);
        }
    }

    const double box_h = 150.0;
    const double scale = box_h / ah;
    const double box_w = aw * scale;
    const double gap = 14.0, top = 10.0, label_h = 20.0;
    const double width = gap + static_cast<double>(chosen.size()) * (box_w + gap);
    const double height = top + box_h + label_h;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(width)
        << "\" height=\"" << format_double(height) << "\" viewBox=\"0 0 "
        << format_double(width) << " " << format_double(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t f = 0; f < chosen.size(); ++f) {
        double ox = gap + static_cast<double>(f) * (box_w + gap);
        out << "<rect x=\"" << format_double(ox) << "\" y=\"" << format_double(top)
            << "\" width=\"" << format_double(box_w) << "\" height=\"" << format_double(box_h)
            << "\" fill=\"#fbfbfb\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        for (const TrajectoryRecord& r : traj.records) {
            if (r.tick != chosen[f]) continue;
            double px = ox + (r.x + aw / 2) * scale;
            double py = top + (ah / 2 - r.y) * scale;  // y up in world, down in svg
            double hx = px + 6.0 * std::cos(r.heading);
            double hy = py - 6.0 * std::sin(r.heading);
            out << "<line x1=\"" << format_double(px) << "\" y1=\"" << format_double(py)
                << "\" x2=\"" << format_double(hx) << "\" y2=\"" << format_double(hy)
                << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
            out << "<circle cx=\"" << format_double(px) << "\" cy=\"" << format_double(py)
                << "\" r=\"3\" fill=\"#1f6feb\"/>\n";
        }
        std::ostringstream label;
        label << "t = " << format_double(static_cast<double>(chosen[f]) * dt) << " s";
        text(out, ox + box_w / 2, top + box_h + 14.0, label.str(), "middle", 10);
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace swarmsim
