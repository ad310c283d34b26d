#include "swarmsim/io/jsonl.hpp"

#include "swarmsim/io/csv.hpp"
#include "swarmsim/util/error.hpp"

namespace swarmsim {

JsonlWriter::JsonlWriter(const std::string& path) : out_(path, std::ios::trunc), path_(path) {
    if (!out_) throw Error("cannot write " + path);
}

void JsonlWriter::write(const nlohmann::ordered_json& j) {
    out_ << j.dump() << '\n';
    if (!out_) throw Error("write failed for " + path_);
}

void JsonlTrialSink::on_begin(const TrialConfig& config) {
    writer_.write({{"type", "meta"},
                   {"seed", config.seed},
                   {"n_agents", config.n_agents},
                   {"dt", config.dt},
                   {"duration", config.duration},
                   {"desired_speed", config.desired_speed},
                   {"desired_turn_rate", config.desired_turn_rate},
                   {"arena", {{"width", config.arena.width}, {"height", config.arena.height}}},
                   {"collision_radius", config.collision_radius},
                   {"log_every", config.log_every}});
}

void JsonlTrialSink::on_record(const TrajectoryRecord& r) {
    writer_.write({{"type", "state"},
                   {"tick", r.tick},
                   {"id", r.id},
                   {"x", r.x},
                   {"y", r.y},
                   {"heading", r.heading},
                   {"out", r.y_out},
                   {"u1", r.u1},
                   {"u2", r.u2}});
}

void JsonlTrialSink::on_event(const CollisionEvent& e) {
    writer_.write({{"type", "collision"},
                   {"tick", e.tick},
                   {"i", e.i},
                   {"j", e.j},
                   {"wall", e.j == CollisionEvent::kWall},
                   {"bearing", e.bearing}});
}

TrajectoryFile load_trajectory(const std::string& path) {
    TrajectoryFile file;
    std::vector<std::string> lines = read_lines(path);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(lines[ln]);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ":" + std::to_string(ln + 1) + ": " + e.what());
        }
        std::string type = j.value("type", "");
        if (type == "meta") {
            file.meta = j;
        } else if (type == "state") {
            file.records.push_back({j.at("tick").get<std::uint64_t>(),
                                    j.at("id").get<int>(), j.at("x").get<double>(),
                                    j.at("y").get<double>(), j.at("heading").get<double>(),
                                    j.at("out").get<int>(), j.at("u1").get<double>(),
                                    j.at("u2").get<double>()});
        } else if (type == "collision") {
            file.events.push_back({j.at("tick").get<std::uint64_t>(), j.at("i").get<int>(),
                                   j.at("j").get<int>(), j.at("bearing").get<double>()});
        } else {
            throw ParseError(path + ":" + std::to_string(ln + 1) +
                             ": unknown record type '" + type + "'");
        }
    }
    if (file.meta.is_null()) throw ParseError(path + ": missing meta line");
    return file;
}

}  // namespace swarmsim
