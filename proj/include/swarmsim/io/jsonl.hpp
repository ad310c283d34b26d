#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmsim/core/world.hpp"

namespace swarmsim {

/// Line-delimited JSON writer; one dump() per line.
class JsonlWriter {
public:
    explicit JsonlWriter(const std::string& path);
    void write(const nlohmann::ordered_json& j);

private:
    std::ofstream out_;
    std::string path_;
};

/// Trial sink producing the trajectory log: a meta line, then one state
/// line per (tick, agent) at the log stride, with collision events
/// interleaved at the tick they happened.
class JsonlTrialSink final : public TrialSink {
public:
    explicit JsonlTrialSink(const std::string& path) : writer_(path) {}
    void on_begin(const TrialConfig& config) override;
    void on_record(const TrajectoryRecord& r) override;
    void on_event(const CollisionEvent& e) override;

private:
    JsonlWriter writer_;
};

struct TrajectoryFile {
    nlohmann::ordered_json meta;
    std::vector<TrajectoryRecord> records;
    std::vector<CollisionEvent> events;
};

TrajectoryFile load_trajectory(const std::string& path);

}  // namespace swarmsim
