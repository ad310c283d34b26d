#include "swarmsim/io/manifest.hpp"

#include <chrono>
#include <cstdio>

#include "swarmsim/io/csv.hpp"

namespace swarmsim {
namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(digest));
    return buf;
}

std::string digest_file(const std::string& path) {
    return digest_hex(fnv1a(read_file(path)));
}

nlohmann::ordered_json make_manifest(const std::string& command,
                                     std::uint64_t root_seed,
                                     const nlohmann::ordered_json& resolved_config,
                                     const std::vector<std::string>& input_paths) {
    nlohmann::ordered_json m;
    m["tool"] = "swarmsim";
    m["version"] = SWARMSIM_VERSION;
    m["command"] = command;
    m["root_seed"] = root_seed;
    m["config_digest"] = digest_hex(fnv1a(resolved_config.dump()));
    m["config"] = resolved_config;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    for (const std::string& path : input_paths) inputs[path] = digest_file(path);
    m["inputs"] = inputs;
    m["written"] = now_iso8601();
    return m;
}

void write_manifest(const std::string& dir, const nlohmann::ordered_json& manifest) {
    write_file_atomic(dir + "/manifest.json", manifest.dump(2) + "\n");
}

}  // namespace swarmsim
