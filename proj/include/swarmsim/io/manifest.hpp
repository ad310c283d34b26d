#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace swarmsim {

std::uint64_t fnv1a(std::string_view bytes);
std::string digest_hex(std::uint64_t digest);
std::string digest_file(const std::string& path);

/// Provenance record written next to every output directory: tool version,
/// root seed, the resolved config, and digests of every input file.
/// Timestamps are informational; identity lives in the digests.
nlohmann::ordered_json make_manifest(const std::string& command,
                                     std::uint64_t root_seed,
                                     const nlohmann::ordered_json& resolved_config,
                                     const std::vector<std::string>& input_paths);

/// Atomic write of <dir>/manifest.json.
void write_manifest(const std::string& dir, const nlohmann::ordered_json& manifest);

}  // namespace swarmsim
