#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mint::cli {

/// Record written next to every result. `argv` is the fully resolved
/// argument list (seed included), so replaying it reproduces the result.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  /// Relative paths in argv are resolved against this directory on replay.
  std::string working_directory;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string version;
  std::map<std::string, std::string> input_sha256;  // path -> hex digest
  double duration_seconds = 0.0;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest read_manifest(const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);

const char* tool_version();

}  // namespace mint::cli
