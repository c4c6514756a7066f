#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anchor {

std::string sha256_hex(std::string_view data);
// Throws DataError if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct RunManifest {
  std::string command;
  std::string config_hash;  // sha256 of the canonical option text
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256
  std::uint64_t seed = 0;
  std::string tool_version;
  double wall_time_seconds = 0.0;

  std::string to_json() const;
};

// "<output>.manifest.json"
std::filesystem::path manifest_path(const std::filesystem::path& output);

std::string_view tool_version();

}  // namespace anchor
