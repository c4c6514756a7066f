#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "anchor/manifest.hpp"

namespace anchor::cli {

// Tracks the inputs and outputs of one command and writes its manifest next
// to the first output.
class RunContext {
 public:
  RunContext(std::string command, std::string config_text, std::uint64_t seed);

  void input(const std::filesystem::path& path);
  void output(const std::filesystem::path& path, std::string_view content);
  void finish();

 private:
  RunManifest manifest_;
  std::vector<std::filesystem::path> output_paths_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace anchor::cli
