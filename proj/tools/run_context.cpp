#include "run_context.hpp"

namespace anchor::cli {

RunContext::RunContext(std::string command, std::string config_text, std::uint64_t seed)
    : start_(std::chrono::steady_clock::now()) {
  manifest_.command = std::move(command);
  manifest_.config_hash = sha256_hex(config_text);
  manifest_.seed = seed;
  manifest_.tool_version = std::string(tool_version());
}

void RunContext::input(const std::filesystem::path& path) {
  manifest_.inputs.emplace_back(path.string(), sha256_file(path));
}

void RunContext::output(const std::filesystem::path& path, std::string_view content) {
  write_file_atomic(path, content);
  output_paths_.push_back(path);
  manifest_.outputs.emplace_back(path.string(), sha256_hex(content));
}

void RunContext::finish() {
  if (output_paths_.empty()) return;
  manifest_.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  write_file_atomic(manifest_path(output_paths_.front()), manifest_.to_json());
}

}  // namespace anchor::cli
