#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace f2s::sandbox::detail {

struct ProcessLimits {
  double wall_time_s = 10;
  std::optional<std::size_t> address_space;  // bytes
  std::size_t max_output = std::size_t{8} << 20;
  bool deny_network = false;
};

struct ProcessResult {
  int exit_code = 0;
  int term_signal = 0;
  bool timed_out = false;
  bool overflow = false;
  std::string out;
  std::string err;
  long wall_ms = 0;
};

/// Absolute path of an executable: `name` itself when it contains a slash,
/// otherwise the first match on PATH.
std::optional<std::filesystem::path> find_executable(const std::string& name);

/// Runs argv in its own process group with `cwd` as working directory and
/// `input` on stdin. The whole group is killed on timeout or output overflow.
ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd,
                          const std::string& input, const ProcessLimits& limits);

}  // namespace f2s::sandbox::detail
