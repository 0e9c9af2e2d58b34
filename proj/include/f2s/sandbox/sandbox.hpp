#pragma once

// Compiles and runs programs under resource limits, compares their outputs and
// computes Computational Accuracy.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2s/corpus/corpus.hpp"

namespace f2s::sandbox {

/// No toolchain is configured for a language, or its executable is missing.
/// Distinct from a program's own compile error.
class ToolchainMissingError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct ExecLimits {
  double wall_time_s = 10;
  std::size_t memory_bytes = std::size_t{512} << 20;
  std::size_t max_output = std::size_t{8} << 20;

  void validate() const;
};

enum class ExecStatus { ok, compile_error, runtime_error, timeout, output_overflow };
std::string_view status_tag(ExecStatus s);

struct ExecutionResult {
  ExecStatus status = ExecStatus::ok;
  std::string stdout_data;  // empty unless ok or runtime_error
  std::string stderr_data;
  long wall_ms = 0;
  int exit_code = 0;    // meaningful when the process exited
  int term_signal = 0;  // non-zero when killed by a signal
};

/// How one language is built and started. Arguments may use {src} (source
/// file), {bin} (output binary), {dir} (build directory) and {class} (Java
/// main class). An empty `compile` means the language is interpreted.
struct Toolchain {
  std::vector<std::string> compile;
  std::vector<std::string> run;
  /// File name for the source; {class} expands to the detected main class.
  std::string source_name;
  /// Apply the memory limit as an address-space cap. Managed runtimes that
  /// reserve large virtual ranges (JVM, Go) need this off.
  bool limit_address_space = true;
};

using ToolchainMap = std::map<Language, Toolchain>;

/// gcc/g++/go/javac/python3 commands found on a typical Linux machine.
ToolchainMap default_toolchains();

/// Name of the public class declaring main, falling back to "Main".
std::string java_main_class(std::string_view source);

struct OutputPolicy {
  /// Compare whitespace-separated tokens, numerically when both parse as
  /// numbers, with absolute-or-relative tolerance `epsilon`.
  bool numeric = false;
  double epsilon = 1e-6;
};

/// CRLF to LF, trailing whitespace stripped per line, trailing blank lines
/// dropped; a non-empty result ends with exactly one newline.
std::string normalize_output(std::string_view text);
bool compare_outputs(std::string_view a, std::string_view b, const OutputPolicy& policy = {});

class Sandbox {
 public:
  /// `work_dir` holds the binary cache and per-run scratch directories.
  Sandbox(ToolchainMap toolchains, std::filesystem::path work_dir,
          ExecLimits compile_limits = {60, std::size_t{2} << 30, std::size_t{1} << 20});
  ~Sandbox();

  /// Compiles on first use (cached by content hash, compile errors included)
  /// and runs the program with `input` on stdin.
  ExecutionResult run_program(const CodeSnippet& code, const std::string& input,
                              const ExecLimits& limits);

  /// Throws ToolchainMissingError when `lang` cannot be built or run here.
  void require_toolchain(Language lang) const;
  bool has_toolchain(Language lang) const;

  /// Number of compiler invocations so far.
  std::size_t compilations() const { return compilations_.load(); }

  const std::filesystem::path& work_dir() const { return work_dir_; }

 private:
  struct Build;
  struct Cache;
  std::shared_ptr<const Build> build(const CodeSnippet& code, const Toolchain& tc);

  ToolchainMap toolchains_;
  std::filesystem::path work_dir_;
  ExecLimits compile_limits_;
  std::unique_ptr<Cache> cache_;
  std::atomic<std::size_t> compilations_{0};
};

enum class Category { pass, compile_error, runtime_error, incorrect_output, timeout };
std::string_view category_tag(Category c);
inline constexpr Category kCategories[] = {Category::pass, Category::compile_error,
                                           Category::runtime_error, Category::incorrect_output,
                                           Category::timeout};

struct InputOutcome {
  std::size_t input_id = 0;
  ExecutionResult src_result;
  ExecutionResult tgt_result;
  bool match = false;
  /// Only with DiffOptions::repeat: the source gave different output twice.
  bool unstable = false;
};

struct DiffTestReport {
  std::vector<InputOutcome> per_input;
  bool pass_all = false;
  Category category = Category::pass;
};

/// The source program failed on some input, so the pair says nothing about the
/// translation.
class PairInvalidError : public Error {
 public:
  PairInvalidError(std::size_t input_id, ExecutionResult result);
  std::size_t input_id;
  ExecutionResult result;
};

struct DiffOptions {
  ExecLimits limits;
  OutputPolicy policy;
  int jobs = 1;
  /// Run the source twice per input and flag unstable outputs.
  bool repeat = false;
};

/// Runs both programs on every input. The reference for each input is its
/// expected_output when present, otherwise the source's stdout. The category
/// is the target's worst failure: compile_error > timeout > runtime_error
/// (output overflow included) > incorrect_output.
DiffTestReport differential_test(Sandbox& sandbox, const CodeSnippet& src,
                                 const CodeSnippet& tgt, const std::vector<TestCase>& tests,
                                 const DiffOptions& options = {});

/// Category from per-input outcomes by the precedence above.
Category categorize(const std::vector<InputOutcome>& per_input);

struct CaSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  double ca = 0;
  std::map<Category, std::size_t> counts;
};

/// Throws ArgumentError on an empty list.
CaSummary compute_ca(const std::vector<DiffTestReport>& reports);

struct Materialized {
  std::vector<TestCase> tests;
  /// Inputs whose stored expected output disagrees with a fresh run; the
  /// stored value is kept.
  std::vector<std::string> warnings;
};

/// Fills missing expected outputs with the source's normalised stdout. Throws
/// PairInvalidError naming the first input where the source fails.
Materialized materialize_expected(Sandbox& sandbox, const CodeSnippet& src,
                                  const std::vector<TestCase>& tests, const ExecLimits& limits,
                                  int jobs = 1);

nlohmann::ordered_json to_json(const ExecutionResult& r);
nlohmann::ordered_json to_json(const DiffTestReport& r);
nlohmann::ordered_json to_json(const CaSummary& s);

}  // namespace f2s::sandbox
