#pragma once

// End-to-end drivers behind the subcommands. Each writes its outputs under
// `out` and returns a summary; per-problem failures are recorded, not thrown.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2s/cli/config.hpp"

namespace f2s::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

struct FunctionFunnel {
  std::size_t problems = 0;
  std::size_t paired = 0;          // have both a source and a target solution
  std::size_t judge_filtered = 0;  // best pair scored at least judge.min_score
  std::size_t difftest_passed = 0;
  std::size_t exported = 0;
  std::size_t failed = 0;  // problems that hit an error
};

/// Recall -> judge -> differential test -> IFT export. Writes ift.jsonl,
/// function_report.jsonl and function_summary.json.
FunctionFunnel build_function_data(const PipelineConfig& cfg, const ProblemSet& corpus,
                                   Language src, Language tgt, const std::filesystem::path& out);

struct StyleFunnel {
  std::size_t problems = 0;
  std::size_t records = 0;
  std::size_t generated = 0;
  std::size_t functional = 0;
  std::size_t negatives = 0;
  std::size_t failed = 0;
  std::map<std::string, std::size_t> ineligible;  // reason -> count
};

/// Style-aware positives -> functional filter -> consensus -> negatives ->
/// style export. Writes style.jsonl, style_report.jsonl and
/// style_summary.json.
StyleFunnel build_style_data(const PipelineConfig& cfg, const ProblemSet& corpus, Language src,
                             Language tgt, const std::filesystem::path& out);

struct CaRow {
  Language src = Language::unknown;
  Language tgt = Language::unknown;
  sandbox::CaSummary summary;
  std::size_t missing = 0;
  std::size_t invalid = 0;  // source program failed; excluded from the total
};

/// Scores translations (JSONL of {problem_id, src_lang, translation}) against
/// the corpus. Without a language filter every pair present in the file is
/// evaluated. Writes ca_reports.jsonl, ca.csv, ca_table.csv, ca_summary.json.
std::vector<CaRow> eval_ca(const PipelineConfig& cfg, const ProblemSet& corpus,
                           const std::filesystem::path& translations,
                           std::optional<Language> src, std::optional<Language> tgt,
                           const std::filesystem::path& out);

/// Parses and runs the command line; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace f2s::cli
