#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2s/corpus/language.hpp"
#include "f2s/corpus/prompt_template.hpp"
#include "f2s/support/error.hpp"

namespace f2s {

enum class Origin { mined, generated, manual };

std::string_view origin_tag(Origin origin);
std::optional<Origin> parse_origin(std::string_view tag);

/// One program in one language.
struct CodeSnippet {
  std::string snippet_id;
  Language language = Language::unknown;
  /// Tag as written in the source file; differs from language_tag(language)
  /// only for unknown languages.
  std::string language_tag;
  std::string source_text;
  Origin origin = Origin::mined;

  static CodeSnippet make(std::string id, Language lang, std::string text,
                          Origin origin = Origin::mined);

  bool operator==(const CodeSnippet&) const = default;
};

/// Test input and, optionally, the expected output. Both are raw bytes.
struct TestCase {
  std::string input;
  std::optional<std::string> expected_output;

  bool operator==(const TestCase&) const = default;
};

struct Problem {
  std::string problem_id;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<TestCase> tests;
  std::vector<CodeSnippet> solutions;

  /// `meta.eval_only == true`; such problems may omit tests.
  bool eval_only() const;
  std::vector<const CodeSnippet*> solutions_in(Language lang) const;

  bool operator==(const Problem&) const = default;
};

struct SkippedLine {
  std::size_t line_number = 0;  // 1-based
  std::string reason;
};

struct ProblemSet {
  std::vector<Problem> problems;
  std::vector<SkippedLine> skipped;

  const Problem* find(std::string_view problem_id) const;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

/// Reads newline-delimited JSON, one problem per line. Malformed lines are
/// skipped and recorded; a duplicate problem_id, an unreadable file, or a file
/// where every non-blank line fails throws CorpusError.
ProblemSet load_corpus(const std::filesystem::path& path);

/// Inverse of load_corpus.
void save_corpus(const std::vector<Problem>& problems, const std::filesystem::path& path);

nlohmann::ordered_json problem_to_json(const Problem& p);
/// Throws CorpusError describing the first schema violation.
Problem problem_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json snippet_to_json(const CodeSnippet& s);
CodeSnippet snippet_from_json(const nlohmann::ordered_json& j);

struct ValidationReport {
  std::string problem_id;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool valid() const { return violations.empty(); }
};

ValidationReport validate_problem(const Problem& p);

/// One function-learning example: rendered translation prompt and target code.
struct IftRecord {
  std::string prompt;
  std::string completion;
  Language src_lang = Language::unknown;
  Language tgt_lang = Language::unknown;
};

/// Renders `prompt` with the source code and language names. The result always
/// contains src.source_text verbatim.
IftRecord make_ift_record(const CodeSnippet& src, const CodeSnippet& tgt,
                          const PromptTemplate& prompt);

/// Source snippet, chosen positive translation and its style-divergent
/// negatives. neg_cssim[i] is the style similarity of tgt_negs[i] to tgt_pos.
struct StyleRecord {
  CodeSnippet src;
  CodeSnippet tgt_pos;
  std::vector<CodeSnippet> tgt_negs;
  std::vector<double> neg_cssim;
};

/// Throws CorpusError unless the record has at least one negative, aligned
/// similarity values, and every value strictly below alpha.
void check_style_record(const StyleRecord& r, double alpha);

/// Writes one JSON object per line in input order and returns the count.
std::size_t export_ift_dataset(const std::vector<IftRecord>& records,
                               const std::filesystem::path& path);
std::size_t export_style_dataset(const std::vector<StyleRecord>& records,
                                 const std::filesystem::path& path, double alpha);

std::vector<IftRecord> load_ift_dataset(const std::filesystem::path& path);
/// Re-checks the style invariants on every line.
std::vector<StyleRecord> load_style_dataset(const std::filesystem::path& path, double alpha);

}  // namespace f2s
