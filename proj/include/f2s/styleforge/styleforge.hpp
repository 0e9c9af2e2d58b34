#pragma once

// Style-learning data: style-aware positives, functional filtering, consensus
// choice of the positive and style-divergent negatives below alpha.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "f2s/corpus/corpus.hpp"
#include "f2s/gateway/gateway.hpp"
#include "f2s/sandbox/sandbox.hpp"
#include "f2s/styledist/styledist.hpp"

namespace f2s::styleforge {

struct StyleDataConfig {
  int m = 10;        // positive candidates per source
  int n = 10;        // negatives kept per record
  double alpha = 0.8;
  double temperature = 0.7;

  void validate() const;
  /// Raw negatives drawn before thresholding: max(2n, m).
  int negative_batch() const;
};

/// No generation produced usable code.
class NoCandidatesError : public Error {
 public:
  using Error::Error;
};

struct Generated {
  std::vector<CodeSnippet> candidates;
  std::vector<std::string> warnings;
};

/// Renders the style-aware prompt, samples m completions and keeps the
/// non-empty extracted code. Ids are "<src id>/pos<i>".
Generated generate_positive_candidates(gateway::Gateway& gw, const PromptTemplate& style_prompt,
                                       const CodeSnippet& src, Language tgt_lang,
                                       const StyleDataConfig& cfg);

struct CandidateSet {
  std::vector<CodeSnippet> all;
  std::vector<sandbox::DiffTestReport> reports;  // aligned with all
  std::vector<std::size_t> functional;           // indices into all, ascending

  std::vector<CodeSnippet> functional_snippets() const;
};

/// Differential-tests every candidate against the source; duplicates stay.
CandidateSet filter_functional(sandbox::Sandbox& sb, std::vector<CodeSnippet> candidates,
                               const CodeSnippet& src, const std::vector<TestCase>& tests,
                               const sandbox::DiffOptions& options);

/// argmax_i sum_{j != i} sim[i][j] over a row-major m x m matrix (the diagonal
/// is ignored); ties go to the smaller index. m = 1 gives 0.
std::size_t consensus_index(const std::vector<double>& sim, std::size_t m);

struct Consensus {
  std::size_t index = 0;
  std::vector<double> totals;  // consensus sum per candidate
};

/// Consensus choice using pairwise style similarity. Throws ArgumentError on
/// an empty set.
Consensus consensus_select(const std::vector<style::StyleProfile>& tplus,
                           const style::IdfTable& idf, int jobs = 1);

struct Negative {
  CodeSnippet code;
  double cssim = 0;
};

struct NegativeSet {
  std::vector<Negative> kept;  // ascending cssim, at most n, all below alpha
  std::size_t generated = 0;
  std::vector<std::string> warnings;
};

/// Samples negative_batch() translations with the plain translation prompt,
/// keeps those whose style similarity to the positive is below alpha, sorted
/// ascending (generation order on ties) and truncated to n. Ids are
/// "<src id>/neg<i>".
NegativeSet collect_negatives(gateway::Gateway& gw, const PromptTemplate& translate_prompt,
                              const CodeSnippet& src, const CodeSnippet& tgt_pos,
                              const StyleDataConfig& cfg, const style::IdfTable& idf);

/// Assembles a record and checks its invariants (CorpusError on violation).
StyleRecord build_style_record(const CodeSnippet& src, const CodeSnippet& tgt_pos,
                               const std::vector<Negative>& negatives, double alpha);

}  // namespace f2s::styleforge
