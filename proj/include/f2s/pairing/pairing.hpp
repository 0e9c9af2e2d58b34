#pragma once

// Relevance-driven pairing: embedding recall, rating-scale judge, best pair.

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "f2s/corpus/corpus.hpp"
#include "f2s/gateway/gateway.hpp"

namespace f2s::pairing {

enum class JudgeMode { aggregate, explicit_label };
std::string_view judge_mode_tag(JudgeMode m);
std::optional<JudgeMode> parse_judge_mode(std::string_view tag);

struct JudgeConfig {
  int K = 5;
  int recall_k = 10;
  JudgeMode mode = JudgeMode::aggregate;

  /// K must be in [2, 9] so every label is a single digit.
  void validate() const;
};

struct JudgeDistribution {
  std::vector<double> logits;  // s_1..s_K
  std::vector<double> probs;   // softmax(logits)
  double score = 0;            // sum_k probs[k-1] * k
};

/// Softmax over the label logits (max-shifted) and the expected label.
JudgeDistribution judge_distribution(const std::vector<double>& logits);

/// The judge's generated label could not be read as an integer in [1, K].
class ScoringError : public Error {
 public:
  using Error::Error;
};

/// Every judge call for a source failed.
class AllCandidatesFailedError : public Error {
 public:
  using Error::Error;
};

/// Throws ArgumentError on mismatched dimensions or a zero vector.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Embeds snippet texts through a gateway, memoised by content hash. With a
/// cache file, vectors are loaded at construction and appended as computed.
class Embedder {
 public:
  explicit Embedder(gateway::Gateway& gw, std::optional<std::filesystem::path> cache_file = {});
  std::vector<double> embed(const std::string& text);

 private:
  gateway::Gateway& gw_;
  std::optional<std::filesystem::path> cache_file_;
  std::mutex mutex_;
  std::map<std::string, std::vector<double>> memo_;
};

struct Recalled {
  CodeSnippet candidate;
  double similarity = 0;
};

/// The min(k, |candidates|) most similar candidates, descending by cosine
/// similarity of embeddings, ties by ascending snippet_id.
std::vector<Recalled> recall_top_k(Embedder& embedder, const CodeSnippet& src,
                                   const std::vector<CodeSnippet>& candidates, int k);

/// Judge prompt for any K. K = 5 renders the template unchanged; other K
/// rewrite the scale and use equally spaced descriptors from the five in the
/// template: label k takes descriptor round((k-1)*4/(K-1)) + 1.
class JudgePrompt {
 public:
  explicit JudgePrompt(PromptTemplate base);
  std::string render(const CodeSnippet& src, const CodeSnippet& tgt, int K) const;
  /// Template text with the rubric generalised to K labels.
  std::string rubric_template(int K) const;

 private:
  PromptTemplate base_;
  std::vector<std::string> descriptors_;  // five, in label order
  std::size_t rubric_begin_ = 0, rubric_end_ = 0;
};

/// Labels "1".."K".
std::vector<std::string> judge_labels(int K);

JudgeDistribution judge_score(gateway::Gateway& gw, const JudgePrompt& prompt,
                              const CodeSnippet& src, const CodeSnippet& tgt,
                              const JudgeConfig& cfg);

/// First integer in the text; ScoringError when absent or outside [1, K].
int parse_label(std::string_view generation, int K);

int explicit_score(gateway::Gateway& gw, const JudgePrompt& prompt, const CodeSnippet& src,
                   const CodeSnippet& tgt, const JudgeConfig& cfg);

struct JudgedCandidate {
  CodeSnippet candidate;
  double similarity = 0;
  std::optional<JudgeDistribution> judgement;  // empty when the call failed
  std::string error;
};

struct PairChoice {
  CodeSnippet tgt;
  JudgeDistribution judgement;  // explicit mode: only `score` is set
  double similarity = 0;
  std::vector<JudgedCandidate> judged;  // in recall order
};

/// Recall, judge every recalled candidate (up to `jobs` at once), then take
/// the highest score; ties go to higher similarity, then smaller snippet_id.
PairChoice select_best_pair(gateway::Gateway& gw, Embedder& embedder, const JudgePrompt& prompt,
                            const CodeSnippet& src, const std::vector<CodeSnippet>& candidates,
                            const JudgeConfig& cfg, int jobs = 1);

}  // namespace f2s::pairing
