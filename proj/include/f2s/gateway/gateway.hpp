#pragma once

// Uniform client for completion, label-scoring, teacher-forced log-probability
// and embedding endpoints.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "f2s/support/error.hpp"

namespace f2s::gateway {

/// Endpoint unreachable or still failing after the last retry.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// The endpoint answered, but not with something usable.
class ResponseError : public Error {
 public:
  using Error::Error;
};

/// Prompt plus continuation exceeds the model's context window.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// The endpoint lacks a required capability (log-probabilities, echo).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

struct GenerationParams {
  double temperature = 0.7;
  int max_tokens = 1024;
  std::vector<std::string> stop;
  int samples = 1;
  /// Ask for per-token log-probabilities of each generated candidate.
  bool logprobs = false;

  /// Throws ArgumentError when a field is out of range.
  void validate() const;
};

struct TokenLogProbs {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;  // natural log, aligned with tokens

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  /// Throws ResponseError on misaligned vectors or a positive log-probability.
  void validate() const;
};

struct Completion {
  std::string text;  // raw, before code extraction
  std::optional<TokenLogProbs> logprobs;
};

struct LabelLogits {
  std::map<std::string, double> label_logits;
};

class Gateway {
 public:
  virtual ~Gateway() = default;

  /// Returns exactly params.samples candidates.
  virtual std::vector<Completion> complete(const std::string& prompt,
                                           const GenerationParams& params) = 0;
  /// One logit per label; labels the endpoint did not report are floor-filled.
  virtual LabelLogits score_labels(const std::string& prompt,
                                   const std::vector<std::string>& labels) = 0;
  /// Log-probabilities of the continuation's tokens given the prompt.
  virtual TokenLogProbs token_logprobs(const std::string& prompt,
                                       const std::string& continuation) = 0;
  virtual std::vector<double> embed(const std::string& text) = 0;
};

inline constexpr double kLabelFloorOffset = 10.0;

/// Keeps the observed labels verbatim and fills every missing label with
/// (min observed - 10). Throws ArgumentError on an empty label list and
/// ResponseError when none of the labels was observed.
LabelLogits floor_fill(const std::map<std::string, double>& observed,
                       const std::vector<std::string>& labels);

/// Cuts `text` at the earliest occurrence of any stop string.
std::string apply_stop(std::string_view text, const std::vector<std::string>& stop);

inline constexpr std::string_view kEndOfCode = "End of Code";

/// Code from a raw completion: truncated at "End of Code" (dropping a comment
/// marker left dangling on that line), then the body of the first markdown
/// fence if there is one, with surrounding blank space trimmed.
std::string extract_code(std::string_view completion);

/// Splits text into tokens of leading whitespace plus a non-space run; trailing
/// whitespace joins the last token. Concatenating the tokens restores the text.
std::vector<std::string> whitespace_tokens(std::string_view text);

struct MockConfig {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> fixtures;
  std::size_t context_limit = 4096;  // whitespace tokens
  std::size_t embedding_dim = 256;
};

/// Offline gateway. Responses come from a JSONL fixture file (matched by
/// request key or by a substring of the prompt) and otherwise from seeded
/// synthesis, so every answer is a pure function of (seed, request).
class MockGateway : public Gateway {
 public:
  explicit MockGateway(MockConfig config = {});

  std::vector<Completion> complete(const std::string& prompt,
                                   const GenerationParams& params) override;
  LabelLogits score_labels(const std::string& prompt,
                           const std::vector<std::string>& labels) override;
  TokenLogProbs token_logprobs(const std::string& prompt,
                               const std::string& continuation) override;
  std::vector<double> embed(const std::string& text) override;

  /// Fixture key of a request: sha256 hex of op, a newline, then the payload
  /// (for token_logprobs the payload is prompt, a 0x1f byte, continuation).
  static std::string request_key(std::string_view op, std::string_view payload);

  std::size_t fixture_count() const;

  struct Fixtures;

 private:
  MockConfig config_;
  std::shared_ptr<const Fixtures> fixtures_;
};

struct HttpConfig {
  std::string completion_url;  // e.g. https://host/v1/completions
  std::string embedding_url;   // e.g. https://host/v1/embeddings
  std::string model;
  std::string embedding_model;
  int max_attempts = 3;
  int backoff_ms = 500;  // doubled after each failed attempt
  int max_backoff_ms = 8000;
  int max_in_flight = 8;
  int timeout_s = 120;
  int top_logprobs = 10;
  /// Environment variable holding the bearer token; keys never live in files.
  std::string api_key_env = "F2S_API_KEY";

  void validate() const;
};

/// Client for OpenAI-style legacy completion and embedding endpoints.
class HttpGateway : public Gateway {
 public:
  explicit HttpGateway(HttpConfig config);
  ~HttpGateway() override;

  std::vector<Completion> complete(const std::string& prompt,
                                   const GenerationParams& params) override;
  LabelLogits score_labels(const std::string& prompt,
                           const std::vector<std::string>& labels) override;
  TokenLogProbs token_logprobs(const std::string& prompt,
                               const std::string& continuation) override;
  std::vector<double> embed(const std::string& text) override;

  /// HTTP attempts made so far, retries included.
  std::size_t attempts() const { return attempts_.load(); }

 private:
  struct Limiter;
  std::string post(const std::string& url, const std::string& body);

  HttpConfig config_;
  std::string api_key_;
  std::unique_ptr<Limiter> limiter_;
  std::atomic<std::size_t> attempts_{0};
};

}  // namespace f2s::gateway
