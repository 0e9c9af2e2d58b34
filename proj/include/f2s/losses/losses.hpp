#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "f2s/support/error.hpp"

namespace f2s::losses {

/// How a token log-probability sequence becomes a sequence score.
///  - lognorm: mean token log-probability (length normalised).
///  - literal: the sequence probability itself, exp(sum of log-probabilities).
enum class ScoreMode { lognorm, literal };

std::string_view score_mode_name(ScoreMode mode);
ScoreMode parse_score_mode(std::string_view name);

struct LossConfig {
  double beta = 0.6;
  ScoreMode score_mode = ScoreMode::lognorm;
};

class LossError : public Error {
 public:
  using Error::Error;
};

/// Negative log-likelihood of a teacher-forced sequence: -sum(logprobs).
double ift_loss(std::span<const double> logprobs);

double sequence_score(std::span<const double> logprobs, ScoreMode mode);

/// Softmax cross-entropy of the positive against {positive} ∪ negatives,
/// evaluated with a shifted log-sum-exp. Zero when there are no negatives.
double list_loss(double pos_score, std::span<const double> neg_scores);

/// Gradient of list_loss with respect to [pos_score, neg_scores...].
std::vector<double> list_loss_grad(double pos_score, std::span<const double> neg_scores);

/// beta * list + (1 - beta) * ift.
double style_loss(double list_value, double ift_value, const LossConfig& cfg);

/// Largest relative error between list_loss_grad and central finite
/// differences with step h. Relative error uses max(|a|, |b|, 1e-8) as scale.
double list_loss_grad_check(double pos_score, std::span<const double> neg_scores,
                            double h = 1e-5);

}  // namespace f2s::losses
