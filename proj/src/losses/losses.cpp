#include "f2s/losses/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace f2s::losses {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw LossError(std::string("non-finite ") + what);
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) require_finite(v, what);
}

void require_non_empty(std::span<const double> logprobs) {
  if (logprobs.empty()) throw LossError("empty token sequence");
  require_finite(logprobs, "log-probability");
  for (double v : logprobs)
    if (v > 0) throw LossError("log-probability above zero");
}

// log(sum(exp(x))) over pos and negs.
double log_sum_exp(double pos, std::span<const double> negs) {
  double hi = pos;
  for (double v : negs) hi = std::max(hi, v);
  double acc = std::exp(pos - hi);
  for (double v : negs) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

}  // namespace

std::string_view score_mode_name(ScoreMode mode) {
  return mode == ScoreMode::literal ? "literal" : "lognorm";
}

ScoreMode parse_score_mode(std::string_view name) {
  if (name == "lognorm") return ScoreMode::lognorm;
  if (name == "literal") return ScoreMode::literal;
  throw ArgumentError("unknown score mode \"" + std::string(name) + "\"");
}

double ift_loss(std::span<const double> logprobs) {
  require_non_empty(logprobs);
  double sum = std::accumulate(logprobs.begin(), logprobs.end(), 0.0);
  return sum == 0.0 ? 0.0 : -sum;
}

double sequence_score(std::span<const double> logprobs, ScoreMode mode) {
  require_non_empty(logprobs);
  double sum = std::accumulate(logprobs.begin(), logprobs.end(), 0.0);
  if (mode == ScoreMode::literal) return std::exp(sum);
  return sum / static_cast<double>(logprobs.size());
}

double list_loss(double pos_score, std::span<const double> neg_scores) {
  require_finite(pos_score, "positive score");
  require_finite(neg_scores, "negative score");
  if (neg_scores.empty()) return 0.0;
  return std::max(0.0, log_sum_exp(pos_score, neg_scores) - pos_score);
}

std::vector<double> list_loss_grad(double pos_score, std::span<const double> neg_scores) {
  require_finite(pos_score, "positive score");
  require_finite(neg_scores, "negative score");
  const double lse = log_sum_exp(pos_score, neg_scores);
  std::vector<double> grad;
  grad.reserve(neg_scores.size() + 1);
  grad.push_back(std::exp(pos_score - lse) - 1.0);
  for (double v : neg_scores) grad.push_back(std::exp(v - lse));
  return grad;
}

double style_loss(double list_value, double ift_value, const LossConfig& cfg) {
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) throw LossError("beta must lie in [0, 1]");
  require_finite(list_value, "list loss");
  require_finite(ift_value, "ift loss");
  if (list_value < 0.0 || ift_value < 0.0) throw LossError("loss values must be >= 0");
  if (cfg.beta == 1.0) return list_value;
  if (cfg.beta == 0.0) return ift_value;
  return cfg.beta * list_value + (1.0 - cfg.beta) * ift_value;
}

double list_loss_grad_check(double pos_score, std::span<const double> neg_scores, double h) {
  auto analytic = list_loss_grad(pos_score, neg_scores);
  std::vector<double> scores(neg_scores.begin(), neg_scores.end());
  scores.insert(scores.begin(), pos_score);
  auto eval = [&](const std::vector<double>& s) {
    return list_loss(s.front(), std::span<const double>(s).subspan(1));
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto plus = scores, minus = scores;
    plus[i] += h;
    minus[i] -= h;
    double numeric = (eval(plus) - eval(minus)) / (2.0 * h);
    double scale = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-8});
    worst = std::max(worst, std::abs(numeric - analytic[i]) / scale);
  }
  return worst;
}

}  // namespace f2s::losses
