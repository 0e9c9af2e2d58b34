#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "f2s/losses/losses.hpp"

using namespace f2s::losses;

namespace {

// Unstabilised textbook formula; fine for moderate scores.
double naive_list_loss(double pos, const std::vector<double>& negs) {
  double denom = std::exp(pos);
  for (double s : negs) denom += std::exp(s);
  return -std::log(std::exp(pos) / denom);
}

std::vector<double> random_scores(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(IftLoss, Certainty) {
  std::vector<double> lp{0, 0, 0};
  EXPECT_EQ(ift_loss(lp), 0.0);
}

TEST(IftLoss, TwoHalves) {
  std::vector<double> lp{std::log(0.5), std::log(0.5)};
  EXPECT_NEAR(ift_loss(lp), 2 * std::log(2.0), 1e-12);
  EXPECT_NEAR(ift_loss(lp), 1.3863, 1e-4);
}

TEST(IftLoss, NonNegativeAndErrors) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto lp = random_scores(rng, 1 + rng() % 50, -20, 0);
    EXPECT_GE(ift_loss(lp), 0.0);
  }
  EXPECT_THROW(ift_loss({}), LossError);
  std::vector<double> positive{0.5};
  EXPECT_THROW(ift_loss(positive), LossError);
}

TEST(SequenceScore, LiteralAndLognorm) {
  std::vector<double> lp{std::log(0.5), std::log(0.5)};
  EXPECT_NEAR(sequence_score(lp, ScoreMode::literal), 0.25, 1e-15);
  EXPECT_NEAR(sequence_score(lp, ScoreMode::lognorm), std::log(0.5), 1e-15);
  EXPECT_NEAR(sequence_score(lp, ScoreMode::lognorm), -0.6931, 1e-4);
  EXPECT_THROW(sequence_score({}, ScoreMode::lognorm), LossError);
}

TEST(SequenceScore, LongSequenceUnderflowsQuietly) {
  std::vector<double> lp(1000, std::log(0.5));
  double s = sequence_score(lp, ScoreMode::literal);
  EXPECT_GE(s, 0.0);
  EXPECT_LT(s, 1e-300);
  EXPECT_NEAR(sequence_score(lp, ScoreMode::lognorm), std::log(0.5), 1e-12);
}

TEST(ScoreModeNames, RoundTrip) {
  EXPECT_EQ(parse_score_mode(score_mode_name(ScoreMode::literal)), ScoreMode::literal);
  EXPECT_EQ(parse_score_mode("lognorm"), ScoreMode::lognorm);
  EXPECT_THROW(parse_score_mode("cubic"), f2s::Error);
}

TEST(ListLoss, ElevenWaySymmetry) {
  std::vector<double> negs(10, -1.25);
  EXPECT_NEAR(list_loss(-1.25, negs), std::log(11.0), 1e-9);
  EXPECT_NEAR(list_loss(-1.25, negs), 2.3979, 1e-4);
}

TEST(ListLoss, NoNegativesIsZero) { EXPECT_EQ(list_loss(3.0, {}), 0.0); }

TEST(ListLoss, DominantPositiveTendsToZero) {
  std::vector<double> negs{0, 0, 0};
  EXPECT_LT(list_loss(50, negs), 1e-20);
  EXPECT_GE(list_loss(50, negs), 0.0);
}

TEST(ListLoss, StableForHugeScores) {
  std::vector<double> negs{1000, 1000};
  EXPECT_NEAR(list_loss(1000, negs), std::log(3.0), 1e-12);
  std::vector<double> low{-1e4};
  EXPECT_NEAR(list_loss(-1e4, low), std::log(2.0), 1e-12);
}

TEST(ListLoss, NonFiniteRejected) {
  std::vector<double> negs{std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(list_loss(0, negs), LossError);
  EXPECT_THROW(list_loss(std::numeric_limits<double>::infinity(), {}), LossError);
  EXPECT_THROW(list_loss_grad(0, negs), LossError);
}

TEST(ListLoss, MatchesNaiveFormula) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    auto negs = random_scores(rng, 1 + rng() % 12, -5, 5);
    double pos = random_scores(rng, 1, -5, 5)[0];
    EXPECT_NEAR(list_loss(pos, negs), naive_list_loss(pos, negs), 1e-10);
  }
}

TEST(ListLossProperty, ShiftInvariance) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto negs = random_scores(rng, 1 + rng() % 12, -10, 10);
    double pos = random_scores(rng, 1, -10, 10)[0];
    double c = random_scores(rng, 1, -100, 100)[0];
    auto shifted = negs;
    for (auto& s : shifted) s += c;
    EXPECT_NEAR(list_loss(pos, negs), list_loss(pos + c, shifted), 1e-9);
  }
}

TEST(ListLossProperty, NonNegativeAndDecreasingInPositive) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    auto negs = random_scores(rng, 1 + rng() % 12, -10, 10);
    double pos = random_scores(rng, 1, -10, 10)[0];
    double step = random_scores(rng, 1, 0.01, 2)[0];
    double a = list_loss(pos, negs), b = list_loss(pos + step, negs);
    EXPECT_GE(a, 0.0);
    EXPECT_LT(b, a);
  }
}

TEST(ListLossGrad, EqualScoresFourWay) {
  std::vector<double> negs{0.3, 0.3, 0.3};
  auto g = list_loss_grad(0.3, negs);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_NEAR(g[0], -0.75, 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(g[i], 0.25, 1e-15);
}

TEST(ListLossGrad, SoftmaxMinusIndicatorOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto negs = random_scores(rng, 1 + rng() % 10, -4, 4);
    double pos = random_scores(rng, 1, -4, 4)[0];
    double denom = std::exp(pos);
    for (double s : negs) denom += std::exp(s);
    auto g = list_loss_grad(pos, negs);
    EXPECT_NEAR(g[0], std::exp(pos) / denom - 1, 1e-12);
    double sum = g[0];
    for (std::size_t k = 0; k < negs.size(); ++k) {
      EXPECT_NEAR(g[k + 1], std::exp(negs[k]) / denom, 1e-12);
      sum += g[k + 1];
    }
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(ListLossGrad, FiniteDifferenceAgreement) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    auto negs = random_scores(rng, 1 + rng() % 10, -3, 3);
    double pos = random_scores(rng, 1, -3, 3)[0];
    EXPECT_LE(list_loss_grad_check(pos, negs, 1e-5), 1e-4);
    // Independent central differences.
    auto g = list_loss_grad(pos, negs);
    const double h = 1e-5;
    double fd = (list_loss(pos + h, negs) - list_loss(pos - h, negs)) / (2 * h);
    EXPECT_NEAR(fd, g[0], 1e-6);
  }
}

TEST(StyleLoss, ConvexCombination) {
  EXPECT_NEAR(style_loss(2.0, 1.0, {0.6, ScoreMode::lognorm}), 1.6, 1e-15);
}

TEST(StyleLoss, EndpointsExact) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    auto v = random_scores(rng, 2, 0, 50);
    EXPECT_EQ(style_loss(v[0], v[1], {1.0, ScoreMode::lognorm}), v[0]);
    EXPECT_EQ(style_loss(v[0], v[1], {0.0, ScoreMode::lognorm}), v[1]);
  }
}

TEST(StyleLoss, MonotoneInBothArguments) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    auto v = random_scores(rng, 3, 0, 10);
    LossConfig cfg{v[2] / 10, ScoreMode::lognorm};
    EXPECT_LE(style_loss(v[0], v[1], cfg), style_loss(v[0] + 1, v[1], cfg));
    EXPECT_LE(style_loss(v[0], v[1], cfg), style_loss(v[0], v[1] + 1, cfg));
  }
}

TEST(StyleLoss, BetaOutOfRange) {
  EXPECT_THROW(style_loss(1, 1, {1.5, ScoreMode::lognorm}), LossError);
  EXPECT_THROW(style_loss(1, 1, {-0.1, ScoreMode::lognorm}), LossError);
}
