#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "f2s/styleforge/styleforge.hpp"
#include "helpers.hpp"

using namespace f2s;
using namespace f2s::styleforge;
using f2s::testing::TempDir;

namespace {

// Returns the scripted texts in order, cycling; records every prompt.
class ListGateway : public gateway::Gateway {
 public:
  std::vector<std::string> texts;
  std::vector<std::string> prompts;
  std::vector<gateway::GenerationParams> params;

  std::vector<gateway::Completion> complete(const std::string& prompt,
                                            const gateway::GenerationParams& p) override {
    prompts.push_back(prompt);
    params.push_back(p);
    std::vector<gateway::Completion> out;
    for (int i = 0; i < p.samples; ++i)
      out.push_back({texts[static_cast<std::size_t>(i) % texts.size()], {}});
    return out;
  }
  gateway::LabelLogits score_labels(const std::string&, const std::vector<std::string>&) override {
    throw gateway::UnsupportedError("unused");
  }
  gateway::TokenLogProbs token_logprobs(const std::string&, const std::string&) override {
    throw gateway::UnsupportedError("unused");
  }
  std::vector<double> embed(const std::string&) override { throw gateway::UnsupportedError("unused"); }
};

std::size_t oracle_consensus(const std::vector<double>& sim, std::size_t m) {
  std::vector<double> totals(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) totals[i] += sim[i * m + j];
  // First maximum wins.
  return static_cast<std::size_t>(std::max_element(totals.begin(), totals.end()) - totals.begin());
}

std::vector<double> random_similarity(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> sim(m * m, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) sim[i * m + j] = sim[j * m + i] = u(rng);
  return sim;
}

const char* kPositive = "def main():\n    total = 0\n    for value in range(10):\n        total += value\n    print(total)\n\nmain()\n";

// Progressively further from the positive in names and structure.
const std::vector<std::string> kVariants = {
    "def main():\n    total = 0\n    for value in range(10):\n        total += value\n    print(total)\n\nmain()\n",
    "def main():\n    acc = 0\n    for v in range(10):\n        acc += v\n    print(acc)\n\nmain()\n",
    "print(sum(range(10)))\n",
    "import functools\nx = functools.reduce(lambda p, q: p + q, list(range(10)), 0)\nprint(x)\n",
    "n = 0\ni = 0\nwhile i < 10:\n    n = n + i\n    i = i + 1\nprint(n)\n",
    "s = [k for k in range(10)]\nprint(sum(s))\n",
};

std::string fenced(const std::string& code) { return "```python\n" + code + "```\n# End of Code\n"; }

CodeSnippet c_src() {
  return CodeSnippet::make("p1/c", Language::c,
                           "#include <stdio.h>\nint main(void) { int t = 0; for (int i = 0; i < 10; i++) t += i; printf(\"%d\\n\", t); return 0; }\n");
}

}  // namespace

TEST(StyleConfig, ValidationAndBatch) {
  StyleDataConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.negative_batch(), 20);
  cfg.n = 2;
  cfg.m = 10;
  EXPECT_EQ(cfg.negative_batch(), 10);
  cfg.alpha = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg.alpha = 1.0;
  EXPECT_NO_THROW(cfg.validate());
  cfg.m = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(ConsensusIndex, MatchesQuadraticOracle) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    std::size_t m = 1 + rng() % 10;
    auto sim = random_similarity(rng, m);
    EXPECT_EQ(consensus_index(sim, m), oracle_consensus(sim, m));
  }
}

TEST(ConsensusIndex, PositiveScalingKeepsArgmax) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> scale(0.01, 100);
  for (int t = 0; t < 100; ++t) {
    std::size_t m = 2 + rng() % 9;
    auto sim = random_similarity(rng, m);
    auto scaled = sim;
    double c = scale(rng);
    for (auto& x : scaled) x *= c;
    EXPECT_EQ(consensus_index(sim, m), consensus_index(scaled, m));
  }
}

TEST(ConsensusIndex, EdgeCases) {
  EXPECT_EQ(consensus_index({1.0}, 1), 0u);
  // All equal: first index.
  EXPECT_EQ(consensus_index(std::vector<double>(16, 0.5), 4), 0u);
  // Diagonal is ignored.
  EXPECT_EQ(consensus_index({100, 0.1, 0.1, 0.1, 1, 0.9, 0.1, 0.9, 1}, 3), 1u);
  EXPECT_THROW(consensus_index({}, 0), ArgumentError);
  EXPECT_THROW(consensus_index({1, 2, 3}, 2), ArgumentError);
}

TEST(ConsensusSelect, AgreesWithPairwiseCssim) {
  std::vector<style::StyleProfile> profiles;
  for (const auto& v : kVariants)
    profiles.push_back(style::profile(CodeSnippet::make("v", Language::python, v)));
  auto idf = style::build_idf(profiles);
  auto c = consensus_select(profiles, idf, 2);
  const std::size_t m = profiles.size();
  std::vector<double> sim(m * m, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) sim[i * m + j] = style::cssim(profiles[i], profiles[j], idf).cssim;
  EXPECT_EQ(c.index, oracle_consensus(sim, m));
  ASSERT_EQ(c.totals.size(), m);
  for (std::size_t i = 0; i < m; ++i) {
    double total = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) total += sim[i * m + j];
    EXPECT_NEAR(c.totals[i], total, 1e-12);
  }
  EXPECT_EQ(consensus_select({profiles[3]}, idf).index, 0u);
  EXPECT_THROW(consensus_select({}, idf), ArgumentError);
}

TEST(GeneratePositives, IdsAndEmptyDrops) {
  ListGateway gw;
  gw.texts = {fenced(kVariants[0]), "```python\n```\n", fenced(kVariants[2])};
  StyleDataConfig cfg;
  cfg.m = 3;
  PromptTemplate prompt("Translate {SOURCE_LANG} to {TARGET_LANG}:\n{SOURCE_CODE}\n");
  auto g = generate_positive_candidates(gw, prompt, c_src(), Language::python, cfg);
  ASSERT_EQ(g.candidates.size(), 2u);
  EXPECT_EQ(g.candidates[0].snippet_id, "p1/c/pos0");
  EXPECT_EQ(g.candidates[1].snippet_id, "p1/c/pos2");
  EXPECT_EQ(g.candidates[1].source_text, "print(sum(range(10)))\n");
  EXPECT_EQ(g.candidates[0].language, Language::python);
  EXPECT_EQ(g.warnings.size(), 1u);
  ASSERT_EQ(gw.params.size(), 1u);
  EXPECT_EQ(gw.params[0].samples, 3);
  EXPECT_DOUBLE_EQ(gw.params[0].temperature, 0.7);
  EXPECT_NE(gw.prompts[0].find("int t = 0"), std::string::npos);
}

TEST(GeneratePositives, NoUsableCodeThrows) {
  ListGateway gw;
  gw.texts = {"```python\n```\n"};
  StyleDataConfig cfg;
  cfg.m = 2;
  EXPECT_THROW(generate_positive_candidates(gw, PromptTemplate("{SOURCE_CODE}"), c_src(),
                                            Language::python, cfg),
               NoCandidatesError);
}

TEST(FilterFunctional, KeepsPassingInOrder) {
  TempDir dir;
  sandbox::Sandbox sb(sandbox::default_toolchains(), dir.path());
  std::vector<CodeSnippet> cands{
      CodeSnippet::make("a", Language::python, "print(45)\n"),
      CodeSnippet::make("b", Language::python, "print(44)\n"),
      CodeSnippet::make("c", Language::python, "print(45)\n"),
  };
  sandbox::DiffOptions opt;
  opt.limits.wall_time_s = 5;
  auto set = filter_functional(sb, cands, c_src(), {{"", std::nullopt}}, opt);
  EXPECT_EQ(set.functional, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(set.reports.size(), 3u);
  EXPECT_EQ(set.reports[1].category, sandbox::Category::incorrect_output);
  auto f = set.functional_snippets();
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1].snippet_id, "c");
}

TEST(CollectNegatives, BelowAlphaSortedTruncated) {
  auto pos = CodeSnippet::make("p1/c/pos0", Language::python, kPositive);
  std::vector<style::StyleProfile> docs;
  for (const auto& v : kVariants)
    docs.push_back(style::profile(CodeSnippet::make("v", Language::python, v)));
  auto idf = style::build_idf(docs);

  // Oracle: cssim of each distinct variant to the positive.
  std::vector<double> sims;
  for (const auto& v : kVariants)
    sims.push_back(style::cssim(pos, CodeSnippet::make("v", Language::python, v), idf).cssim);
  ASSERT_EQ(sims[0], 1.0);

  for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
    for (int n : {1, 2, 3, 10}) {
      ListGateway gw;
      for (const auto& v : kVariants) gw.texts.push_back(fenced(v));
      StyleDataConfig cfg;
      cfg.m = 4;
      cfg.n = n;
      cfg.alpha = alpha;
      auto set = collect_negatives(gw, PromptTemplate("{SOURCE_CODE}"), c_src(), pos, cfg, idf);
      const std::size_t batch = static_cast<std::size_t>(cfg.negative_batch());
      EXPECT_EQ(set.generated, batch);

      std::vector<std::pair<double, std::size_t>> expect;
      for (std::size_t i = 0; i < batch; ++i)
        if (sims[i % sims.size()] < alpha) expect.emplace_back(sims[i % sims.size()], i);
      std::stable_sort(expect.begin(), expect.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      if (expect.size() > static_cast<std::size_t>(n)) expect.resize(static_cast<std::size_t>(n));

      ASSERT_EQ(set.kept.size(), expect.size()) << "alpha " << alpha << " n " << n;
      for (std::size_t k = 0; k < expect.size(); ++k) {
        EXPECT_NEAR(set.kept[k].cssim, expect[k].first, 1e-12);
        EXPECT_EQ(set.kept[k].code.snippet_id, "p1/c/neg" + std::to_string(expect[k].second));
        EXPECT_LT(set.kept[k].cssim, alpha);
        if (k) {
          EXPECT_LE(set.kept[k - 1].cssim, set.kept[k].cssim);
        }
      }
    }
  }
}

TEST(CollectNegatives, UnparseableCandidatesAreSkipped) {
  auto pos = CodeSnippet::make("pos", Language::python, kPositive);
  ListGateway gw;
  gw.texts = {fenced("def broken(:\n"), fenced(kVariants[2])};
  StyleDataConfig cfg;
  cfg.m = 2;
  cfg.n = 1;
  auto set = collect_negatives(gw, PromptTemplate("{SOURCE_CODE}"), c_src(), pos, cfg, style::IdfTable{});
  EXPECT_EQ(set.generated, 2u);
  ASSERT_EQ(set.kept.size(), 1u);
  EXPECT_EQ(set.kept[0].code.snippet_id, "p1/c/neg1");
  EXPECT_FALSE(set.warnings.empty());
}

TEST(BuildStyleRecord, Invariants) {
  auto src = c_src();
  auto pos = CodeSnippet::make("pos", Language::python, kPositive);
  std::vector<Negative> negs{{CodeSnippet::make("n0", Language::python, kVariants[2]), 0.2},
                             {CodeSnippet::make("n1", Language::python, kVariants[4]), 0.5}};
  auto r = build_style_record(src, pos, negs, 0.8);
  EXPECT_EQ(r.tgt_negs.size(), 2u);
  EXPECT_EQ(r.neg_cssim, (std::vector<double>{0.2, 0.5}));
  EXPECT_EQ(r.tgt_pos.snippet_id, "pos");
  EXPECT_THROW(build_style_record(src, pos, {}, 0.8), CorpusError);
  EXPECT_THROW(build_style_record(src, pos, negs, 0.5), CorpusError);
}
