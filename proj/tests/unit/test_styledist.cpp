#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "f2s/styledist/styledist.hpp"
#include "helpers.hpp"
#include "ted_oracle.hpp"

using namespace f2s;
using namespace f2s::style;
using f2s::testing::read_file;

namespace {

bool has_kind(const SyntaxTree& t, std::string_view kind) {
  return std::any_of(t.nodes().begin(), t.nodes().end(),
                     [&](const SyntaxNode& n) { return n.kind == kind; });
}

using Names = std::vector<std::string>;

std::size_t levenshtein_oracle(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return d[a.size()][b.size()];
}

// Direct evaluation of the weighted name distance, one direction at a time.
double one_way(const Names& from, const Names& to, const IdfTable& idf) {
  double num = 0, den = 0;
  for (const auto& v : from) {
    double best = 1.0;
    for (const auto& w : to) {
      double ed = static_cast<double>(levenshtein_oracle(v, w)) /
                  static_cast<double>(std::max(v.size(), w.size()));
      best = std::min(best, ed);
    }
    num += idf.idf(v) * best;
    den += idf.idf(v);
  }
  return num / den;
}

std::vector<CodeSnippet> fixture_snippets() {
  std::vector<CodeSnippet> out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(std::string(F2S_FIXTURES) + "/cssim"))
    if (e.path().extension() != ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files)
    out.push_back(CodeSnippet::make(p.filename().string(), *language_from_path(p.string()),
                                    read_file(p)));
  return out;
}

}  // namespace

TEST(Parse, PythonAssignment) {
  auto t = parse("x = 1\n", Language::python);
  EXPECT_TRUE(has_kind(t, "assignment"));
  EXPECT_GE(t.node_count(), 1u);
}

TEST(Parse, InvalidCReportsLocation) {
  try {
    parse("int main(void) {\n  int x = ;\n}\n", Language::c);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 0);
  }
}

TEST(Parse, Deterministic) {
  const char* src = "#include <stdio.h>\nint main(void) { for (int i = 0; i < 3; i++) printf(\"%d\", i); }\n";
  EXPECT_EQ(parse(src, Language::c), parse(src, Language::c));
}

TEST(Parse, UnknownLanguage) {
  EXPECT_THROW(parse("x", Language::unknown), GrammarMissingError);
}

TEST(Parse, CommentsAreDropped) {
  auto a = parse("x = 1\ny = x\n", Language::python);
  auto b = parse("# note\nx = 1  # trailing\n\ny = x\n", Language::python);
  EXPECT_EQ(a.to_bracket(), b.to_bracket());
  auto c = parse("int f(void) { return 1; }\n", Language::c);
  auto d = parse("/* block */ int f(void) { // line\n return 1; }\n", Language::c);
  EXPECT_EQ(c.to_bracket(), d.to_bracket());
}

TEST(Parse, AllFiveLanguages) {
  EXPECT_NO_THROW(parse("int main(void) { return 0; }\n", Language::c));
  EXPECT_NO_THROW(parse("#include <vector>\nint main() { std::vector<int> v{1}; return v[0]; }\n",
                        Language::cpp));
  EXPECT_NO_THROW(parse("package main\nfunc main() {}\n", Language::go));
  EXPECT_NO_THROW(parse("class A { void f() {} }\n", Language::java));
  EXPECT_NO_THROW(parse("def f():\n    return 1\n", Language::python));
}

TEST(Parse, GoCompositeLiteralInClauseHeader) {
  auto t = parse("package main\nfunc main() {\n\tfor _, v := range []int{1, 2} {\n\t\t_ = v\n\t}\n"
                 "\tif x := (T{}); x.ok {\n\t}\n}\n",
                 Language::go);
  EXPECT_TRUE(has_kind(t, "composite_literal"));
}

TEST(ExtractVariables, CDeclaration) {
  EXPECT_EQ(extract_variables(parse("int count = 0;\n", Language::c)), Names{"count"});
}

TEST(ExtractVariables, PythonExcludesFunctionName) {
  EXPECT_EQ(extract_variables(parse("def f(a, b):\n    total = a\n", Language::python)),
            (Names{"a", "b", "total"}));
}

TEST(ExtractVariables, JavaLoopVariable) {
  auto t = parse("class A { void g() { for (int i = 0; i < 3; i++) { } } }\n", Language::java);
  EXPECT_EQ(extract_variables(t), Names{"i"});
}

TEST(ExtractVariables, ExcludesTypesAndImports) {
  auto t = parse("import math\nclass P:\n    pass\n\ndef run(q):\n    r = math.floor(q)\n",
                 Language::python);
  EXPECT_EQ(extract_variables(t), (Names{"q", "r"}));
}

TEST(ExtractApis, RightmostIdentifier) {
  EXPECT_EQ(extract_apis(parse("import math\ny = math.sqrt(x)\n", Language::python)),
            Names{"sqrt"});
}

TEST(ExtractApis, SetSemantics) {
  auto t = parse("#include <stdio.h>\nint main(void) { printf(\"a\"); printf(\"b\"); return 0; }\n",
                 Language::c);
  EXPECT_EQ(extract_apis(t), Names{"printf"});
}

TEST(ExtractApis, GoQualified) {
  auto t = parse("package main\nimport \"fmt\"\nfunc main() { x := 1\n fmt.Println(x) }\n", Language::go);
  EXPECT_EQ(extract_apis(t), Names{"Println"});
}

TEST(NormEditDistance, Examples) {
  EXPECT_EQ(norm_edit_distance("count", "count"), 0.0);
  EXPECT_DOUBLE_EQ(norm_edit_distance("count", "cnt"), 0.4);
  EXPECT_EQ(norm_edit_distance("", "abc"), 1.0);
  EXPECT_EQ(norm_edit_distance("", ""), 0.0);
}

TEST(NormEditDistance, MatchesDpOracleSymmetricZeroIffEqual) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::string a(rng() % 9, 'a'), b(rng() % 9, 'a');
    for (auto& c : a) c = static_cast<char>('a' + rng() % 3);
    for (auto& c : b) c = static_cast<char>('a' + rng() % 3);
    double d = norm_edit_distance(a, b);
    if (!a.empty() || !b.empty()) {
      EXPECT_DOUBLE_EQ(d, static_cast<double>(levenshtein_oracle(a, b)) /
                              static_cast<double>(std::max(a.size(), b.size())));
    }
    EXPECT_EQ(d, norm_edit_distance(b, a));
    EXPECT_EQ(d == 0.0, a == b);
  }
}

TEST(DisNames, Examples) {
  IdfTable uniform;
  EXPECT_EQ(dis_names({"a", "b"}, {"a", "b"}, uniform), 0.0);
  EXPECT_EQ(dis_names({"a"}, {}, uniform), 1.0);
  EXPECT_EQ(dis_names({}, {"a"}, uniform), 1.0);
  EXPECT_EQ(dis_names({}, {}, uniform), 0.0);
  EXPECT_NEAR(dis_names({"count", "i"}, {"cnt", "i"}, uniform), 0.2, 1e-15);
}

TEST(DisNames, MatchesWeightedOracle) {
  std::mt19937_64 rng(12);
  const Names pool{"i", "j", "n", "count", "cnt", "total", "sum", "values", "vals", "x", "idx"};
  for (int trial = 0; trial < 200; ++trial) {
    IdfTable idf;
    for (int d = 0; d < 6; ++d) {
      Names doc;
      for (const auto& name : pool)
        if (rng() % 3 == 0) doc.push_back(name);
      idf.observe(doc);
    }
    Names a, b;
    for (const auto& name : pool) {
      if (rng() % 3 == 0) a.push_back(name);
      if (rng() % 3 == 0) b.push_back(name);
    }
    if (a.empty() || b.empty()) continue;
    double expected = (one_way(a, b, idf) + one_way(b, a, idf)) / 2;
    EXPECT_NEAR(dis_names(a, b, idf), expected, 1e-12);
    EXPECT_NEAR(dis_names(a, b, idf), dis_names(b, a, idf), 1e-15);
  }
}

TEST(DisNames, UniformWeightScaleCancels) {
  // With no observed names every weight equals ln(N + 1) + 1, a different
  // constant for each N.
  const Names a{"count", "i", "buffer"}, b{"cnt", "j"};
  IdfTable none;
  double base = dis_names(a, b, none);
  for (int n = 1; n < 6; ++n) {
    IdfTable scaled;
    for (int d = 0; d < n; ++d) scaled.observe({"unrelated"});
    EXPECT_NEAR(dis_names(a, b, scaled), base, 1e-15);
  }
}

TEST(Idf, FormulaExamples) {
  IdfTable t;
  for (int d = 0; d < 10; ++d) t.observe(d == 0 ? Names{"common", "rare", "rare"} : Names{"common"});
  EXPECT_EQ(t.doc_count(), 10u);
  EXPECT_DOUBLE_EQ(t.idf("common"), 1.0);
  EXPECT_NEAR(t.idf("rare"), std::log(11.0 / 2.0) + 1, 1e-15);
  EXPECT_NEAR(t.idf("rare"), 2.7047, 1e-4);
  EXPECT_EQ(t.df("rare"), 1u);
  EXPECT_NEAR(t.idf("unseen"), std::log(11.0) + 1, 1e-15);
  for (const auto& [name, df] : t.frequencies()) {
    EXPECT_GE(df, 1u);
    EXPECT_LE(df, t.doc_count());
    EXPECT_GT(t.idf(name), 0.0);
  }
}

TEST(Idf, BuildFromProfilesCountsVariablesAndApis) {
  std::vector<StyleProfile> docs{
      profile(CodeSnippet::make("a", Language::python, "x = len(y)\n")),
      profile(CodeSnippet::make("b", Language::python, "x = 2\n"))};
  auto idf = build_idf(docs);
  EXPECT_EQ(idf.doc_count(), 2u);
  EXPECT_EQ(idf.df("x"), 2u);
  EXPECT_EQ(idf.df("len"), 1u);
}

TEST(TreeEditDistance, Examples) {
  auto t = SyntaxTree::from_bracket("a(b,c)");
  EXPECT_EQ(tree_edit_distance(t, t), 0);
  EXPECT_EQ(tree_edit_distance(t, SyntaxTree::from_bracket("a(b)")), 1);
  EXPECT_DOUBLE_EQ(dis_stru(t, SyntaxTree::from_bracket("a(b)")), 1.0 / 3.0);
  EXPECT_EQ(tree_edit_distance(SyntaxTree::from_bracket("a(b(c,d),e)"),
                               SyntaxTree::from_bracket("a(c,d,e)")), 1);
  EXPECT_EQ(tree_edit_distance(SyntaxTree::from_bracket("f(a,b)"),
                               SyntaxTree::from_bracket("g(b,a)")), 3);
}

TEST(TreeEditDistance, DisjointKindsClamp) {
  auto a = SyntaxTree::from_bracket("a(b,c,d)"), b = SyntaxTree::from_bracket("w(x(y(z)))");
  double d = dis_stru(a, b);
  EXPECT_LE(d, 1.0);
  EXPECT_GE(d, 0.0);
}

TEST(TreeEditDistance, OracleKnownValues) {
  auto ted = [](const char* a, const char* b) {
    return f2s::testing::brute_force_ted(SyntaxTree::from_bracket(a), SyntaxTree::from_bracket(b));
  };
  EXPECT_EQ(ted("a", "a"), 0);
  EXPECT_EQ(ted("a", "b"), 1);
  EXPECT_EQ(ted("a(b,c)", "a(b)"), 1);
  EXPECT_EQ(ted("f(a,b)", "g(b,a)"), 3);
  // Deleting the inner node lifts its children: a(x(b,c)) -> a(b,c).
  EXPECT_EQ(ted("a(x(b,c))", "a(b,c)"), 1);
  // Sibling order matters; b and c cannot both be kept when swapped.
  EXPECT_EQ(ted("a(b,c)", "a(c,b)"), 2);
  EXPECT_EQ(ted("a(b(c(d)))", "e"), 4);
}

TEST(TreeEditDistance, BruteForceOracle) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    auto a = SyntaxTree::from_bracket(f2s::testing::random_bracket_tree(rng, 8, 3));
    auto b = SyntaxTree::from_bracket(f2s::testing::random_bracket_tree(rng, 8, 3));
    ASSERT_EQ(tree_edit_distance(a, b), f2s::testing::brute_force_ted(a, b))
        << a.to_bracket() << " vs " << b.to_bracket();
  }
}

TEST(TreeEditDistance, MetricProperties) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    auto a = SyntaxTree::from_bracket(f2s::testing::random_bracket_tree(rng, 12, 4));
    auto b = SyntaxTree::from_bracket(f2s::testing::random_bracket_tree(rng, 12, 4));
    auto c = SyntaxTree::from_bracket(f2s::testing::random_bracket_tree(rng, 12, 4));
    long ab = tree_edit_distance(a, b);
    EXPECT_EQ(ab, tree_edit_distance(b, a));
    EXPECT_LE(tree_edit_distance(a, c), ab + tree_edit_distance(b, c));
    EXPECT_GE(ab, std::abs(static_cast<long>(a.node_count()) - static_cast<long>(b.node_count())));
    EXPECT_LE(approx_tree_edit_distance(a, b), static_cast<long>(a.node_count() + b.node_count()));
  }
}

TEST(TreeEditDistance, NodeBudget) {
  auto a = SyntaxTree::from_bracket("a(b,c,d)");
  EXPECT_THROW(tree_edit_distance(a, a, 5), TreeTooLargeError);
  auto pa = profile(CodeSnippet::make("a", Language::python, "x = 1\ny = x + 2\n"));
  auto pb = profile(CodeSnippet::make("b", Language::python, "x = 1\n"));
  CssimOptions tight{4, true};
  auto r = cssim(pa, pb, {}, tight);
  EXPECT_TRUE(r.approximate);
  CssimOptions strict{4, false};
  EXPECT_THROW(cssim(pa, pb, {}, strict), TreeTooLargeError);
}

TEST(Cssim, RenamedVariablesOnly) {
  auto a = CodeSnippet::make("a", Language::python,
                             "def f(values):\n    total = 0\n    for v in values:\n        total += v\n    return total\n");
  auto b = CodeSnippet::make("b", Language::python,
                             "def f(nums):\n    acc = 0\n    for n in nums:\n        acc += n\n    return acc\n");
  auto r = cssim(a, b, {});
  EXPECT_EQ(r.dis_stru, 0.0);
  EXPECT_GT(r.dis_var, 0.0);
  EXPECT_EQ(r.dis_api, 0.0);
  EXPECT_LT(r.cssim, 1.0);
  EXPECT_NEAR(r.cssim, 1 - (r.dis_var + r.dis_api + r.dis_stru) / 3, 1e-15);
}

TEST(Cssim, FixtureIdentitySymmetryAndRange) {
  auto snippets = fixture_snippets();
  ASSERT_EQ(snippets.size(), 50u);
  std::vector<StyleProfile> profiles;
  for (const auto& s : snippets) profiles.push_back(profile(s));
  auto idf = build_idf(profiles);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    auto self = cssim(profiles[i], profiles[i], idf);
    EXPECT_EQ(self.cssim, 1.0) << snippets[i].snippet_id;
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      auto ab = cssim(profiles[i], profiles[j], idf), ba = cssim(profiles[j], profiles[i], idf);
      EXPECT_LE(std::abs(ab.cssim - ba.cssim), 1e-12);
      for (double v : {ab.dis_var, ab.dis_api, ab.dis_stru, ab.cssim}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(Cssim, CrossLanguageUsesOwnGrammars) {
  auto c = CodeSnippet::make("c", Language::c, "int main(void) { int total = 0; return total; }\n");
  auto py = CodeSnippet::make("p", Language::python, "total = 0\n");
  auto r = cssim(c, py, {});
  EXPECT_EQ(r.dis_var, 0.0);
  EXPECT_GT(r.dis_stru, 0.0);
}
