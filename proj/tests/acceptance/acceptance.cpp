// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "../unit/helpers.hpp"
#include "../unit/ted_oracle.hpp"
#include "f2s/cli/pipeline.hpp"
#include "f2s/styledist/styledist.hpp"

using namespace f2s;
namespace fs = std::filesystem;
using nlohmann::json;
using testing::read_file;
using testing::TempDir;

namespace {

const fs::path kFixtures = F2S_FIXTURES;
const std::string kBinary = F2S_BINARY;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

int run_binary(const std::string& args, const fs::path& log) {
  int rc = std::system((quote(kBinary) + " " + args + " >" + quote(log) + " 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return files;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

// 1. Exact TED against exhaustive mapping search.
Outcome ted_oracle() {
  std::mt19937_64 rng(101);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    auto a = style::SyntaxTree::from_bracket(testing::random_bracket_tree(rng, 10, 3));
    auto b = style::SyntaxTree::from_bracket(testing::random_bracket_tree(rng, 10, 3));
    if (style::tree_edit_distance(a, b) != testing::brute_force_ted(a, b)) ++mismatches;
  }
  return {mismatches == 0, "500 pairs, " + std::to_string(mismatches) + " mismatches"};
}

// 2. Identity and symmetry of cssim over the 50 fixture snippets.
Outcome cssim_suite() {
  std::vector<CodeSnippet> snippets;
  std::set<Language> langs;
  for (const auto& e : fs::directory_iterator(kFixtures / "cssim")) {
    auto lang = language_from_path(e.path().string());
    if (!lang) continue;
    snippets.push_back(CodeSnippet::make(e.path().filename().string(), *lang, read_file(e.path())));
    langs.insert(*lang);
  }
  std::sort(snippets.begin(), snippets.end(),
            [](const CodeSnippet& a, const CodeSnippet& b) { return a.snippet_id < b.snippet_id; });
  std::vector<style::StyleProfile> profiles;
  for (const auto& s : snippets) profiles.push_back(style::profile(s));
  auto idf = style::build_idf(profiles);
  int identity_fail = 0;
  double worst = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (style::cssim(profiles[i], profiles[i], idf).cssim != 1.0) ++identity_fail;
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      double ab = style::cssim(profiles[i], profiles[j], idf).cssim;
      double ba = style::cssim(profiles[j], profiles[i], idf).cssim;
      worst = std::max(worst, std::abs(ab - ba));
    }
  }
  bool ok = snippets.size() == 50 && langs.size() == 5 && identity_fail == 0 && worst <= 1e-12;
  std::ostringstream d;
  d << snippets.size() << " snippets, " << langs.size() << " languages, " << identity_fail
    << " identity failures, max asymmetry " << worst;
  return {ok, d.str()};
}

double expected_label(const std::vector<double>& s) {
  double z = 0, num = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    z += std::exp(s[k]);
    num += std::exp(s[k]) * static_cast<double>(k + 1);
  }
  return num / z;
}

// 3. Judge score: uniform value, shift invariance, monotonicity in s_K.
Outcome judge_properties() {
  double uniform = pairing::judge_distribution({0, 0, 0, 0, 0}).score;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(-8, 8), shift(-200, 200), step(0.01, 4);
  int shift_fail = 0, mono_fail = 0, oracle_fail = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> s(5);
    for (auto& x : s) x = u(rng);
    double base = pairing::judge_distribution(s).score;
    if (std::abs(base - expected_label(s)) > 1e-9) ++oracle_fail;
    auto shifted = s;
    double c = shift(rng);
    for (auto& x : shifted) x += c;
    if (std::abs(pairing::judge_distribution(shifted).score - base) > 1e-9) ++shift_fail;
    auto up = s;
    up[4] += step(rng);
    if (!(pairing::judge_distribution(up).score > base)) ++mono_fail;
  }
  bool ok = std::abs(uniform - 3.0) <= 1e-9 && shift_fail == 0 && mono_fail == 0 && oracle_fail == 0;
  return {ok, "uniform " + fmt(uniform, 12) + ", shift failures " + std::to_string(shift_fail) +
                  ", monotonicity failures " + std::to_string(mono_fail) + ", oracle failures " +
                  std::to_string(oracle_fail)};
}

// 4. CA fixture through the command line.
Outcome ca_fixture() {
  TempDir dir;
  int rc = run_binary("--config " + quote(kFixtures / "ca" / "config.yaml") + " --work " +
                          quote(dir / "work") + " --out " + quote(dir / "out") + " eval-ca --corpus " +
                          quote(kFixtures / "ca" / "corpus.jsonl") + " --translations " +
                          quote(kFixtures / "ca" / "translations.jsonl"),
                      dir / "log");
  if (rc != 0) return {false, "eval-ca exited " + std::to_string(rc) + ": " + read_file(dir / "log")};
  auto expected = read_json(kFixtures / "ca" / "expected.json");
  auto summary = read_json(dir / "out" / "ca_summary.json");
  std::ostringstream d;
  bool ok = summary.size() == 3;
  for (const auto& row : summary) {
    double ca = row["ca"].get<double>();
    bool row_ok = row["total"] == expected["per_direction"] && std::abs(ca - 0.7) < 1e-12;
    ok = ok && row_ok;
    d << row["pair_id"].get<std::string>() << " CA " << fmt(ca) << "; ";
  }
  // Per-problem categories from ca.csv against the design.
  std::ifstream csv(dir / "out" / "ca.csv");
  std::string line;
  std::getline(csv, line);
  int mismatches = 0, rows = 0;
  std::set<std::string> failure_categories;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string pid, pair, category;
    std::getline(ss, pid, ',');
    std::getline(ss, pair, ',');
    std::getline(ss, category, ',');
    ++rows;
    if (expected["categories"].value(pid, "") != category) ++mismatches;
    if (category != "pass") failure_categories.insert(category);
  }
  ok = ok && rows == static_cast<int>(expected["categories"].size()) && mismatches == 0 &&
       failure_categories ==
           std::set<std::string>{"compile_error", "runtime_error", "incorrect_output", "timeout"};
  d << rows << " problems, " << mismatches << " category mismatches, " << failure_categories.size()
    << " failure categories";
  return {ok, d.str()};
}

// 5. Losses: symmetric list loss, gradients, convex-combination endpoints.
Outcome loss_suite() {
  double sym = losses::list_loss(-1.25, std::vector<double>(10, -1.25));
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> negs(1 + rng() % 10);
    for (auto& x : negs) x = u(rng);
    double pos = u(rng);
    auto g = losses::list_loss_grad(pos, negs);
    // Independent central differences, coordinate by coordinate.
    const double h = 1e-5;
    for (std::size_t k = 0; k <= negs.size(); ++k) {
      double plus, minus;
      if (k == 0) {
        plus = losses::list_loss(pos + h, negs);
        minus = losses::list_loss(pos - h, negs);
      } else {
        auto np = negs, nm = negs;
        np[k - 1] += h;
        nm[k - 1] -= h;
        plus = losses::list_loss(pos, np);
        minus = losses::list_loss(pos, nm);
      }
      double fd = (plus - minus) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[k]) / std::max(std::abs(g[k]), 1e-8));
    }
  }
  int endpoint_fail = 0;
  for (int i = 0; i < 100; ++i) {
    double a = std::abs(u(rng)) * 10, b = std::abs(u(rng)) * 10;
    if (losses::style_loss(a, b, {1.0, losses::ScoreMode::lognorm}) != a) ++endpoint_fail;
    if (losses::style_loss(a, b, {0.0, losses::ScoreMode::lognorm}) != b) ++endpoint_fail;
  }
  bool ok = std::abs(sym - std::log(11.0)) <= 1e-9 && worst <= 1e-4 && endpoint_fail == 0;
  std::ostringstream d;
  d << "l_list " << fmt(sym, 12) << " (ln 11 = " << fmt(std::log(11.0), 12) << "), max FD rel err "
    << worst << ", endpoint failures " << endpoint_fail;
  return {ok, d.str()};
}

std::size_t hand_consensus(const std::vector<double>& sim, std::size_t m) {
  std::size_t best = 0;
  double best_total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double total = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) total += sim[i * m + j];
    if (i == 0 || total > best_total) {
      best = i;
      best_total = total;
    }
  }
  return best;
}

// 6. Consensus choice against hand-summed totals, plus scaling invariance and
// the profile-level selection against explicitly computed pairwise cssim.
Outcome consensus() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(0, 1), scale(0.05, 50);
  int fail = 0, scale_fail = 0;
  for (int t = 0; t < 50; ++t) {
    std::size_t m = 1 + rng() % 10;
    std::vector<double> sim(m * m, 1.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) sim[i * m + j] = sim[j * m + i] = u(rng);
    std::size_t got = styleforge::consensus_index(sim, m);
    if (got != hand_consensus(sim, m)) ++fail;
    auto scaled = sim;
    double c = scale(rng);
    for (auto& x : scaled) x *= c;
    if (styleforge::consensus_index(scaled, m) != got) ++scale_fail;
  }
  // Real candidate sets: random subsets of same-language fixture snippets.
  int select_fail = 0;
  for (const char* lang : {"python", "c", "cpp", "java", "go"}) {
    std::vector<style::StyleProfile> profiles;
    for (int i = 0; i < 10; ++i) {
      auto path = kFixtures / "cssim" /
                  (std::string(lang) + "_0" + std::to_string(i) + "." +
                   (std::string(lang) == "python" ? "py" : lang));
      profiles.push_back(style::profile(CodeSnippet::make(path.filename().string(),
                                                          *language_from_path(path.string()),
                                                          read_file(path))));
    }
    auto idf = style::build_idf(profiles);
    for (int t = 0; t < 4; ++t) {
      std::shuffle(profiles.begin(), profiles.end(), rng);
      std::size_t m = 2 + rng() % 8;
      std::vector<style::StyleProfile> subset(profiles.begin(), profiles.begin() + static_cast<long>(m));
      std::vector<double> sim(m * m, 1.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (i != j) sim[i * m + j] = style::cssim(subset[i], subset[j], idf).cssim;
      if (styleforge::consensus_select(subset, idf).index != hand_consensus(sim, m)) ++select_fail;
    }
  }
  bool ok = fail == 0 && scale_fail == 0 && select_fail == 0;
  return {ok, "50 matrices: " + std::to_string(fail) + " oracle mismatches, " +
                  std::to_string(scale_fail) + " scaling mismatches; 20 snippet sets: " +
                  std::to_string(select_fail) + " mismatches"};
}

struct ToyRun {
  int function_rc = -1, style_rc = -1;
  fs::path out;
};

ToyRun toy_run(const TempDir& dir, const std::string& tag) {
  ToyRun r;
  r.out = dir / ("out-" + tag);
  std::string common = "--config " + quote(kFixtures / "toy" / "config.yaml") + " --work " +
                       quote(dir / ("work-" + tag)) + " --out " + quote(r.out) + " ";
  std::string corpus = " --corpus " + quote(kFixtures / "toy" / "corpus.jsonl") + " --src c --tgt python";
  r.function_rc = run_binary(common + "build-function-data" + corpus, dir / ("function-" + tag + ".log"));
  r.style_rc = run_binary(common + "build-style-data" + corpus, dir / ("style-" + tag + ".log"));
  return r;
}

// 7. Toy corpus twice: identical bytes and the designed funnel.
Outcome determinism(const TempDir& dir, const ToyRun& a) {
  auto b = toy_run(dir, "b");
  auto expected = read_json(kFixtures / "toy" / "expected.json");
  std::ostringstream d;
  bool ok = true;
  // One problem per corpus is designed to fail, so both commands report partial success.
  for (int rc : {a.function_rc, a.style_rc, b.function_rc, b.style_rc})
    if (rc != 2) ok = false;
  auto sa = snapshot(a.out), sb = snapshot(b.out);
  int differing = 0;
  for (const auto& [name, content] : sa)
    if (!sb.count(name) || sb[name] != content) ++differing;
  if (sa.size() != sb.size() || differing) ok = false;
  d << sa.size() << " files, " << differing << " differ; ";

  auto fs_ = read_json(a.out / "function_summary.json");
  auto& fe = expected["function"];
  for (const char* k : {"problems", "paired", "judge_filtered", "difftest_passed", "exported", "failed"})
    if (fs_[k] != fe[k]) {
      ok = false;
      d << "function." << k << " " << fs_[k] << " != " << fe[k] << "; ";
    }
  std::map<std::string, std::set<std::string>> stages;
  std::map<std::string, std::string> chosen;
  std::ifstream fr(a.out / "function_report.jsonl");
  std::string line;
  while (std::getline(fr, line)) {
    auto j = json::parse(line);
    stages[j["stage"].get<std::string>()].insert(j["problem_id"].get<std::string>());
    if (j.contains("tgt_id") && j["tgt_id"].is_string()) chosen[j["problem_id"]] = j["tgt_id"];
  }
  for (auto& [stage, ids] : fe["stages"].items()) {
    std::set<std::string> want(ids.begin(), ids.end());
    if (stages[stage] != want) {
      ok = false;
      d << "stage " << stage << " differs; ";
    }
  }
  for (auto& [pid, tgt] : fe["chosen_target"].items())
    if (chosen[pid] != tgt.get<std::string>()) {
      ok = false;
      d << "chosen target for " << pid << " differs; ";
    }

  auto ss = read_json(a.out / "style_summary.json");
  auto& se = expected["style"];
  for (const char* k : {"problems", "records", "generated", "functional", "negatives", "failed"})
    if (ss[k] != se[k]) {
      ok = false;
      d << "style." << k << " " << ss[k] << " != " << se[k] << "; ";
    }
  if (ss["ineligible"] != se["ineligible"]) {
    ok = false;
    d << "ineligible reasons differ; ";
  }
  std::ifstream sr(a.out / "style_report.jsonl");
  int wrong_choice = 0;
  while (std::getline(sr, line)) {
    auto j = json::parse(line);
    if (j["negatives_kept"].get<int>() > 0 && j["chosen_index"] != se["chosen_index"]) ++wrong_choice;
  }
  if (wrong_choice) {
    ok = false;
    d << wrong_choice << " records chose another positive; ";
  }
  d << "funnels " << (ok ? "match" : "checked");
  return {ok, d.str()};
}

// 8. Every exported negative is below alpha, recomputed from the code.
Outcome negative_threshold(const ToyRun& a) {
  const double alpha = 0.8;
  auto corpus = load_corpus(kFixtures / "toy" / "corpus.jsonl");
  std::vector<style::StyleProfile> docs;
  for (const auto& p : corpus.problems)
    for (const auto* s : p.solutions_in(Language::python)) {
      try {
        docs.push_back(style::profile(*s));
      } catch (const Error&) {
      }
    }
  auto idf = style::build_idf(docs);
  std::ifstream in(a.out / "style.jsonl");
  std::string line;
  int negatives = 0, violations = 0, stored_mismatch = 0;
  while (std::getline(in, line)) {
    auto j = json::parse(line);
    auto pos = CodeSnippet::make("pos", Language::python, j["tgt_pos"]["source_text"]);
    for (std::size_t k = 0; k < j["tgt_negs"].size(); ++k) {
      auto neg = CodeSnippet::make("neg", Language::python, j["tgt_negs"][k]["source_text"]);
      double s = style::cssim(pos, neg, idf).cssim;
      double stored = j["neg_cssim"][k].get<double>();
      ++negatives;
      if (!(s < alpha) || !(stored < alpha)) ++violations;
      if (std::abs(s - stored) > 1e-12) ++stored_mismatch;
    }
  }
  bool ok = negatives > 0 && violations == 0 && stored_mismatch == 0;
  return {ok, std::to_string(negatives) + " negatives, " + std::to_string(violations) +
                  " at or above alpha, " + std::to_string(stored_mismatch) +
                  " disagree with the stored value"};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  TempDir toy_dir;
  ToyRun toy_a;

  struct Criterion {
    std::string name;
    double budget_s;
    std::function<Outcome()> check;
  };
  std::vector<Criterion> criteria{
      {"tree edit distance equals exhaustive search", 60, ted_oracle},
      {"cssim identity and symmetry on 50 snippets", 60, cssim_suite},
      {"judge score properties", 60, judge_properties},
      {"CA fixture 0.700 per direction with designed categories", 180, ca_fixture},
      {"loss values, gradients and endpoints", 60, loss_suite},
      {"consensus selection matches hand-summed oracle", 60, consensus},
      {"toy pipelines are deterministic and match the traced funnel", 120,
       [&] {
         toy_a = toy_run(toy_dir, "a");
         return determinism(toy_dir, toy_a);
       }},
      {"every exported negative is below alpha", 60, [&] { return negative_threshold(toy_a); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    auto start = clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (seconds > c.budget_s) {
      o.ok = false;
      o.detail += "; over the " + fmt(c.budget_s, 0) + " s budget";
    }
    failures += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << c.name << ": " << o.detail
              << " (" << fmt(seconds, 1) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
