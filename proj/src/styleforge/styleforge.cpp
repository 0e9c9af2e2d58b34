#include "f2s/styleforge/styleforge.hpp"

#include <algorithm>
#include <cmath>

#include "f2s/support/parallel.hpp"

namespace f2s::styleforge {

void StyleDataConfig::validate() const {
  if (m < 1) throw ArgumentError("style m must be at least 1");
  if (n < 1) throw ArgumentError("style n must be at least 1");
  if (!(alpha > 0 && alpha <= 1)) throw ArgumentError("alpha must be in (0, 1]");
  if (!std::isfinite(temperature) || temperature < 0)
    throw ArgumentError("temperature must be finite and non-negative");
}

int StyleDataConfig::negative_batch() const { return std::max(2 * n, m); }

namespace {

std::map<std::string, std::string> prompt_values(const CodeSnippet& src, Language tgt_lang) {
  return {{"SOURCE_LANG", std::string(language_display_name(src.language))},
          {"TARGET_LANG", std::string(language_display_name(tgt_lang))},
          {"SOURCE_CODE", src.source_text}};
}

gateway::GenerationParams sampling(double temperature, int samples) {
  gateway::GenerationParams p;
  p.temperature = temperature;
  p.samples = samples;
  p.stop = {std::string(gateway::kEndOfCode)};
  return p;
}

}  // namespace

Generated generate_positive_candidates(gateway::Gateway& gw, const PromptTemplate& style_prompt,
                                       const CodeSnippet& src, Language tgt_lang,
                                       const StyleDataConfig& cfg) {
  cfg.validate();
  std::vector<gateway::Completion> raw;
  try {
    raw = gw.complete(style_prompt.render(prompt_values(src, tgt_lang)),
                      sampling(cfg.temperature, cfg.m));
  } catch (const Error& e) {
    throw NoCandidatesError("positive generation failed for " + src.snippet_id + ": " + e.what());
  }
  Generated g;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string code = gateway::extract_code(raw[i].text);
    if (code.empty()) {
      g.warnings.push_back("positive candidate " + std::to_string(i) + " has no code");
      continue;
    }
    g.candidates.push_back(CodeSnippet::make(src.snippet_id + "/pos" + std::to_string(i),
                                             tgt_lang, std::move(code), Origin::generated));
  }
  if (g.candidates.empty())
    throw NoCandidatesError("no usable positive candidates for " + src.snippet_id);
  return g;
}

std::vector<CodeSnippet> CandidateSet::functional_snippets() const {
  std::vector<CodeSnippet> out;
  for (auto i : functional) out.push_back(all[i]);
  return out;
}

CandidateSet filter_functional(sandbox::Sandbox& sb, std::vector<CodeSnippet> candidates,
                               const CodeSnippet& src, const std::vector<TestCase>& tests,
                               const sandbox::DiffOptions& options) {
  CandidateSet set;
  set.all = std::move(candidates);
  set.reports.resize(set.all.size());
  for (std::size_t i = 0; i < set.all.size(); ++i) {
    set.reports[i] = sandbox::differential_test(sb, src, set.all[i], tests, options);
    if (set.reports[i].pass_all) set.functional.push_back(i);
  }
  return set;
}

std::size_t consensus_index(const std::vector<double>& sim, std::size_t m) {
  if (m == 0) throw ArgumentError("consensus over an empty set");
  if (sim.size() != m * m) throw ArgumentError("similarity matrix must be m x m");
  std::size_t best = 0;
  double best_total = -INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    double total = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) total += sim[i * m + j];
    if (total > best_total) {
      best_total = total;
      best = i;
    }
  }
  return best;
}

Consensus consensus_select(const std::vector<style::StyleProfile>& tplus,
                           const style::IdfTable& idf, int jobs) {
  const std::size_t m = tplus.size();
  if (m == 0) throw ArgumentError("consensus over an empty set");
  std::vector<double> sim(m * m, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  parallel_for_index(pairs.size(), jobs, [&](std::size_t k) {
    auto [i, j] = pairs[k];
    double s = style::cssim(tplus[i], tplus[j], idf).cssim;
    sim[i * m + j] = s;
    sim[j * m + i] = s;
  });
  Consensus c;
  c.index = consensus_index(sim, m);
  c.totals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) c.totals[i] += sim[i * m + j];
  return c;
}

NegativeSet collect_negatives(gateway::Gateway& gw, const PromptTemplate& translate_prompt,
                              const CodeSnippet& src, const CodeSnippet& tgt_pos,
                              const StyleDataConfig& cfg, const style::IdfTable& idf) {
  cfg.validate();
  auto raw = gw.complete(translate_prompt.render(prompt_values(src, tgt_pos.language)),
                         sampling(cfg.temperature, cfg.negative_batch()));
  NegativeSet set;
  set.generated = raw.size();
  const auto pos = style::profile(tgt_pos);
  std::vector<Negative> below;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string code = gateway::extract_code(raw[i].text);
    if (code.empty()) {
      set.warnings.push_back("negative candidate " + std::to_string(i) + " has no code");
      continue;
    }
    auto snippet = CodeSnippet::make(src.snippet_id + "/neg" + std::to_string(i),
                                     tgt_pos.language, std::move(code), Origin::generated);
    double s;
    try {
      s = style::cssim(pos, style::profile(snippet), idf).cssim;
    } catch (const Error& e) {
      set.warnings.push_back("negative candidate " + std::to_string(i) + " skipped: " + e.what());
      continue;
    }
    if (s < cfg.alpha) below.push_back({std::move(snippet), s});
  }
  std::stable_sort(below.begin(), below.end(),
                   [](const Negative& a, const Negative& b) { return a.cssim < b.cssim; });
  if (below.size() > static_cast<std::size_t>(cfg.n)) below.resize(static_cast<std::size_t>(cfg.n));
  if (!below.empty() && below.size() < static_cast<std::size_t>(cfg.n))
    set.warnings.push_back("only " + std::to_string(below.size()) + " of " +
                           std::to_string(cfg.n) + " negatives fall below alpha");
  set.kept = std::move(below);
  return set;
}

StyleRecord build_style_record(const CodeSnippet& src, const CodeSnippet& tgt_pos,
                               const std::vector<Negative>& negatives, double alpha) {
  StyleRecord r;
  r.src = src;
  r.tgt_pos = tgt_pos;
  for (const auto& n : negatives) {
    r.tgt_negs.push_back(n.code);
    r.neg_cssim.push_back(n.cssim);
  }
  check_style_record(r, alpha);
  return r;
}

}  // namespace f2s::styleforge
