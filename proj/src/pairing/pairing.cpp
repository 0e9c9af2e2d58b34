#include "f2s/pairing/pairing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "f2s/support/hash.hpp"
#include "f2s/support/parallel.hpp"

namespace f2s::pairing {

std::string_view judge_mode_tag(JudgeMode m) {
  return m == JudgeMode::aggregate ? "aggregate" : "explicit";
}

std::optional<JudgeMode> parse_judge_mode(std::string_view tag) {
  if (tag == "aggregate") return JudgeMode::aggregate;
  if (tag == "explicit") return JudgeMode::explicit_label;
  return std::nullopt;
}

void JudgeConfig::validate() const {
  if (K < 2 || K > 9) throw ArgumentError("judge K must be in [2, 9]");
  if (recall_k < 1) throw ArgumentError("recall_k must be at least 1");
}

JudgeDistribution judge_distribution(const std::vector<double>& logits) {
  if (logits.empty()) throw ArgumentError("no judge logits");
  for (double s : logits)
    if (!std::isfinite(s)) throw ArgumentError("judge logits must be finite");
  JudgeDistribution d;
  d.logits = logits;
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0;
  d.probs.reserve(logits.size());
  for (double s : logits) {
    d.probs.push_back(std::exp(s - top));
    z += d.probs.back();
  }
  for (std::size_t k = 0; k < d.probs.size(); ++k) {
    d.probs[k] /= z;
    d.score += d.probs[k] * static_cast<double>(k + 1);
  }
  d.score = std::clamp(d.score, 1.0, static_cast<double>(logits.size()));
  return d;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ArgumentError("embedding dimensions differ: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw ArgumentError("cosine similarity of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Embedder::Embedder(gateway::Gateway& gw, std::optional<std::filesystem::path> cache_file)
    : gw_(gw), cache_file_(std::move(cache_file)) {
  if (!cache_file_ || !std::filesystem::exists(*cache_file_)) return;
  std::ifstream in(*cache_file_);
  std::string line;
  while (std::getline(in, line)) {
    try {
      auto j = nlohmann::json::parse(line);
      memo_[j.at("key").get<std::string>()] = j.at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      // A torn last line from an interrupted run; the entry is recomputed.
    }
  }
}

std::vector<double> Embedder::embed(const std::string& text) {
  const std::string key = sha256_hex(text);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  auto v = gw_.embed(text);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = memo_.emplace(key, v);
  if (inserted && cache_file_) {
    std::ofstream out(*cache_file_, std::ios::app);
    out << nlohmann::json{{"key", key}, {"embedding", v}}.dump() << '\n';
  }
  return it->second;
}

std::vector<Recalled> recall_top_k(Embedder& embedder, const CodeSnippet& src,
                                   const std::vector<CodeSnippet>& candidates, int k) {
  if (k < 1) throw ArgumentError("recall k must be at least 1");
  if (candidates.empty()) throw ArgumentError("no candidates to recall from");
  const auto query = embedder.embed(src.source_text);
  std::vector<Recalled> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates)
    out.push_back({c, cosine_similarity(query, embedder.embed(c.source_text))});
  std::stable_sort(out.begin(), out.end(), [](const Recalled& a, const Recalled& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.candidate.snippet_id < b.candidate.snippet_id;
  });
  out.resize(std::min<std::size_t>(out.size(), static_cast<std::size_t>(k)));
  return out;
}

JudgePrompt::JudgePrompt(PromptTemplate base) : base_(std::move(base)) {
  // Rubric lines look like "k: description" for k = 1..5.
  const std::string& text = base_.text();
  static const std::regex line(R"((^|\n)([1-5]): ([^\n]*))");
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), line); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    if (std::stoi(m[2].str()) != static_cast<int>(descriptors_.size()) + 1) continue;
    descriptors_.push_back(m[3].str());
    spans.emplace_back(static_cast<std::size_t>(m.position(2)),
                       static_cast<std::size_t>(m.position(3) + m.length(3)));
  }
  if (descriptors_.size() != 5 || text.find("from 1 to 5") == std::string::npos)
    throw ConfigError("judge template must contain a five-level rubric \"1: ...\" to \"5: ...\"");
  rubric_begin_ = spans.front().first;
  rubric_end_ = spans.back().second;
}

std::string JudgePrompt::rubric_template(int K) const {
  if (K < 2 || K > 9) throw ArgumentError("judge K must be in [2, 9]");
  const std::string& text = base_.text();
  if (K == 5) return text;
  std::string rubric;
  for (int k = 1; k <= K; ++k) {
    int idx = static_cast<int>(std::lround((k - 1) * 4.0 / (K - 1)));
    if (k > 1) rubric += "\n\n";
    rubric += std::to_string(k) + ": " + descriptors_[static_cast<std::size_t>(idx)];
  }
  std::string out = text.substr(0, rubric_begin_) + rubric + text.substr(rubric_end_);
  auto at = out.find("from 1 to 5");
  out.replace(at, 11, "from 1 to " + std::to_string(K));
  return out;
}

std::string JudgePrompt::render(const CodeSnippet& src, const CodeSnippet& tgt, int K) const {
  return PromptTemplate(rubric_template(K))
      .render({{"SOURCE_LANG", std::string(language_display_name(src.language))},
               {"TARGET_LANG", std::string(language_display_name(tgt.language))},
               {"SOURCE_CODE", src.source_text},
               {"TARGET_CODE", tgt.source_text}});
}

std::vector<std::string> judge_labels(int K) {
  std::vector<std::string> labels;
  for (int k = 1; k <= K; ++k) labels.push_back(std::to_string(k));
  return labels;
}

JudgeDistribution judge_score(gateway::Gateway& gw, const JudgePrompt& prompt,
                              const CodeSnippet& src, const CodeSnippet& tgt,
                              const JudgeConfig& cfg) {
  cfg.validate();
  const auto labels = judge_labels(cfg.K);
  auto logits = gw.score_labels(prompt.render(src, tgt, cfg.K), labels);
  std::vector<double> s;
  for (const auto& l : labels) s.push_back(logits.label_logits.at(l));
  return judge_distribution(s);
}

int parse_label(std::string_view generation, int K) {
  auto it = std::find_if(generation.begin(), generation.end(),
                         [](unsigned char c) { return std::isdigit(c); });
  if (it == generation.end())
    throw ScoringError("judge output has no label: \"" + std::string(generation.substr(0, 80)) +
                       "\"");
  auto end = std::find_if(it, generation.end(), [](unsigned char c) { return !std::isdigit(c); });
  std::string digits(it, end);
  if (digits.size() > 2 || std::stoi(digits) < 1 || std::stoi(digits) > K)
    throw ScoringError("judge label " + digits + " is outside 1.." + std::to_string(K));
  return std::stoi(digits);
}

int explicit_score(gateway::Gateway& gw, const JudgePrompt& prompt, const CodeSnippet& src,
                   const CodeSnippet& tgt, const JudgeConfig& cfg) {
  cfg.validate();
  gateway::GenerationParams params;
  params.temperature = 0;
  params.max_tokens = 8;
  params.samples = 1;
  auto out = gw.complete(prompt.render(src, tgt, cfg.K), params);
  return parse_label(out.at(0).text, cfg.K);
}

PairChoice select_best_pair(gateway::Gateway& gw, Embedder& embedder, const JudgePrompt& prompt,
                            const CodeSnippet& src, const std::vector<CodeSnippet>& candidates,
                            const JudgeConfig& cfg, int jobs) {
  cfg.validate();
  auto recalled = recall_top_k(embedder, src, candidates, cfg.recall_k);
  std::vector<JudgedCandidate> judged(recalled.size());
  parallel_for_index(recalled.size(), jobs, [&](std::size_t i) {
    auto& j = judged[i];
    j.candidate = recalled[i].candidate;
    j.similarity = recalled[i].similarity;
    try {
      if (cfg.mode == JudgeMode::aggregate) {
        j.judgement = judge_score(gw, prompt, src, j.candidate, cfg);
      } else {
        JudgeDistribution d;
        d.score = explicit_score(gw, prompt, src, j.candidate, cfg);
        j.judgement = d;
      }
    } catch (const Error& e) {
      j.error = e.what();
    }
  });
  const JudgedCandidate* best = nullptr;
  for (const auto& j : judged) {
    if (!j.judgement) continue;
    if (!best) {
      best = &j;
      continue;
    }
    double a = j.judgement->score, b = best->judgement->score;
    if (a > b || (a == b && (j.similarity > best->similarity ||
                             (j.similarity == best->similarity &&
                              j.candidate.snippet_id < best->candidate.snippet_id))))
      best = &j;
  }
  if (!best) {
    std::string why = judged.empty() ? "no candidates" : judged.front().error;
    throw AllCandidatesFailedError("every judge call failed for " + src.snippet_id + ": " + why);
  }
  PairChoice choice;
  choice.tgt = best->candidate;
  choice.judgement = *best->judgement;
  choice.similarity = best->similarity;
  choice.judged = std::move(judged);
  return choice;
}

}  // namespace f2s::pairing
