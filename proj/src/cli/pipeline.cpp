#include "f2s/cli/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "f2s/support/hash.hpp"
#include "f2s/support/parallel.hpp"
#include "io.hpp"

namespace f2s::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const CodeSnippet* first_solution(const Problem& p, Language lang) {
  auto v = p.solutions_in(lang);
  return v.empty() ? nullptr : v.front();
}

std::vector<CodeSnippet> solutions(const Problem& p, Language lang) {
  std::vector<CodeSnippet> out;
  for (const auto* s : p.solutions_in(lang)) out.push_back(*s);
  return out;
}

sandbox::DiffOptions diff_options(const PipelineConfig& cfg) {
  sandbox::DiffOptions o;
  o.limits = cfg.limits;
  o.policy = cfg.output;
  o.jobs = 1;  // parallelism lives at the problem level
  return o;
}

void stamp(ordered_json& summary, const PipelineConfig& cfg) {
  summary["seed"] = cfg.seed;
  summary["mock"] = cfg.gateway.mock;
  // Live endpoints are not reproducible; tag their outputs with a run id.
  if (!cfg.gateway.mock) {
    auto now = std::chrono::system_clock::now().time_since_epoch().count();
    summary["run_id"] = sha256_hex(std::to_string(now)).substr(0, 12);
  }
}

void require_toolchains(const sandbox::Sandbox& sb, Language src, Language tgt) {
  sb.require_toolchain(src);
  sb.require_toolchain(tgt);
}

}  // namespace

FunctionFunnel build_function_data(const PipelineConfig& cfg, const ProblemSet& corpus,
                                   Language src_lang, Language tgt_lang, const fs::path& out) {
  cfg.validate();
  fs::create_directories(out);
  auto judge_gw = make_gateway(cfg, Role::judge);
  auto embed_gw = make_gateway(cfg, Role::embedding);
  pairing::Embedder embedder(*embed_gw, cfg.embedding_cache);
  const pairing::JudgePrompt judge_prompt(cfg.prompt("judge"));
  const PromptTemplate translate = cfg.prompt("translate");
  sandbox::Sandbox sb(cfg.toolchains, cfg.work_dir / "sandbox");
  require_toolchains(sb, src_lang, tgt_lang);

  const auto& problems = corpus.problems;
  struct Outcome {
    ordered_json report;
    std::optional<IftRecord> record;
    bool paired = false, judged = false, passed = false, failed = false;
  };
  std::vector<Outcome> outcomes(problems.size());
  parallel_for_index(problems.size(), cfg.jobs, [&](std::size_t i) {
    const Problem& p = problems[i];
    Outcome& o = outcomes[i];
    o.report = {{"problem_id", p.problem_id}};
    const CodeSnippet* src = first_solution(p, src_lang);
    auto candidates = solutions(p, tgt_lang);
    if (!src || candidates.empty()) {
      o.report["stage"] = "unpaired";
      return;
    }
    if (p.tests.empty()) {
      o.report["stage"] = "no_tests";
      return;
    }
    o.paired = true;
    o.report["src_id"] = src->snippet_id;
    try {
      auto choice = pairing::select_best_pair(*judge_gw, embedder, judge_prompt, *src, candidates,
                                              cfg.judge, 1);
      o.report["tgt_id"] = choice.tgt.snippet_id;
      o.report["score"] = choice.judgement.score;
      o.report["similarity"] = choice.similarity;
      if (choice.judgement.score < cfg.judge_min_score) {
        o.report["stage"] = "judge_filtered";
        return;
      }
      o.judged = true;
      auto report = sandbox::differential_test(sb, *src, choice.tgt, p.tests, diff_options(cfg));
      o.report["category"] = sandbox::category_tag(report.category);
      if (!report.pass_all) {
        o.report["stage"] = "difftest_failed";
        return;
      }
      o.passed = true;
      o.record = make_ift_record(*src, choice.tgt, translate);
      o.report["stage"] = "exported";
    } catch (const sandbox::PairInvalidError& e) {
      o.failed = true;
      o.report["stage"] = "source_invalid";
      o.report["error"] = e.what();
    } catch (const Error& e) {
      o.failed = true;
      o.report["stage"] = "error";
      o.report["error"] = e.what();
    }
  });

  FunctionFunnel f;
  f.problems = problems.size();
  std::vector<IftRecord> records;
  std::vector<ordered_json> reports;
  for (auto& o : outcomes) {
    f.paired += o.paired;
    f.judge_filtered += o.judged;
    f.difftest_passed += o.passed;
    f.failed += o.failed;
    if (o.record) records.push_back(std::move(*o.record));
    if (o.failed) spdlog::warn("{}: {}", o.report["problem_id"].get<std::string>(),
                               o.report["error"].get<std::string>());
    reports.push_back(std::move(o.report));
  }
  f.exported = export_ift_dataset(records, out / "ift.jsonl");
  write_jsonl(out / "function_report.jsonl", reports);
  ordered_json summary = {{"src_lang", language_tag(src_lang)},
                          {"tgt_lang", language_tag(tgt_lang)},
                          {"problems", f.problems},
                          {"paired", f.paired},
                          {"judge_filtered", f.judge_filtered},
                          {"difftest_passed", f.difftest_passed},
                          {"exported", f.exported},
                          {"failed", f.failed}};
  stamp(summary, cfg);
  write_json(out / "function_summary.json", summary);
  return f;
}

StyleFunnel build_style_data(const PipelineConfig& cfg, const ProblemSet& corpus,
                             Language src_lang, Language tgt_lang, const fs::path& out) {
  cfg.validate();
  fs::create_directories(out);
  auto generator = make_gateway(cfg, Role::generator);
  auto negative = make_gateway(cfg, Role::negative);
  const PromptTemplate style_prompt = cfg.prompt("style_aware");
  const PromptTemplate translate = cfg.prompt("translate");
  sandbox::Sandbox sb(cfg.toolchains, cfg.work_dir / "sandbox");
  require_toolchains(sb, src_lang, tgt_lang);

  // Name frequencies come from the target-language solutions of the corpus.
  std::vector<const CodeSnippet*> docs;
  for (const auto& p : corpus.problems)
    for (const auto* s : p.solutions_in(tgt_lang)) docs.push_back(s);
  std::vector<std::optional<style::StyleProfile>> profiles(docs.size());
  parallel_for_index(docs.size(), cfg.jobs, [&](std::size_t i) {
    try {
      profiles[i] = style::profile(*docs[i]);
    } catch (const Error&) {
    }
  });
  std::vector<style::StyleProfile> parsed;
  for (auto& p : profiles)
    if (p) parsed.push_back(std::move(*p));
  const style::IdfTable idf = style::build_idf(parsed);

  const auto& problems = corpus.problems;
  struct Outcome {
    ordered_json report;
    std::optional<StyleRecord> record;
    std::size_t generated = 0, functional = 0, negatives = 0;
    std::string reason;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(problems.size());
  parallel_for_index(problems.size(), cfg.jobs, [&](std::size_t i) {
    const Problem& p = problems[i];
    Outcome& o = outcomes[i];
    ordered_json warnings = ordered_json::array();
    std::optional<std::size_t> chosen;
    const CodeSnippet* src = first_solution(p, src_lang);
    try {
      if (!src) {
        o.reason = "no source solution";
      } else if (p.tests.empty()) {
        o.reason = "no tests";
      } else {
        auto gen = styleforge::generate_positive_candidates(*generator, style_prompt, *src,
                                                            tgt_lang, cfg.style);
        for (auto& w : gen.warnings) warnings.push_back(w);
        o.generated = gen.candidates.size();
        auto set = styleforge::filter_functional(sb, std::move(gen.candidates), *src, p.tests,
                                                 diff_options(cfg));
        o.functional = set.functional.size();
        std::vector<style::StyleProfile> tplus;
        std::vector<std::size_t> tplus_index;
        for (auto idx : set.functional) {
          try {
            tplus.push_back(style::profile(set.all[idx]));
            tplus_index.push_back(idx);
          } catch (const Error& e) {
            warnings.push_back(set.all[idx].snippet_id + " does not parse: " + e.what());
          }
        }
        if (set.functional.empty()) {
          o.reason = "no functional candidates";
        } else if (tplus.empty()) {
          o.reason = "unparseable candidates";
        } else {
          auto consensus = styleforge::consensus_select(tplus, idf, 1);
          chosen = tplus_index[consensus.index];
          const CodeSnippet& pos = set.all[*chosen];
          auto negs = styleforge::collect_negatives(*negative, translate, *src, pos, cfg.style, idf);
          for (auto& w : negs.warnings) warnings.push_back(w);
          o.negatives = negs.kept.size();
          if (negs.kept.empty()) o.reason = "no negatives below alpha";
          else o.record = styleforge::build_style_record(*src, pos, negs.kept, cfg.style.alpha);
        }
      }
    } catch (const styleforge::NoCandidatesError& e) {
      o.reason = "no candidates";
      warnings.push_back(e.what());
    } catch (const sandbox::PairInvalidError& e) {
      o.reason = "source invalid";
      o.failed = true;
      warnings.push_back(e.what());
    } catch (const Error& e) {
      o.reason = "error";
      o.failed = true;
      warnings.push_back(e.what());
    }
    o.report = {{"problem_id", p.problem_id},
                {"generated", o.generated},
                {"functional", o.functional},
                {"chosen_index", chosen ? ordered_json(*chosen) : ordered_json(nullptr)},
                {"negatives_kept", o.negatives},
                {"ineligible_reason", o.reason.empty() ? ordered_json(nullptr) : ordered_json(o.reason)},
                {"warnings", std::move(warnings)}};
  });

  StyleFunnel f;
  f.problems = problems.size();
  std::vector<StyleRecord> records;
  std::vector<ordered_json> reports;
  for (auto& o : outcomes) {
    f.generated += o.generated;
    f.functional += o.functional;
    f.failed += o.failed;
    if (o.record) {
      f.negatives += o.record->tgt_negs.size();
      records.push_back(std::move(*o.record));
    } else {
      ++f.ineligible[o.reason];
    }
    reports.push_back(std::move(o.report));
  }
  f.records = export_style_dataset(records, out / "style.jsonl", cfg.style.alpha);
  write_jsonl(out / "style_report.jsonl", reports);
  ordered_json hist = ordered_json::object();
  for (const auto& [reason, n] : f.ineligible) hist[reason] = n;
  ordered_json summary = {{"src_lang", language_tag(src_lang)},
                          {"tgt_lang", language_tag(tgt_lang)},
                          {"problems", f.problems},
                          {"records", f.records},
                          {"generated", f.generated},
                          {"functional", f.functional},
                          {"negatives", f.negatives},
                          {"failed", f.failed},
                          {"ineligible", hist},
                          {"alpha", cfg.style.alpha},
                          {"m", cfg.style.m},
                          {"n", cfg.style.n}};
  stamp(summary, cfg);
  write_json(out / "style_summary.json", summary);
  return f;
}

namespace {

struct Translation {
  std::string problem_id;
  Language src = Language::unknown;
  CodeSnippet snippet;
};

std::vector<Translation> load_translations(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read translations " + path.string());
  std::vector<Translation> out;
  std::set<std::tuple<std::string, Language, Language>> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(number);
    try {
      auto j = nlohmann::ordered_json::parse(line);
      Translation t;
      t.problem_id = j.at("problem_id").get<std::string>();
      auto src = parse_language(j.at("src_lang").get<std::string>());
      if (!src) throw CorpusError("unknown src_lang");
      t.src = *src;
      t.snippet = snippet_from_json(j.at("translation"));
      if (!seen.emplace(t.problem_id, t.src, t.snippet.language).second)
        throw CorpusError("duplicate translation for " + t.problem_id);
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(where + ": " + e.what());
    } catch (const CorpusError& e) {
      throw CorpusError(where + ": " + e.what());
    }
  }
  return out;
}

std::string pair_id(Language s, Language t) {
  return std::string(language_tag(s)) + "->" + std::string(language_tag(t));
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::vector<CaRow> eval_ca(const PipelineConfig& cfg, const ProblemSet& corpus,
                           const fs::path& translations_path, std::optional<Language> src_filter,
                           std::optional<Language> tgt_filter, const fs::path& out) {
  cfg.validate();
  fs::create_directories(out);
  auto translations = load_translations(translations_path);
  std::set<std::pair<Language, Language>> pairs;
  if (src_filter && tgt_filter) {
    pairs.emplace(*src_filter, *tgt_filter);
  } else {
    for (const auto& t : translations)
      if ((!src_filter || t.src == *src_filter) && (!tgt_filter || t.snippet.language == *tgt_filter))
        pairs.emplace(t.src, t.snippet.language);
  }
  std::map<std::tuple<std::string, Language, Language>, const CodeSnippet*> lookup;
  for (const auto& t : translations) lookup[{t.problem_id, t.src, t.snippet.language}] = &t.snippet;

  sandbox::Sandbox sb(cfg.toolchains, cfg.work_dir / "sandbox");
  std::vector<CaRow> rows;
  std::vector<ordered_json> report_lines;
  std::string csv = "problem_id,pair_id,category,ca_contribution\n";
  for (auto [src_lang, tgt_lang] : pairs) {
    require_toolchains(sb, src_lang, tgt_lang);
    std::vector<const Problem*> todo;
    for (const auto& p : corpus.problems)
      if (first_solution(p, src_lang) && !p.tests.empty()) todo.push_back(&p);
    struct Item {
      std::optional<sandbox::DiffTestReport> report;
      bool missing = false;
      std::string invalid;
    };
    std::vector<Item> items(todo.size());
    std::vector<std::exception_ptr> fatal(todo.size());
    parallel_for_index(todo.size(), cfg.jobs, [&](std::size_t i) {
      const Problem& p = *todo[i];
      auto it = lookup.find({p.problem_id, src_lang, tgt_lang});
      if (it == lookup.end()) {
        // A missing translation cannot pass; it counts as wrong output.
        items[i].missing = true;
        sandbox::DiffTestReport r;
        r.category = sandbox::Category::incorrect_output;
        items[i].report = r;
        return;
      }
      try {
        items[i].report = sandbox::differential_test(sb, *first_solution(p, src_lang), *it->second,
                                                     p.tests, diff_options(cfg));
      } catch (const sandbox::PairInvalidError& e) {
        items[i].invalid = e.what();
      } catch (...) {
        fatal[i] = std::current_exception();
      }
    });
    for (auto& e : fatal)
      if (e) std::rethrow_exception(e);

    CaRow row;
    row.src = src_lang;
    row.tgt = tgt_lang;
    std::vector<sandbox::DiffTestReport> reports;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (!items[i].invalid.empty()) {
        ++row.invalid;
        spdlog::warn("{} {}: {}", todo[i]->problem_id, pair_id(src_lang, tgt_lang),
                     items[i].invalid);
        report_lines.push_back({{"problem_id", todo[i]->problem_id},
                                {"pair_id", pair_id(src_lang, tgt_lang)},
                                {"invalid", items[i].invalid}});
        continue;
      }
      row.missing += items[i].missing;
      reports.push_back(*items[i].report);
    }
    if (reports.empty()) {
      spdlog::warn("{}: nothing to evaluate", pair_id(src_lang, tgt_lang));
      for (auto c : sandbox::kCategories) row.summary.counts[c] = 0;
    } else {
      row.summary = sandbox::compute_ca(reports);
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (!items[i].invalid.empty()) continue;
      const auto& r = reports[k++];
      ordered_json line = {{"problem_id", todo[i]->problem_id},
                           {"pair_id", pair_id(src_lang, tgt_lang)},
                           {"missing", items[i].missing},
                           {"report", sandbox::to_json(r)}};
      report_lines.push_back(std::move(line));
      double contribution = r.pass_all ? 1.0 / static_cast<double>(reports.size()) : 0.0;
      csv += todo[i]->problem_id + "," + pair_id(src_lang, tgt_lang) + "," +
             std::string(sandbox::category_tag(r.category)) + "," + fixed6(contribution) + "\n";
    }
    rows.push_back(row);
  }

  std::string table = "pair,total,passed,ca,pass,compile_error,runtime_error,incorrect_output,"
                      "timeout,missing,invalid\n";
  ordered_json summary = ordered_json::array();
  for (const auto& r : rows) {
    auto count = [&](sandbox::Category c) { return r.summary.counts.at(c); };
    table += pair_id(r.src, r.tgt) + "," + std::to_string(r.summary.total) + "," +
             std::to_string(r.summary.passed) + "," + fixed6(r.summary.ca);
    for (auto c : sandbox::kCategories) table += "," + std::to_string(count(c));
    table += "," + std::to_string(r.missing) + "," + std::to_string(r.invalid) + "\n";
    auto j = sandbox::to_json(r.summary);
    j["pair_id"] = pair_id(r.src, r.tgt);
    j["missing"] = r.missing;
    j["invalid"] = r.invalid;
    summary.push_back(std::move(j));
  }
  write_jsonl(out / "ca_reports.jsonl", report_lines);
  write_text(out / "ca.csv", csv);
  write_text(out / "ca_table.csv", table);
  write_json(out / "ca_summary.json", summary);
  return rows;
}

}  // namespace f2s::cli
