#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "f2s/cli/pipeline.hpp"
#include "f2s/support/parallel.hpp"
#include "io.hpp"

namespace f2s::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out = "out";
  bool mock = false;
  std::string fixtures;
  std::string work;
  bool quiet = false;
};

PipelineConfig resolve(const Common& c) {
  PipelineConfig cfg = load_config(c.config.empty() ? std::nullopt : std::optional<fs::path>(c.config),
                                   environment());
  if (c.seed) cfg.seed = *c.seed;
  if (c.jobs) cfg.jobs = *c.jobs;
  if (c.mock) cfg.gateway.mock = true;
  if (!c.fixtures.empty()) cfg.gateway.fixtures = fs::absolute(c.fixtures);
  if (!c.work.empty()) cfg.work_dir = fs::absolute(c.work);
  cfg.validate();
  return cfg;
}

Language language_arg(const std::string& s) {
  auto l = parse_language(s);
  if (!l) throw ArgumentError("unknown language '" + s + "'");
  return *l;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_ingest(const Common& common, const std::string& corpus_path) {
  ProblemSet set;
  try {
    set = load_corpus(corpus_path);
  } catch (const CorpusError& e) {
    spdlog::error("{}", e.what());
    return kExitFatal;
  }
  ordered_json problems = ordered_json::array();
  std::size_t invalid = 0, warned = 0;
  for (const auto& p : set.problems) {
    auto r = validate_problem(p);
    invalid += !r.valid();
    warned += !r.warnings.empty();
    if (r.valid() && r.warnings.empty()) continue;
    problems.push_back({{"problem_id", r.problem_id},
                        {"violations", r.violations},
                        {"warnings", r.warnings}});
  }
  ordered_json skipped = ordered_json::array();
  for (const auto& s : set.skipped) skipped.push_back({{"line", s.line_number}, {"reason", s.reason}});
  ordered_json summary = {{"corpus", corpus_path},
                          {"problems", set.problems.size()},
                          {"valid", set.problems.size() - invalid},
                          {"invalid", invalid},
                          {"with_warnings", warned},
                          {"skipped_lines", skipped},
                          {"details", problems}};
  write_json(fs::path(common.out) / "ingest_summary.json", summary);
  std::cout << dump_json(summary, 2) << "\n";
  if (set.problems.empty()) {
    spdlog::error("{} holds no problems", corpus_path);
    return kExitFatal;
  }
  return invalid ? kExitFatal : kExitOk;
}

int cmd_function(const Common& common, const std::string& corpus, const std::string& src,
                 const std::string& tgt) {
  auto cfg = resolve(common);
  auto set = load_corpus(corpus);
  auto f = build_function_data(cfg, set, language_arg(src), language_arg(tgt), common.out);
  std::cout << "problems " << f.problems << "  paired " << f.paired << "  judge_filtered "
            << f.judge_filtered << "  difftest_passed " << f.difftest_passed << "  exported "
            << f.exported << "  failed " << f.failed << "\n";
  return f.failed ? kExitPartial : kExitOk;
}

int cmd_style(const Common& common, const std::string& corpus, const std::string& src,
              const std::string& tgt) {
  auto cfg = resolve(common);
  auto set = load_corpus(corpus);
  auto f = build_style_data(cfg, set, language_arg(src), language_arg(tgt), common.out);
  std::cout << "problems " << f.problems << "  records " << f.records << "  generated "
            << f.generated << "  functional " << f.functional << "  negatives " << f.negatives
            << "  failed " << f.failed << "\n";
  for (const auto& [reason, n] : f.ineligible) std::cout << "  ineligible: " << reason << " " << n << "\n";
  return f.failed ? kExitPartial : kExitOk;
}

int cmd_eval_ca(const Common& common, const std::string& corpus, const std::string& translations,
                const std::string& src, const std::string& tgt) {
  auto cfg = resolve(common);
  auto set = load_corpus(corpus);
  std::optional<Language> s, t;
  if (!src.empty()) s = language_arg(src);
  if (!tgt.empty()) t = language_arg(tgt);
  auto rows = eval_ca(cfg, set, translations, s, t, common.out);
  bool partial = false;
  for (const auto& r : rows) {
    char ca[16];
    std::snprintf(ca, sizeof ca, "%.3f", r.summary.ca);
    std::cout << language_tag(r.src) << "->" << language_tag(r.tgt) << "  CA " << ca << "  ("
              << r.summary.passed << "/" << r.summary.total << ")";
    for (auto c : sandbox::kCategories)
      std::cout << "  " << sandbox::category_tag(c) << " " << r.summary.counts.at(c);
    std::cout << "\n";
    partial = partial || r.invalid > 0;
  }
  return partial ? kExitPartial : kExitOk;
}

CodeSnippet snippet_from_file(const std::string& path, const std::string& lang) {
  std::optional<Language> l = lang.empty() ? language_from_path(path) : parse_language(lang);
  if (!l) throw ArgumentError("cannot tell the language of " + path + "; pass --lang");
  return CodeSnippet::make(path, *l, read_text(path), Origin::manual);
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100);
  return buf;
}

int cmd_cssim(const Common& common, const std::vector<std::string>& files, const std::string& batch,
              const std::string& lang, const std::string& idf_corpus, const std::string& idf_lang) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!batch.empty()) {
    std::istringstream in(read_text(batch));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string a, b;
      if (!(ls >> a) || a.starts_with("#")) continue;
      if (!(ls >> b)) throw ArgumentError("manifest line needs two paths: " + line);
      fs::path base = fs::path(batch).parent_path();
      auto at = [&](const std::string& p) {
        return fs::path(p).is_absolute() ? p : (base / p).string();
      };
      pairs.emplace_back(at(a), at(b));
    }
  } else if (files.size() == 2) {
    pairs.emplace_back(files[0], files[1]);
  } else {
    throw ArgumentError("cssim takes two files or --batch");
  }

  // Parse every distinct file once; failures become error rows.
  std::map<std::string, std::optional<style::StyleProfile>> profiles;
  std::map<std::string, std::string> errors;
  for (const auto& [a, b] : pairs)
    for (const auto& f : {a, b}) {
      if (profiles.count(f)) continue;
      try {
        profiles[f] = style::profile(snippet_from_file(f, lang));
      } catch (const Error& e) {
        profiles[f] = std::nullopt;
        errors[f] = e.what();
      }
    }
  style::IdfTable idf;
  if (!idf_corpus.empty()) {
    auto set = load_corpus(idf_corpus);
    std::vector<style::StyleProfile> docs;
    for (const auto& p : set.problems)
      for (const auto& s : p.solutions) {
        if (!idf_lang.empty() && s.language != language_arg(idf_lang)) continue;
        try {
          docs.push_back(style::profile(s));
        } catch (const Error&) {
        }
      }
    idf = style::build_idf(docs);
  } else {
    std::vector<style::StyleProfile> docs;
    for (const auto& [f, p] : profiles)
      if (p) docs.push_back(*p);
    idf = style::build_idf(docs);
  }

  fs::create_directories(common.out);
  if (batch.empty()) {
    const auto& [a, b] = pairs.front();
    for (const auto& f : {a, b})
      if (!profiles[f]) {
        spdlog::error("{}: {}", f, errors[f]);
        return kExitFatal;
      }
    auto r = style::cssim(*profiles[a], *profiles[b], idf);
    ordered_json j = {{"a", a},           {"b", b},           {"dis_var", r.dis_var},
                      {"dis_api", r.dis_api}, {"dis_stru", r.dis_stru}, {"cssim", r.cssim},
                      {"approximate", r.approximate}};
    write_json(fs::path(common.out) / "cssim.json", j);
    std::cout << dump_json(j, 2) << "\n";
    return kExitOk;
  }

  std::string csv = "a,b,dis_var,dis_api,dis_stru,cssim,error\n";
  double sum[4] = {0, 0, 0, 0};
  std::size_t ok = 0;
  for (const auto& [a, b] : pairs) {
    if (!profiles[a] || !profiles[b]) {
      const std::string& f = profiles[a] ? b : a;
      std::string msg = errors[f];
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ' ';
      csv += a + "," + b + ",,,,," + f + ": " + msg + "\n";
      continue;
    }
    auto r = style::cssim(*profiles[a], *profiles[b], idf);
    double v[4] = {r.dis_var, r.dis_api, r.dis_stru, r.cssim};
    csv += a + "," + b;
    for (int k = 0; k < 4; ++k) {
      csv += "," + pct(v[k]);
      sum[k] += v[k];
    }
    csv += ",\n";
    ++ok;
  }
  csv += "mean,";
  for (int k = 0; k < 4; ++k) csv += "," + (ok ? pct(sum[k] / static_cast<double>(ok)) : "");
  csv += ",\n";
  write_text(fs::path(common.out) / "cssim.csv", csv);
  std::cout << csv;
  return ok == pairs.size() ? kExitOk : (ok ? kExitPartial : kExitFatal);
}

ordered_json loss_instance(const nlohmann::json& j, const losses::LossConfig& cfg, bool grad_check,
                           double& worst) {
  auto pos = j.at("pos_logprobs").get<std::vector<double>>();
  auto negs = j.value("neg_logprobs", std::vector<std::vector<double>>{});
  double s_pos = losses::sequence_score(pos, cfg.score_mode);
  std::vector<double> s_negs;
  for (const auto& n : negs) s_negs.push_back(losses::sequence_score(n, cfg.score_mode));
  double ift = losses::ift_loss(pos);
  double list = losses::list_loss(s_pos, s_negs);
  ordered_json out = {{"ift", ift},
                      {"s_pos", s_pos},
                      {"s_negs", s_negs},
                      {"l_list", list},
                      {"l_sty", losses::style_loss(list, ift, cfg)},
                      {"grad", losses::list_loss_grad(s_pos, s_negs)}};
  if (grad_check) {
    double err = losses::list_loss_grad_check(s_pos, s_negs);
    out["grad_check_max_rel_err"] = err;
    worst = std::max(worst, err);
  }
  return out;
}

int cmd_losses(const Common& common, const std::string& input, bool grad_check) {
  PipelineConfig cfg = resolve(common);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(input));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(input + ": " + e.what());
  }
  losses::LossConfig lc = cfg.loss;
  if (j.contains("beta")) lc.beta = j["beta"].get<double>();
  if (j.contains("score_mode")) lc.score_mode = losses::parse_score_mode(j["score_mode"].get<std::string>());
  std::vector<nlohmann::json> instances;
  if (j.contains("instances")) instances = j["instances"].get<std::vector<nlohmann::json>>();
  else instances.push_back(j);
  double worst = 0;
  ordered_json results = ordered_json::array();
  try {
    for (const auto& inst : instances) results.push_back(loss_instance(inst, lc, grad_check, worst));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(input + ": " + e.what());
  }
  ordered_json report = {{"beta", lc.beta},
                         {"score_mode", losses::score_mode_name(lc.score_mode)},
                         {"instances", results}};
  if (grad_check) report["grad_check_max_rel_err"] = worst;
  write_json(fs::path(common.out) / "losses.json", report);
  std::cout << dump_json(report, 2) << "\n";
  return kExitOk;
}

std::optional<ordered_json> read_json(const fs::path& p) {
  if (!fs::exists(p)) return std::nullopt;
  return ordered_json::parse(read_text(p));
}

int cmd_report(const Common& common, const std::string& dir) {
  std::ostringstream md;
  md << "# Pipeline report\n\n";
  bool any = false;
  if (auto j = read_json(fs::path(dir) / "ingest_summary.json")) {
    any = true;
    md << "## Corpus\n\n| problems | valid | invalid | skipped lines |\n|---|---|---|---|\n| "
       << (*j)["problems"] << " | " << (*j)["valid"] << " | " << (*j)["invalid"] << " | "
       << (*j)["skipped_lines"].size() << " |\n\n";
  }
  if (auto j = read_json(fs::path(dir) / "function_summary.json")) {
    any = true;
    md << "## Function-consistent data (" << (*j)["src_lang"].get<std::string>() << " -> "
       << (*j)["tgt_lang"].get<std::string>() << ")\n\n"
       << "| problems | paired | judge_filtered | difftest_passed | exported | failed |\n"
       << "|---|---|---|---|---|---|\n| " << (*j)["problems"] << " | " << (*j)["paired"] << " | "
       << (*j)["judge_filtered"] << " | " << (*j)["difftest_passed"] << " | " << (*j)["exported"]
       << " | " << (*j)["failed"] << " |\n\n";
  }
  if (auto j = read_json(fs::path(dir) / "style_summary.json")) {
    any = true;
    md << "## Style data (" << (*j)["src_lang"].get<std::string>() << " -> "
       << (*j)["tgt_lang"].get<std::string>() << ")\n\n"
       << "| problems | records | generated | functional | negatives | failed |\n"
       << "|---|---|---|---|---|---|\n| " << (*j)["problems"] << " | " << (*j)["records"] << " | "
       << (*j)["generated"] << " | " << (*j)["functional"] << " | " << (*j)["negatives"] << " | "
       << (*j)["failed"] << " |\n\n";
    if (!(*j)["ineligible"].empty()) {
      md << "| ineligible reason | problems |\n|---|---|\n";
      for (const auto& [reason, n] : (*j)["ineligible"].items()) md << "| " << reason << " | " << n << " |\n";
      md << "\n";
    }
  }
  if (auto j = read_json(fs::path(dir) / "ca_summary.json")) {
    any = true;
    md << "## Computational accuracy\n\n| pair | CA | passed | total | pass | compile_error | "
          "runtime_error | incorrect_output | timeout |\n|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : *j) {
      char ca[16];
      std::snprintf(ca, sizeof ca, "%.3f", row["ca"].get<double>());
      md << "| " << row["pair_id"].get<std::string>() << " | " << ca << " | " << row["passed"]
         << " | " << row["total"];
      for (auto c : sandbox::kCategories) md << " | " << row["counts"][std::string(sandbox::category_tag(c))];
      md << " |\n";
    }
    md << "\n";
  }
  if (!any) {
    spdlog::error("no summaries found in {}", dir);
    return kExitFatal;
  }
  fs::path target = common.out == "out" ? fs::path(dir) / "report.md" : fs::path(common.out) / "report.md";
  write_text(target, md.str());
  std::cout << md.str();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Function-to-style translation data toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config, "YAML configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", common.seed, "Global seed (overrides the config)");
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", common.out, "Output directory")->capture_default_str();
  app.add_flag("--mock", common.mock, "Use the offline mock gateway");
  app.add_option("--fixtures", common.fixtures, "Mock gateway fixture file")->check(CLI::ExistingFile);
  app.add_option("--work", common.work, "Scratch directory for builds and caches (overrides the config)");
  app.add_flag("-q,--quiet", common.quiet, "Only log errors");

  std::string corpus, src, tgt, translations, batch, lang, idf_corpus, idf_lang, input, dir;
  std::vector<std::string> files;
  bool grad_check = false;

  auto* ingest = app.add_subcommand("ingest", "Load and validate a corpus");
  ingest->add_option("corpus", corpus)->required();

  auto* function = app.add_subcommand("build-function-data", "Recall, judge and test pairs; export IFT data");
  auto* style = app.add_subcommand("build-style-data", "Build positive/negative style data");
  for (auto* sub : {function, style}) {
    sub->add_option("--corpus", corpus)->required()->check(CLI::ExistingFile);
    sub->add_option("--src", src)->required();
    sub->add_option("--tgt", tgt)->required();
  }

  auto* eval = app.add_subcommand("eval-ca", "Computational accuracy of translations");
  eval->add_option("--corpus", corpus)->required()->check(CLI::ExistingFile);
  eval->add_option("--translations", translations)->required()->check(CLI::ExistingFile);
  eval->add_option("--src", src, "Only this source language");
  eval->add_option("--tgt", tgt, "Only this target language");

  auto* cs = app.add_subcommand("cssim", "Code-style similarity of two files or a manifest");
  cs->add_option("files", files, "Two source files");
  cs->add_option("--batch", batch, "Manifest with two paths per line")->check(CLI::ExistingFile);
  cs->add_option("--lang", lang, "Language of the files (default: by extension)");
  cs->add_option("--idf-corpus", idf_corpus, "Corpus for name frequencies")->check(CLI::ExistingFile);
  cs->add_option("--idf-lang", idf_lang, "Only this language from --idf-corpus");

  auto* ls = app.add_subcommand("losses", "Evaluate training losses on log-probability input");
  ls->add_option("input", input)->required()->check(CLI::ExistingFile);
  ls->add_flag("--grad-check", grad_check, "Compare gradients with finite differences");

  auto* report = app.add_subcommand("report", "Summarise the outputs in a directory");
  report->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  auto logger = spdlog::get("f2s");
  if (!logger) logger = spdlog::stderr_color_mt("f2s");
  spdlog::set_default_logger(logger);
  spdlog::set_level(common.quiet ? spdlog::level::err : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    if (*ingest) return cmd_ingest(common, corpus);
    if (*function) return cmd_function(common, corpus, src, tgt);
    if (*style) return cmd_style(common, corpus, src, tgt);
    if (*eval) return cmd_eval_ca(common, corpus, translations, src, tgt);
    if (*cs) return cmd_cssim(common, files, batch, lang, idf_corpus, idf_lang);
    if (*ls) return cmd_losses(common, input, grad_check);
    if (*report) return cmd_report(common, dir);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitFatal;
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace f2s::cli
