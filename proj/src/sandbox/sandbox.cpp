#include "f2s/sandbox/sandbox.hpp"

#include <stdlib.h>

#include <cmath>
#include <fstream>
#include <future>
#include <mutex>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "f2s/support/hash.hpp"
#include "f2s/support/parallel.hpp"
#include "process.hpp"

namespace f2s::sandbox {

namespace fs = std::filesystem;

void ExecLimits::validate() const {
  if (!(wall_time_s > 0) || !std::isfinite(wall_time_s))
    throw ArgumentError("wall_time must be positive");
  if (memory_bytes == 0) throw ArgumentError("memory limit must be positive");
  if (max_output == 0) throw ArgumentError("max_output must be positive");
}

std::string_view status_tag(ExecStatus s) {
  switch (s) {
    case ExecStatus::ok: return "ok";
    case ExecStatus::compile_error: return "compile_error";
    case ExecStatus::runtime_error: return "runtime_error";
    case ExecStatus::timeout: return "timeout";
    case ExecStatus::output_overflow: return "output_overflow";
  }
  return "?";
}

std::string_view category_tag(Category c) {
  switch (c) {
    case Category::pass: return "pass";
    case Category::compile_error: return "compile_error";
    case Category::runtime_error: return "runtime_error";
    case Category::incorrect_output: return "incorrect_output";
    case Category::timeout: return "timeout";
  }
  return "?";
}

ToolchainMap default_toolchains() {
  ToolchainMap m;
  m[Language::c] = {{"gcc", "-O2", "-std=gnu11", "-o", "{bin}", "{src}", "-lm"},
                    {"{bin}"},
                    "main.c",
                    true};
  m[Language::cpp] = {{"g++", "-O2", "-std=gnu++17", "-o", "{bin}", "{src}"},
                      {"{bin}"},
                      "main.cpp",
                      true};
  m[Language::go] = {{"go", "build", "-o", "{bin}", "{src}"}, {"{bin}"}, "main.go", false};
  m[Language::java] = {{"javac", "-encoding", "UTF-8", "-d", "{dir}", "{src}"},
                       {"java", "-Xss64m", "-cp", "{dir}", "{class}"},
                       "{class}.java",
                       false};
  m[Language::python] = {{}, {"python3", "{src}"}, "main.py", true};
  return m;
}

std::string java_main_class(std::string_view source) {
  static const std::regex pub(R"(public\s+(?:(?:final|abstract|static)\s+)*class\s+([A-Za-z_$][\w$]*))");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(source.begin(), source.end(), m, pub)) return m[1].str();
  return "Main";
}

std::string normalize_output(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    auto end = line.find_last_not_of(" \t\r\f\v");
    out.append(end == std::string_view::npos ? std::string_view{} : line.substr(0, end + 1));
    out.push_back('\n');
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  if (!out.empty()) out.push_back('\n');
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> as_number(std::string_view s) {
  std::string t(s);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || t.empty()) return std::nullopt;
  return v;
}

}  // namespace

bool compare_outputs(std::string_view a, std::string_view b, const OutputPolicy& policy) {
  if (!policy.numeric) return normalize_output(a) == normalize_output(b);
  auto ta = split_ws(a), tb = split_ws(b);
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i] == tb[i]) continue;
    auto x = as_number(ta[i]), y = as_number(tb[i]);
    if (!x || !y) return false;
    double diff = std::fabs(*x - *y);
    if (diff > policy.epsilon && diff > policy.epsilon * std::max(std::fabs(*x), std::fabs(*y)))
      return false;
  }
  return true;
}

// Build artefacts of one snippet, shared by every run of it.
struct Sandbox::Build {
  bool ok = false;
  std::string diagnostics;
  fs::path dir;
  std::string source;  // absolute path
  std::string main_class;
};

struct Sandbox::Cache {
  std::mutex mutex;
  std::unordered_map<std::string, std::shared_future<std::shared_ptr<const Build>>> builds;
};

namespace {

std::string expand(const std::string& arg, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < arg.size()) {
    if (arg[i] == '{') {
      auto close = arg.find('}', i);
      if (close != std::string::npos) {
        auto it = vars.find(arg.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(arg[i++]);
  }
  return out;
}

std::vector<std::string> expand_all(const std::vector<std::string>& args,
                                    const std::map<std::string, std::string>& vars) {
  std::vector<std::string> out;
  for (const auto& a : args) out.push_back(expand(a, vars));
  return out;
}

bool needs_lookup(const std::string& exe) { return exe.find('{') == std::string::npos; }

void write_file(const fs::path& p, std::string_view data) {
  std::ofstream f(p, std::ios::binary);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) throw Error("cannot write " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path make_temp_dir(const fs::path& parent, const std::string& prefix) {
  fs::create_directories(parent);
  std::string tmpl = (parent / (prefix + "XXXXXX")).string();
  if (!::mkdtemp(tmpl.data())) throw Error("cannot create a scratch directory in " + parent.string());
  return tmpl;
}

std::map<std::string, std::string> build_vars(const fs::path& dir, const std::string& source,
                                              const std::string& main_class) {
  return {{"src", source}, {"bin", (dir / "prog").string()}, {"dir", dir.string()},
          {"class", main_class}};
}

}  // namespace

Sandbox::Sandbox(ToolchainMap toolchains, fs::path work_dir, ExecLimits compile_limits)
    : toolchains_(std::move(toolchains)),
      work_dir_(fs::absolute(std::move(work_dir))),
      compile_limits_(compile_limits),
      cache_(std::make_unique<Cache>()) {
  compile_limits_.validate();
  fs::create_directories(work_dir_ / "cache");
  fs::create_directories(work_dir_ / "runs");
}

Sandbox::~Sandbox() = default;

bool Sandbox::has_toolchain(Language lang) const {
  auto it = toolchains_.find(lang);
  if (it == toolchains_.end() || it->second.run.empty()) return false;
  const auto& tc = it->second;
  if (!tc.compile.empty() && !detail::find_executable(tc.compile.front())) return false;
  if (needs_lookup(tc.run.front()) && !detail::find_executable(tc.run.front())) return false;
  return true;
}

void Sandbox::require_toolchain(Language lang) const {
  auto it = toolchains_.find(lang);
  if (it == toolchains_.end() || it->second.run.empty())
    throw ToolchainMissingError("no toolchain configured for " + std::string(language_tag(lang)));
  if (!has_toolchain(lang)) {
    const auto& tc = it->second;
    const auto& exe = tc.compile.empty() ? tc.run.front() : tc.compile.front();
    throw ToolchainMissingError(std::string(language_tag(lang)) + " toolchain not found (" +
                                exe + ")");
  }
}

std::shared_ptr<const Sandbox::Build> Sandbox::build(const CodeSnippet& code, const Toolchain& tc) {
  std::string main_class =
      code.language == Language::java ? java_main_class(code.source_text) : "Main";
  std::string recipe = std::string(language_tag(code.language)) + '\0' + tc.source_name + '\0';
  for (const auto& a : tc.compile) recipe += a + '\0';
  const std::string key = sha256_hex(recipe + '\0' + code.source_text).substr(0, 32);

  // The first thread to ask for a key builds it; the others wait on its future.
  std::promise<std::shared_ptr<const Build>> promise;
  {
    std::unique_lock lock(cache_->mutex);
    auto it = cache_->builds.find(key);
    if (it != cache_->builds.end()) {
      auto future = it->second;
      lock.unlock();
      return future.get();
    }
    cache_->builds.emplace(key, promise.get_future().share());
  }

  auto b = std::make_shared<Build>();
  b->dir = work_dir_ / "cache" / key;
  b->main_class = main_class;
  const std::string source_name = expand(tc.source_name, {{"class", main_class}});
  b->source = (b->dir / source_name).string();
  try {
    const fs::path status_file = b->dir / "status";
    if (fs::exists(status_file)) {
      b->ok = read_file(status_file) == "ok";
      b->diagnostics = read_file(b->dir / "diagnostics.txt");
    } else {
      fs::path tmp = make_temp_dir(work_dir_ / "cache", key + ".tmp.");
      write_file(tmp / source_name, code.source_text);
      bool ok = true;
      std::string diag;
      if (!tc.compile.empty()) {
        ++compilations_;
        detail::ProcessLimits pl{compile_limits_.wall_time_s, std::nullopt,
                                 compile_limits_.max_output, false};
        // Compile inside the final directory name so paths baked into the
        // artefacts (javac class dirs, debug info) stay valid after rename.
        auto vars = build_vars(b->dir, b->source, main_class);
        auto argv = expand_all(tc.compile, vars);
        for (auto& a : argv) {
          // Point the build at the temporary directory for now.
          auto at = a.find(b->dir.string());
          if (at != std::string::npos) a.replace(at, b->dir.string().size(), tmp.string());
        }
        auto r = detail::run_process(argv, tmp, "", pl);
        ok = !r.timed_out && !r.overflow && r.exit_code == 0 && r.term_signal == 0;
        diag = r.err + r.out;
        for (auto at = diag.find(tmp.string()); at != std::string::npos;
             at = diag.find(tmp.string(), at))
          diag.replace(at, tmp.string().size(), b->dir.string());
        if (r.timed_out) diag += "\ncompilation timed out";
        if (r.overflow) diag += "\ncompiler output exceeded the limit";
      }
      write_file(tmp / "diagnostics.txt", diag);
      write_file(tmp / "status", ok ? "ok" : "error");
      std::error_code ec;
      fs::rename(tmp, b->dir, ec);
      if (ec) {
        // Another process finished the same build first.
        fs::remove_all(tmp, ec);
        ok = read_file(b->dir / "status") == "ok";
        diag = read_file(b->dir / "diagnostics.txt");
      }
      b->ok = ok;
      b->diagnostics = std::move(diag);
    }
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(cache_->mutex);
    cache_->builds.erase(key);
    throw;
  }
  promise.set_value(b);
  return b;
}

ExecutionResult Sandbox::run_program(const CodeSnippet& code, const std::string& input,
                                     const ExecLimits& limits) {
  limits.validate();
  require_toolchain(code.language);
  const Toolchain& tc = toolchains_.at(code.language);
  auto b = build(code, tc);
  ExecutionResult r;
  if (!b->ok) {
    r.status = ExecStatus::compile_error;
    r.stderr_data = b->diagnostics;
    if (r.stderr_data.empty()) r.stderr_data = "compilation failed";
    return r;
  }
  fs::path scratch = make_temp_dir(work_dir_ / "runs", "run.");
  detail::ProcessLimits pl;
  pl.wall_time_s = limits.wall_time_s;
  if (tc.limit_address_space) pl.address_space = limits.memory_bytes;
  pl.max_output = limits.max_output;
  pl.deny_network = true;
  detail::ProcessResult p;
  try {
    p = detail::run_process(expand_all(tc.run, build_vars(b->dir, b->source, b->main_class)),
                            scratch, input, pl);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(scratch, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);

  r.wall_ms = p.wall_ms;
  r.exit_code = p.exit_code;
  r.term_signal = p.term_signal;
  r.stderr_data = std::move(p.err);
  const long limit_ms = static_cast<long>(std::llround(limits.wall_time_s * 1000));
  if (p.timed_out || p.wall_ms > limit_ms) {
    r.status = ExecStatus::timeout;
  } else if (p.overflow) {
    r.status = ExecStatus::output_overflow;
  } else {
    r.status = p.exit_code == 0 && p.term_signal == 0 ? ExecStatus::ok : ExecStatus::runtime_error;
    r.stdout_data = std::move(p.out);
  }
  return r;
}

PairInvalidError::PairInvalidError(std::size_t id, ExecutionResult res)
    : Error("source program failed on input " + std::to_string(id) + " (" +
            std::string(status_tag(res.status)) + ")"),
      input_id(id),
      result(std::move(res)) {}

Category categorize(const std::vector<InputOutcome>& per_input) {
  bool timeout = false, runtime = false, mismatch = false;
  for (const auto& o : per_input) {
    switch (o.tgt_result.status) {
      case ExecStatus::compile_error: return Category::compile_error;
      case ExecStatus::timeout: timeout = true; break;
      case ExecStatus::runtime_error:
      case ExecStatus::output_overflow: runtime = true; break;
      case ExecStatus::ok: mismatch = mismatch || !o.match; break;
    }
  }
  if (timeout) return Category::timeout;
  if (runtime) return Category::runtime_error;
  if (mismatch) return Category::incorrect_output;
  return Category::pass;
}

DiffTestReport differential_test(Sandbox& sandbox, const CodeSnippet& src, const CodeSnippet& tgt,
                                 const std::vector<TestCase>& tests, const DiffOptions& options) {
  if (tests.empty()) throw ArgumentError("differential test needs at least one input");
  options.limits.validate();
  sandbox.require_toolchain(src.language);
  sandbox.require_toolchain(tgt.language);
  DiffTestReport report;
  report.per_input.resize(tests.size());
  std::vector<std::exception_ptr> errors(tests.size());
  parallel_for_index(tests.size(), options.jobs, [&](std::size_t i) {
    try {
      auto& o = report.per_input[i];
      o.input_id = i;
      o.src_result = sandbox.run_program(src, tests[i].input, options.limits);
      if (o.src_result.status != ExecStatus::ok) return;
      if (options.repeat) {
        auto again = sandbox.run_program(src, tests[i].input, options.limits);
        o.unstable = again.status != ExecStatus::ok ||
                     !compare_outputs(o.src_result.stdout_data, again.stdout_data, options.policy);
      }
      o.tgt_result = sandbox.run_program(tgt, tests[i].input, options.limits);
      const std::string& reference =
          tests[i].expected_output ? *tests[i].expected_output : o.src_result.stdout_data;
      o.match = o.tgt_result.status == ExecStatus::ok &&
                compare_outputs(reference, o.tgt_result.stdout_data, options.policy);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& o : report.per_input)
    if (o.src_result.status != ExecStatus::ok) throw PairInvalidError(o.input_id, o.src_result);
  report.category = categorize(report.per_input);
  report.pass_all = report.category == Category::pass;
  return report;
}

CaSummary compute_ca(const std::vector<DiffTestReport>& reports) {
  if (reports.empty()) throw ArgumentError("compute_ca needs at least one report");
  CaSummary s;
  for (Category c : kCategories) s.counts[c] = 0;
  for (const auto& r : reports) {
    ++s.counts[r.category];
    if (r.pass_all) ++s.passed;
  }
  s.total = reports.size();
  s.ca = static_cast<double>(s.passed) / static_cast<double>(s.total);
  return s;
}

Materialized materialize_expected(Sandbox& sandbox, const CodeSnippet& src,
                                  const std::vector<TestCase>& tests, const ExecLimits& limits,
                                  int jobs) {
  Materialized m;
  m.tests = tests;
  std::vector<ExecutionResult> results(tests.size());
  std::vector<std::exception_ptr> errors(tests.size());
  parallel_for_index(tests.size(), jobs, [&](std::size_t i) {
    try {
      results[i] = sandbox.run_program(src, tests[i].input, limits);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (results[i].status != ExecStatus::ok) throw PairInvalidError(i, results[i]);
    std::string fresh = normalize_output(results[i].stdout_data);
    auto& t = m.tests[i];
    if (!t.expected_output) {
      t.expected_output = std::move(fresh);
    } else if (!compare_outputs(*t.expected_output, fresh)) {
      m.warnings.push_back("input " + std::to_string(i) +
                           ": stored expected output differs from the source's output; kept");
    }
  }
  return m;
}

nlohmann::ordered_json to_json(const ExecutionResult& r) {
  return {{"status", status_tag(r.status)}, {"stdout", r.stdout_data},
          {"stderr", r.stderr_data},        {"wall_ms", r.wall_ms},
          {"exit_code", r.exit_code},       {"signal", r.term_signal}};
}

nlohmann::ordered_json to_json(const DiffTestReport& r) {
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  for (const auto& o : r.per_input) {
    nlohmann::ordered_json j = {{"input_id", o.input_id},
                                {"src_result", to_json(o.src_result)},
                                {"tgt_result", to_json(o.tgt_result)},
                                {"match", o.match}};
    if (o.unstable) j["unstable"] = true;
    per.push_back(std::move(j));
  }
  return {{"per_input", std::move(per)}, {"pass_all", r.pass_all},
          {"category", category_tag(r.category)}};
}

nlohmann::ordered_json to_json(const CaSummary& s) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [c, n] : s.counts) counts[std::string(category_tag(c))] = n;
  return {{"total", s.total}, {"passed", s.passed}, {"ca", s.ca}, {"counts", counts}};
}

}  // namespace f2s::sandbox
