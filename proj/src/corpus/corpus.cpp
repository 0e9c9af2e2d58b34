#include "f2s/corpus/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "f2s/support/hash.hpp"

namespace f2s {

using ojson = nlohmann::ordered_json;

std::string_view origin_tag(Origin origin) {
  switch (origin) {
    case Origin::mined: return "mined";
    case Origin::generated: return "generated";
    case Origin::manual: return "manual";
  }
  return "mined";
}

std::optional<Origin> parse_origin(std::string_view tag) {
  if (tag == "mined") return Origin::mined;
  if (tag == "generated") return Origin::generated;
  if (tag == "manual") return Origin::manual;
  return std::nullopt;
}

CodeSnippet CodeSnippet::make(std::string id, Language lang, std::string text, Origin origin) {
  CodeSnippet s;
  s.snippet_id = std::move(id);
  s.language = lang;
  s.language_tag = std::string(f2s::language_tag(lang));
  s.source_text = std::move(text);
  s.origin = origin;
  return s;
}

bool Problem::eval_only() const {
  auto it = meta.find("eval_only");
  return it != meta.end() && it->is_boolean() && it->get<bool>();
}

std::vector<const CodeSnippet*> Problem::solutions_in(Language lang) const {
  std::vector<const CodeSnippet*> out;
  for (const auto& s : solutions)
    if (s.language == lang) out.push_back(&s);
  return out;
}

const Problem* ProblemSet::find(std::string_view problem_id) const {
  for (const auto& p : problems)
    if (p.problem_id == problem_id) return &p;
  return nullptr;
}

namespace {

const ojson& require(const ojson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw CorpusError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string require_string(const ojson& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_string()) throw CorpusError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw CorpusError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot write " + path.string());
  return out;
}

template <class Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(number, line);
  }
}

}  // namespace

ojson snippet_to_json(const CodeSnippet& s) {
  ojson j;
  j["snippet_id"] = s.snippet_id;
  j["language"] = s.language == Language::unknown ? s.language_tag
                                                  : std::string(language_tag(s.language));
  j["source_text"] = s.source_text;
  j["origin"] = std::string(origin_tag(s.origin));
  return j;
}

CodeSnippet snippet_from_json(const ojson& j) {
  if (!j.is_object()) throw CorpusError("snippet must be an object");
  CodeSnippet s;
  s.snippet_id = require_string(j, "snippet_id");
  s.language_tag = require_string(j, "language");
  s.language = parse_language(s.language_tag).value_or(Language::unknown);
  if (s.language != Language::unknown) s.language_tag = std::string(language_tag(s.language));
  s.source_text = require_string(j, "source_text");
  auto origin = j.find("origin");
  if (origin != j.end()) {
    if (!origin->is_string()) throw CorpusError("field \"origin\" must be a string");
    auto parsed = parse_origin(origin->get<std::string>());
    if (!parsed) throw CorpusError("unknown origin \"" + origin->get<std::string>() + "\"");
    s.origin = *parsed;
  }
  return s;
}

ojson problem_to_json(const Problem& p) {
  ojson j;
  j["problem_id"] = p.problem_id;
  ojson tests = ojson::array();
  for (const auto& t : p.tests) {
    ojson tj;
    tj["input"] = base64_encode(t.input);
    tj["expected_output"] = t.expected_output ? ojson(base64_encode(*t.expected_output)) : ojson();
    tests.push_back(std::move(tj));
  }
  j["tests"] = std::move(tests);
  ojson sols = ojson::array();
  for (const auto& s : p.solutions) sols.push_back(snippet_to_json(s));
  j["solutions"] = std::move(sols);
  j["meta"] = p.meta;
  return j;
}

Problem problem_from_json(const ojson& j) {
  if (!j.is_object()) throw CorpusError("line is not a JSON object");
  Problem p;
  p.problem_id = require_string(j, "problem_id");
  const auto& tests = require(j, "tests");
  if (!tests.is_array()) throw CorpusError("field \"tests\" must be an array");
  for (const auto& t : tests) {
    if (!t.is_object()) throw CorpusError("test case must be an object");
    TestCase tc;
    try {
      tc.input = base64_decode(require_string(t, "input"));
      auto e = t.find("expected_output");
      if (e != t.end() && !e->is_null()) {
        if (!e->is_string()) throw CorpusError("expected_output must be a string or null");
        tc.expected_output = base64_decode(e->get<std::string>());
      }
    } catch (const ArgumentError& err) {
      throw CorpusError(std::string("test case: ") + err.what());
    }
    p.tests.push_back(std::move(tc));
  }
  const auto& sols = require(j, "solutions");
  if (!sols.is_array()) throw CorpusError("field \"solutions\" must be an array");
  for (const auto& s : sols) p.solutions.push_back(snippet_from_json(s));
  auto meta = j.find("meta");
  if (meta != j.end()) {
    if (!meta->is_object()) throw CorpusError("field \"meta\" must be an object");
    p.meta = *meta;
  }
  return p;
}

ProblemSet load_corpus(const std::filesystem::path& path) {
  ProblemSet set;
  std::set<std::string> seen;
  std::size_t attempted = 0;
  for_each_line(path, [&](std::size_t number, const std::string& line) {
    ++attempted;
    Problem p;
    try {
      p = problem_from_json(ojson::parse(line));
    } catch (const nlohmann::json::exception& e) {
      set.skipped.push_back({number, std::string("invalid JSON: ") + e.what()});
      return;
    } catch (const CorpusError& e) {
      set.skipped.push_back({number, e.what()});
      return;
    }
    if (!seen.insert(p.problem_id).second)
      throw CorpusError("duplicate problem_id \"" + p.problem_id + "\" on line " +
                        std::to_string(number));
    set.problems.push_back(std::move(p));
  });
  if (attempted > 0 && set.problems.empty())
    throw CorpusError("no valid problems in " + path.string() + " (" +
                      std::to_string(set.skipped.size()) + " malformed lines)");
  return set;
}

void save_corpus(const std::vector<Problem>& problems, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& p : problems) out << problem_to_json(p).dump() << '\n';
}

ValidationReport validate_problem(const Problem& p) {
  ValidationReport r;
  r.problem_id = p.problem_id;
  if (p.problem_id.empty()) r.violations.push_back("empty id");
  if (p.tests.empty() && !p.eval_only()) r.violations.push_back("no tests");
  std::set<std::string> ids;
  for (const auto& s : p.solutions) {
    if (s.snippet_id.empty()) r.violations.push_back("empty snippet id");
    if (s.source_text.empty()) r.violations.push_back("empty source");
    if (s.language == Language::unknown) r.violations.push_back("unsupported language");
    if (!s.snippet_id.empty() && !ids.insert(s.snippet_id).second)
      r.violations.push_back("duplicate snippet id \"" + s.snippet_id + "\"");
  }
  if (p.solutions.empty()) r.warnings.push_back("no solutions");
  std::size_t missing = 0;
  for (const auto& t : p.tests)
    if (!t.expected_output) ++missing;
  if (missing > 0)
    r.warnings.push_back(std::to_string(missing) +
                         " test(s) without expected_output; derived from the source program");
  return r;
}

IftRecord make_ift_record(const CodeSnippet& src, const CodeSnippet& tgt,
                          const PromptTemplate& prompt) {
  IftRecord r;
  r.prompt = prompt.render({{"SOURCE_LANG", std::string(language_display_name(src.language))},
                            {"TARGET_LANG", std::string(language_display_name(tgt.language))},
                            {"SOURCE_CODE", src.source_text}});
  if (r.prompt.find(src.source_text) == std::string::npos)
    throw CorpusError("translation prompt template lacks {SOURCE_CODE}");
  r.completion = tgt.source_text;
  r.src_lang = src.language;
  r.tgt_lang = tgt.language;
  return r;
}

void check_style_record(const StyleRecord& r, double alpha) {
  if (r.tgt_negs.empty()) throw CorpusError("style record for " + r.src.snippet_id +
                                            " has no negatives");
  if (r.tgt_negs.size() != r.neg_cssim.size())
    throw CorpusError("style record for " + r.src.snippet_id +
                      ": neg_cssim is not aligned with tgt_negs");
  for (std::size_t i = 0; i < r.neg_cssim.size(); ++i) {
    if (!(r.neg_cssim[i] < alpha)) {
      std::ostringstream msg;
      msg << "style record for " << r.src.snippet_id << ": negative " << i << " has cssim "
          << r.neg_cssim[i] << " >= alpha " << alpha;
      throw CorpusError(msg.str());
    }
  }
}

std::size_t export_ift_dataset(const std::vector<IftRecord>& records,
                               const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& r : records) {
    ojson j;
    j["prompt"] = r.prompt;
    j["completion"] = r.completion;
    j["src_lang"] = std::string(language_tag(r.src_lang));
    j["tgt_lang"] = std::string(language_tag(r.tgt_lang));
    out << j.dump() << '\n';
  }
  if (!out) throw CorpusError("write failed for " + path.string());
  return records.size();
}

std::size_t export_style_dataset(const std::vector<StyleRecord>& records,
                                 const std::filesystem::path& path, double alpha) {
  for (const auto& r : records) check_style_record(r, alpha);
  auto out = open_output(path);
  for (const auto& r : records) {
    ojson j;
    j["src"] = snippet_to_json(r.src);
    j["tgt_pos"] = snippet_to_json(r.tgt_pos);
    ojson negs = ojson::array();
    for (const auto& n : r.tgt_negs) negs.push_back(snippet_to_json(n));
    j["tgt_negs"] = std::move(negs);
    j["neg_cssim"] = r.neg_cssim;
    out << j.dump() << '\n';
  }
  if (!out) throw CorpusError("write failed for " + path.string());
  return records.size();
}

std::vector<IftRecord> load_ift_dataset(const std::filesystem::path& path) {
  std::vector<IftRecord> out;
  for_each_line(path, [&](std::size_t, const std::string& line) {
    auto j = ojson::parse(line);
    IftRecord r;
    r.prompt = require_string(j, "prompt");
    r.completion = require_string(j, "completion");
    r.src_lang = parse_language(require_string(j, "src_lang")).value_or(Language::unknown);
    r.tgt_lang = parse_language(require_string(j, "tgt_lang")).value_or(Language::unknown);
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<StyleRecord> load_style_dataset(const std::filesystem::path& path, double alpha) {
  std::vector<StyleRecord> out;
  for_each_line(path, [&](std::size_t number, const std::string& line) {
    auto j = ojson::parse(line);
    StyleRecord r;
    r.src = snippet_from_json(require(j, "src"));
    r.tgt_pos = snippet_from_json(require(j, "tgt_pos"));
    for (const auto& n : require(j, "tgt_negs")) r.tgt_negs.push_back(snippet_from_json(n));
    for (const auto& v : require(j, "neg_cssim")) r.neg_cssim.push_back(v.get<double>());
    try {
      check_style_record(r, alpha);
    } catch (const CorpusError& e) {
      throw CorpusError("line " + std::to_string(number) + ": " + e.what());
    }
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace f2s
