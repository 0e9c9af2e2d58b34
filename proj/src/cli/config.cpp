#include "f2s/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <yaml-cpp/yaml.h>

extern char** environ;

namespace f2s::cli {

namespace fs = std::filesystem;

fs::path PipelineConfig::prompt_path(const std::string& name) const {
  auto it = prompts.find(name);
  if (it == prompts.end()) throw ConfigError("no prompt template named '" + name + "'");
  return it->second.is_absolute() ? it->second : data_dir / it->second;
}

PromptTemplate PipelineConfig::prompt(const std::string& name) const {
  return PromptTemplate::load(prompt_path(name));
}

void PipelineConfig::validate() const {
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  try {
    judge.validate();
    style.validate();
    limits.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (loss.beta < 0 || loss.beta > 1) throw ConfigError("loss.beta must be in [0, 1]");
  if (judge_min_score < 1 || judge_min_score > judge.K)
    throw ConfigError("judge.min_score must be in [1, K]");
  for (const auto& [name, path] : prompts) {
    auto p = prompt_path(name);
    if (!fs::exists(p)) throw ConfigError("prompt template '" + name + "' not found: " + p.string());
  }
  if (gateway.mock && gateway.fixtures && !fs::exists(*gateway.fixtures))
    throw ConfigError("mock fixtures not found: " + gateway.fixtures->string());
  if (!gateway.mock) gateway.http.validate();
}

PipelineConfig default_config() {
  PipelineConfig c;
#ifdef F2S_DEFAULT_DATA_DIR
  c.data_dir = F2S_DEFAULT_DATA_DIR;
#else
  c.data_dir = "data";
#endif
  c.prompts = {{"judge", "prompts/judge.txt"},
               {"style_aware", "prompts/style_aware.txt"},
               {"translate", "prompts/translate.txt"}};
  c.toolchains = sandbox::default_toolchains();
  return c;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Walks a mapping, rejecting keys the caller does not consume.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError("config section '" + path_ + "' must be a mapping");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() || !node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError("unknown config key '" + where(key) + "'");
    }
  }

  template <class T>
  void get(const std::string& key, T& out) {
    used_.insert(key);
    const YAML::Node& n = node_;
    if (!n || !n.IsMap() || !n[key]) return;
    try {
      out = n[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("config key '" + where(key) + "' has the wrong type");
    }
  }

  void get_path(const std::string& key, fs::path& out) {
    std::string s;
    get(key, s);
    if (!s.empty()) out = s;
  }

  void get_opt_path(const std::string& key, std::optional<fs::path>& out) {
    std::string s;
    get(key, s);
    if (!s.empty()) out = fs::path(s);
  }

  Section sub(const std::string& key) {
    used_.insert(key);
    const YAML::Node& n = node_;
    return Section(n && n.IsMap() ? n[key] : YAML::Node(), where(key));
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    if (node_ && node_.IsMap())
      for (const auto& kv : node_) out.push_back(kv.first.as<std::string>());
    return out;
  }

  void mark(const std::string& key) { used_.insert(key); }

 private:
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i,
              const YAML::Node& value) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  if (!node[parts[i]] || !node[parts[i]].IsMap()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
  set_path(node[parts[i]], parts, i + 1, value);
}

void apply_env(YAML::Node& root, const std::map<std::string, std::string>& env,
               const std::set<std::string>& secrets) {
  for (const auto& [name, value] : env) {
    if (!name.starts_with("F2S_") || secrets.count(name)) continue;
    std::vector<std::string> parts;
    std::string rest = name.substr(4);
    std::size_t pos = 0;
    while (true) {
      auto at = rest.find("__", pos);
      parts.push_back(lower(rest.substr(pos, at == std::string::npos ? std::string::npos : at - pos)));
      if (at == std::string::npos) break;
      pos = at + 2;
    }
    YAML::Node parsed;
    try {
      parsed = YAML::Load(value);
    } catch (const YAML::Exception&) {
      parsed = YAML::Node(value);
    }
    if (!parsed || parsed.IsNull()) parsed = YAML::Node(value);
    set_path(root, parts, 0, parsed);
  }
}

Role parse_role(const std::string& s) {
  if (s == "judge") return Role::judge;
  if (s == "generator") return Role::generator;
  if (s == "negative") return Role::negative;
  if (s == "embedding") return Role::embedding;
  throw ConfigError("unknown gateway role '" + s + "'");
}

}  // namespace

std::map<std::string, std::string> environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    std::string kv = *e;
    auto eq = kv.find('=');
    if (eq != std::string::npos) out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

PipelineConfig load_config(const std::optional<fs::path>& path,
                           const std::map<std::string, std::string>& env) {
  PipelineConfig c = default_config();
  YAML::Node root(YAML::NodeType::Map);
  if (path) {
    try {
      root = YAML::LoadFile(path->string());
    } catch (const YAML::Exception& e) {
      throw ConfigError("cannot read config " + path->string() + ": " + e.what());
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  }
  std::set<std::string> secrets{"F2S_API_KEY", c.gateway.http.api_key_env};
  if (root.IsMap() && root["gateway"] && root["gateway"]["api_key_env"])
    secrets.insert(root["gateway"]["api_key_env"].as<std::string>());
  apply_env(root, env, secrets);
  // Relative paths in a config file are relative to the file.
  const fs::path base = path ? fs::absolute(*path).parent_path() : fs::current_path();
  auto rebase = [&](fs::path p) { return p.is_absolute() ? p : base / p; };

  Section top(root, "");
  top.get("seed", c.seed);
  top.get("jobs", c.jobs);
  {
    fs::path d;
    top.get_path("data_dir", d);
    if (!d.empty()) c.data_dir = rebase(d);
    fs::path w;
    top.get_path("work_dir", w);
    if (!w.empty()) c.work_dir = rebase(w);
    std::optional<fs::path> cache;
    top.get_opt_path("embedding_cache", cache);
    if (cache) c.embedding_cache = rebase(*cache);
  }
  {
    auto s = top.sub("prompts");
    for (const auto& key : s.keys()) {
      fs::path p;
      s.get_path(key, p);
      c.prompts[key] = p;
    }
  }
  {
    auto s = top.sub("judge");
    s.get("k", c.judge.K);
    s.get("recall_k", c.judge.recall_k);
    s.get("min_score", c.judge_min_score);
    std::string mode;
    s.get("mode", mode);
    if (!mode.empty()) {
      auto m = pairing::parse_judge_mode(mode);
      if (!m) throw ConfigError("judge.mode must be aggregate or explicit");
      c.judge.mode = *m;
    }
  }
  {
    auto s = top.sub("style");
    s.get("m", c.style.m);
    s.get("n", c.style.n);
    s.get("alpha", c.style.alpha);
    s.get("temperature", c.style.temperature);
  }
  {
    auto s = top.sub("loss");
    s.get("beta", c.loss.beta);
    std::string mode;
    s.get("score_mode", mode);
    if (!mode.empty()) {
      try {
        c.loss.score_mode = losses::parse_score_mode(mode);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
  }
  {
    auto s = top.sub("limits");
    s.get("wall_time", c.limits.wall_time_s);
    s.get("memory", c.limits.memory_bytes);
    s.get("max_output", c.limits.max_output);
  }
  {
    auto s = top.sub("output");
    s.get("numeric", c.output.numeric);
    s.get("epsilon", c.output.epsilon);
  }
  {
    auto s = top.sub("toolchains");
    for (const auto& key : s.keys()) {
      auto lang = parse_language(key);
      if (!lang) throw ConfigError("toolchains: unknown language '" + key + "'");
      auto t = s.sub(key);
      sandbox::Toolchain& tc = c.toolchains[*lang];
      t.get("compile", tc.compile);
      t.get("run", tc.run);
      t.get("source_name", tc.source_name);
      t.get("limit_address_space", tc.limit_address_space);
    }
  }
  {
    auto s = top.sub("gateway");
    auto& g = c.gateway;
    s.get("mock", g.mock);
    std::optional<fs::path> fixtures;
    s.get_opt_path("fixtures", fixtures);
    if (fixtures) g.fixtures = rebase(*fixtures);
    s.get("context_limit", g.context_limit);
    s.get("embedding_dim", g.embedding_dim);
    s.get("completion_url", g.http.completion_url);
    s.get("embedding_url", g.http.embedding_url);
    s.get("model", g.http.model);
    s.get("embedding_model", g.http.embedding_model);
    s.get("max_attempts", g.http.max_attempts);
    s.get("backoff_ms", g.http.backoff_ms);
    s.get("max_backoff_ms", g.http.max_backoff_ms);
    s.get("max_in_flight", g.http.max_in_flight);
    s.get("timeout_s", g.http.timeout_s);
    s.get("top_logprobs", g.http.top_logprobs);
    s.get("api_key_env", g.http.api_key_env);
    auto models = s.sub("models");
    for (const auto& key : models.keys()) {
      std::string m;
      models.get(key, m);
      g.role_models[parse_role(key)] = m;
    }
  }
  return c;
}

std::unique_ptr<gateway::Gateway> make_gateway(const PipelineConfig& cfg, Role role) {
  const auto& g = cfg.gateway;
  if (g.mock) {
    gateway::MockConfig m;
    m.seed = cfg.seed;
    m.fixtures = g.fixtures;
    m.context_limit = g.context_limit;
    m.embedding_dim = g.embedding_dim;
    return std::make_unique<gateway::MockGateway>(m);
  }
  gateway::HttpConfig h = g.http;
  if (auto it = g.role_models.find(role); it != g.role_models.end()) {
    if (role == Role::embedding) h.embedding_model = it->second;
    else h.model = it->second;
  }
  return std::make_unique<gateway::HttpGateway>(h);
}

}  // namespace f2s::cli
