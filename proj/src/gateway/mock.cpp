#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "f2s/gateway/gateway.hpp"
#include "f2s/support/hash.hpp"

namespace f2s::gateway {

struct MockGateway::Fixtures {
  struct Entry {
    std::string op;
    std::string contains;
    nlohmann::json response;
  };
  std::unordered_map<std::string, nlohmann::json> by_key;  // op + key
  std::vector<Entry> by_substring;                         // file order

  const nlohmann::json* find(std::string_view op, std::string_view key,
                             std::string_view prompt) const {
    if (auto it = by_key.find(std::string(op) + ":" + std::string(key)); it != by_key.end())
      return &it->second;
    for (const auto& e : by_substring)
      if (e.op == op && prompt.find(e.contains) != std::string_view::npos) return &e.response;
    return nullptr;
  }
};

namespace {

std::shared_ptr<const MockGateway::Fixtures> load_fixtures(const std::filesystem::path& path);

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit(std::uint64_t x) { return static_cast<double>(splitmix(x) >> 11) * 0x1.0p-53; }

std::uint64_t seeded(std::uint64_t seed, std::string_view op, std::string_view payload) {
  return hash64(std::to_string(seed) + "\n" + std::string(op) + "\n" + std::string(payload));
}

constexpr std::string_view kWords[] = {"int", "x", "=", "0", ";", "for", "i", "in", "range",
                                       "(", ")", "n", "+", "1", "print", "return", "\n"};

}  // namespace

MockGateway::MockGateway(MockConfig config) : config_(std::move(config)) {
  if (config_.embedding_dim == 0) throw ArgumentError("embedding_dim must be positive");
  fixtures_ = config_.fixtures ? load_fixtures(*config_.fixtures)
                               : std::make_shared<const Fixtures>();
}

std::size_t MockGateway::fixture_count() const {
  return fixtures_->by_key.size() + fixtures_->by_substring.size();
}

std::string MockGateway::request_key(std::string_view op, std::string_view payload) {
  std::string s(op);
  s.push_back('\n');
  s.append(payload);
  return sha256_hex(s);
}

std::vector<Completion> MockGateway::complete(const std::string& prompt,
                                              const GenerationParams& params) {
  params.validate();
  if (whitespace_tokens(prompt).size() > config_.context_limit)
    throw LengthError("prompt exceeds the mock context limit");
  std::vector<Completion> out;
  const nlohmann::json* fixture =
      fixtures_->find("complete", request_key("complete", prompt), prompt);
  const std::uint64_t base = seeded(config_.seed, "complete", prompt);
  for (int i = 0; i < params.samples; ++i) {
    Completion c;
    if (fixture) {
      const auto& texts = fixture->at("texts");
      c.text = texts.at(static_cast<std::size_t>(i) % texts.size()).get<std::string>();
    } else {
      // Greedy decoding repeats itself; sampling varies per candidate.
      std::uint64_t h = params.temperature == 0 ? base : splitmix(base + static_cast<unsigned>(i));
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
      c.text = std::string("mock ") + hex;
      int words = 4 + static_cast<int>(h % 12);
      for (int w = 0; w < words; ++w)
        c.text += " " + std::string(kWords[splitmix(h + static_cast<unsigned>(w)) %
                                           std::size(kWords)]);
      c.text += "\n// End of Code\n";
    }
    c.text = apply_stop(c.text, params.stop);
    if (params.logprobs) c.logprobs = token_logprobs(prompt, c.text);
    out.push_back(std::move(c));
  }
  return out;
}

LabelLogits MockGateway::score_labels(const std::string& prompt,
                                      const std::vector<std::string>& labels) {
  if (labels.empty()) throw ArgumentError("label list is empty");
  if (whitespace_tokens(prompt).size() > config_.context_limit)
    throw LengthError("prompt exceeds the mock context limit");
  std::map<std::string, double> observed;
  if (const auto* fixture =
          fixtures_->find("score_labels", request_key("score_labels", prompt), prompt)) {
    for (const auto& [label, value] : fixture->at("logits").items())
      observed[label] = value.get<double>();
  } else {
    const std::uint64_t base = seeded(config_.seed, "score_labels", prompt);
    for (const auto& label : labels) observed[label] = -8.0 * unit(base ^ hash64(label));
  }
  return floor_fill(observed, labels);
}

TokenLogProbs MockGateway::token_logprobs(const std::string& prompt,
                                          const std::string& continuation) {
  TokenLogProbs out;
  if (continuation.empty()) return out;
  auto tokens = whitespace_tokens(continuation);
  if (whitespace_tokens(prompt).size() + tokens.size() > config_.context_limit)
    throw LengthError("prompt and continuation exceed the mock context limit");
  std::string payload = prompt + '\x1f' + continuation;
  if (const auto* fixture = fixtures_->find(
          "token_logprobs", request_key("token_logprobs", payload), payload)) {
    out.tokens = fixture->at("tokens").get<std::vector<std::string>>();
    out.logprobs = fixture->at("logprobs").get<std::vector<double>>();
    out.validate();
    return out;
  }
  const std::uint64_t base = seeded(config_.seed, "token_logprobs", prompt);
  out.tokens = std::move(tokens);
  out.logprobs.reserve(out.tokens.size());
  for (std::size_t i = 0; i < out.tokens.size(); ++i)
    out.logprobs.push_back(-4.0 * unit(base ^ hash64(out.tokens[i]) ^ splitmix(i)));
  return out;
}

std::vector<double> MockGateway::embed(const std::string& text) {
  if (text.empty()) throw ArgumentError("cannot embed an empty string");
  if (const auto* fixture = fixtures_->find("embed", request_key("embed", text), text))
    return fixture->at("embedding").get<std::vector<double>>();
  // Hashed character trigrams of the text padded with one space each side.
  std::vector<double> v(config_.embedding_dim, 0.0);
  std::string padded = " " + text + " ";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (std::size_t k = 0; k < 3; ++k) {
      h ^= static_cast<unsigned char>(padded[i + k]);
      h *= 1099511628211ULL;
    }
    v[splitmix(h ^ config_.seed) % v.size()] += 1.0;
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

namespace {

std::shared_ptr<const MockGateway::Fixtures> load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read mock fixtures " + path.string());
  auto fx = std::make_shared<MockGateway::Fixtures>();
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = path.string() + ":" + std::to_string(number);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
      throw ConfigError(where + ": fixture needs a string 'op'");
    std::string op = j["op"];
    static const std::map<std::string, std::string> required = {
        {"complete", "texts"}, {"score_labels", "logits"},
        {"token_logprobs", "tokens"}, {"embed", "embedding"}};
    auto req = required.find(op);
    if (req == required.end()) throw ConfigError(where + ": unknown op '" + op + "'");
    if (!j.contains(req->second)) throw ConfigError(where + ": missing '" + req->second + "'");
    if (op == "complete" && (!j["texts"].is_array() || j["texts"].empty()))
      throw ConfigError(where + ": 'texts' must be a non-empty array");
    if (j.contains("key")) {
      fx->by_key[op + ":" + j["key"].get<std::string>()] = j;
    } else if (j.contains("contains")) {
      fx->by_substring.push_back({op, j["contains"].get<std::string>(), j});
    } else {
      throw ConfigError(where + ": fixture needs 'key' or 'contains'");
    }
  }
  return fx;
}

}  // namespace

}  // namespace f2s::gateway
