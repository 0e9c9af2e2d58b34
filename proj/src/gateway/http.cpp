#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "f2s/gateway/gateway.hpp"

namespace f2s::gateway {

using nlohmann::json;

void HttpConfig::validate() const {
  if (max_attempts < 1) throw ConfigError("gateway max_attempts must be at least 1");
  if (backoff_ms < 0 || max_backoff_ms < backoff_ms)
    throw ConfigError("gateway backoff must satisfy 0 <= backoff_ms <= max_backoff_ms");
  if (max_in_flight < 1 || max_in_flight > 1024)
    throw ConfigError("gateway max_in_flight must be in [1, 1024]");
  if (timeout_s < 1) throw ConfigError("gateway timeout_s must be positive");
  if (top_logprobs < 1) throw ConfigError("gateway top_logprobs must be positive");
}

struct HttpGateway::Limiter {
  explicit Limiter(int n) : slots(n) {}
  std::counting_semaphore<1024> slots;
};

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint URL lacks a scheme: " + url);
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

bool mentions_context_length(const std::string& body) {
  return body.find("context length") != std::string::npos ||
         body.find("context_length") != std::string::npos ||
         body.find("maximum context") != std::string::npos;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ResponseError(std::string("response is not JSON: ") + e.what());
  }
}

const json& choices_of(const json& j) {
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
    throw ResponseError("response has no choices");
  return j["choices"];
}

const json& logprobs_of(const json& choice) {
  if (!choice.contains("logprobs") || !choice["logprobs"].is_object())
    throw UnsupportedError("endpoint returned no log-probabilities");
  return choice["logprobs"];
}

TokenLogProbs token_table(const json& lp, std::size_t from = 0) {
  TokenLogProbs out;
  const auto& tokens = lp.at("tokens");
  const auto& values = lp.at("token_logprobs");
  if (tokens.size() != values.size()) throw ResponseError("misaligned log-probability arrays");
  for (std::size_t i = from; i < tokens.size(); ++i) {
    if (values[i].is_null()) throw ResponseError("missing log-probability for a token");
    out.tokens.push_back(tokens[i].get<std::string>());
    out.logprobs.push_back(values[i].get<double>());
  }
  out.validate();
  return out;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

HttpGateway::HttpGateway(HttpConfig config) : config_(std::move(config)) {
  config_.validate();
  if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  limiter_ = std::make_unique<Limiter>(config_.max_in_flight);
}

HttpGateway::~HttpGateway() = default;

std::string HttpGateway::post(const std::string& url, const std::string& body) {
  if (url.empty()) throw ConfigError("endpoint URL is not configured");
  Url target = split_url(url);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  std::string last_error;
  int backoff = config_.backoff_ms;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff = std::min(backoff * 2, config_.max_backoff_ms);
    }
    ++attempts_;
    limiter_->slots.acquire();
    httplib::Result res = [&] {
      httplib::Client client(target.origin);
      client.set_connection_timeout(config_.timeout_s, 0);
      client.set_read_timeout(config_.timeout_s, 0);
      client.set_write_timeout(config_.timeout_s, 0);
      auto r = client.Post(target.path, headers, body, "application/json");
      limiter_->slots.release();
      return r;
    }();
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300);
    if (res->status == 429 || res->status >= 500) continue;
    if (mentions_context_length(res->body)) throw LengthError(last_error);
    throw ResponseError(last_error);
  }
  throw TransportError(url + " failed after " + std::to_string(config_.max_attempts) +
                       " attempt(s): " + last_error);
}

std::vector<Completion> HttpGateway::complete(const std::string& prompt,
                                              const GenerationParams& params) {
  params.validate();
  json req = {{"model", config_.model},         {"prompt", prompt},
              {"max_tokens", params.max_tokens}, {"temperature", params.temperature},
              {"n", params.samples}};
  if (!params.stop.empty()) req["stop"] = params.stop;
  if (params.logprobs) req["logprobs"] = 0;
  json res = parse_body(post(config_.completion_url, req.dump()));
  const auto& choices = choices_of(res);
  if (choices.size() != static_cast<std::size_t>(params.samples))
    throw ResponseError("expected " + std::to_string(params.samples) + " choices, got " +
                        std::to_string(choices.size()));
  std::vector<Completion> out(choices.size());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto& c = choices[i];
    std::size_t slot = c.value("index", i);
    if (slot >= out.size()) throw ResponseError("choice index out of range");
    // Servers differ on whether the stop string is echoed; never keep it.
    out[slot].text = apply_stop(c.at("text").get<std::string>(), params.stop);
    if (params.logprobs) out[slot].logprobs = token_table(logprobs_of(c));
  }
  return out;
}

LabelLogits HttpGateway::score_labels(const std::string& prompt,
                                      const std::vector<std::string>& labels) {
  if (labels.empty()) throw ArgumentError("label list is empty");
  int top = std::max<int>(config_.top_logprobs, static_cast<int>(labels.size()));
  json req = {{"model", config_.model}, {"prompt", prompt}, {"max_tokens", 1},
              {"temperature", 0},       {"logprobs", top}};
  json res = parse_body(post(config_.completion_url, req.dump()));
  const auto& lp = logprobs_of(choices_of(res)[0]);
  if (!lp.contains("top_logprobs") || !lp["top_logprobs"].is_array() ||
      lp["top_logprobs"].empty() || !lp["top_logprobs"][0].is_object())
    throw UnsupportedError("endpoint returned no top alternatives");
  std::map<std::string, double> observed;
  for (const auto& [token, value] : lp["top_logprobs"][0].items()) {
    // " 4" and "4" are the same label; keep the likelier rendering.
    std::string label = trim(token);
    double v = value.get<double>();
    auto [it, inserted] = observed.emplace(label, v);
    if (!inserted) it->second = std::max(it->second, v);
  }
  return floor_fill(observed, labels);
}

TokenLogProbs HttpGateway::token_logprobs(const std::string& prompt,
                                          const std::string& continuation) {
  if (continuation.empty()) return {};
  json req = {{"model", config_.model}, {"prompt", prompt + continuation},
              {"max_tokens", 0},        {"temperature", 0},
              {"echo", true},           {"logprobs", 0}};
  json res = parse_body(post(config_.completion_url, req.dump()));
  const auto& lp = logprobs_of(choices_of(res)[0]);
  if (!lp.contains("text_offset")) throw UnsupportedError("endpoint does not echo token offsets");
  const auto& offsets = lp["text_offset"];
  const auto& tokens = lp.at("tokens");
  if (offsets.size() != tokens.size()) throw ResponseError("misaligned token offsets");
  // First token ending inside the continuation; a token straddling the
  // boundary belongs to the continuation.
  std::size_t from = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t end = offsets[i].get<std::size_t>() + tokens[i].get<std::string>().size();
    if (end > prompt.size()) {
      from = i;
      break;
    }
  }
  return token_table(lp, from);
}

std::vector<double> HttpGateway::embed(const std::string& text) {
  if (text.empty()) throw ArgumentError("cannot embed an empty string");
  json req = {{"model", config_.embedding_model}, {"input", text}};
  json res = parse_body(post(config_.embedding_url, req.dump()));
  if (!res.contains("data") || !res["data"].is_array() || res["data"].empty())
    throw ResponseError("embedding response has no data");
  auto v = res["data"][0].at("embedding").get<std::vector<double>>();
  if (v.empty() || std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
    throw ResponseError("endpoint returned an empty or zero embedding");
  return v;
}

}  // namespace f2s::gateway
