#include <algorithm>
#include <cctype>
#include <cmath>

#include "f2s/gateway/gateway.hpp"

namespace f2s::gateway {

void GenerationParams::validate() const {
  if (!std::isfinite(temperature) || temperature < 0)
    throw ArgumentError("temperature must be finite and non-negative");
  if (max_tokens < 1) throw ArgumentError("max_tokens must be positive");
  if (samples < 1) throw ArgumentError("samples must be at least 1");
  for (const auto& s : stop)
    if (s.empty()) throw ArgumentError("stop strings must be non-empty");
}

void TokenLogProbs::validate() const {
  if (tokens.size() != logprobs.size())
    throw ResponseError("token and log-probability counts differ");
  for (double lp : logprobs)
    if (!std::isfinite(lp) || lp > 1e-9)
      throw ResponseError("log-probability out of range: " + std::to_string(lp));
}

LabelLogits floor_fill(const std::map<std::string, double>& observed,
                       const std::vector<std::string>& labels) {
  if (labels.empty()) throw ArgumentError("label list is empty");
  LabelLogits out;
  double lowest = INFINITY;
  for (const auto& label : labels) {
    auto it = observed.find(label);
    if (it == observed.end()) continue;
    out.label_logits[label] = it->second;
    lowest = std::min(lowest, it->second);
  }
  if (out.label_logits.empty()) throw ResponseError("none of the labels were scored");
  for (const auto& label : labels) out.label_logits.try_emplace(label, lowest - kLabelFloorOffset);
  return out;
}

std::string apply_stop(std::string_view text, const std::vector<std::string>& stop) {
  std::size_t cut = text.size();
  for (const auto& s : stop) {
    if (s.empty()) continue;
    cut = std::min(cut, text.find(s));
  }
  return std::string(text.substr(0, cut));
}

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

bool fence_line(std::string_view line) {
  auto start = line.find_first_not_of(" \t");
  return start != std::string_view::npos && line.substr(start).starts_with("```");
}

}  // namespace

std::string extract_code(std::string_view completion) {
  std::string_view text = completion;
  if (auto at = text.find(kEndOfCode); at != std::string_view::npos) {
    text = text.substr(0, at);
    // "// End of Code" or "# End of Code" leaves the comment marker behind.
    auto line_start = text.rfind('\n');
    line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
    auto tail = text.substr(line_start);
    if (std::all_of(tail.begin(), tail.end(), [](unsigned char c) {
          return std::isspace(c) || c == '/' || c == '#' || c == '*' || c == '-';
        }))
      text = text.substr(0, line_start);
  }

  // Body of the first fence; an unclosed fence runs to the end.
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    if (fence_line(line)) {
      if (eol == std::string_view::npos) {
        text = {};
        break;
      }
      auto body = text.substr(eol + 1);
      std::size_t p = 0;
      std::size_t end = body.size();
      while (p < body.size()) {
        auto e = body.find('\n', p);
        auto l = body.substr(p, e == std::string_view::npos ? std::string_view::npos : e - p);
        if (fence_line(l)) {
          end = p;
          break;
        }
        if (e == std::string_view::npos) break;
        p = e + 1;
      }
      text = body.substr(0, end);
      break;
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  // Trim blank leading lines and trailing whitespace.
  while (!text.empty()) {
    auto eol = text.find('\n');
    if (eol == std::string_view::npos || !blank(text.substr(0, eol))) break;
    text.remove_prefix(eol + 1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return {};
  std::string out(text);
  out.push_back('\n');
  return out;
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j == text.size()) {
      if (out.empty()) out.emplace_back(text.substr(i));
      else out.back().append(text.substr(i));
      break;
    }
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace f2s::gateway
