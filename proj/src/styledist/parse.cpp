#include <algorithm>

#include "f2s/styledist/styledist.hpp"
#include "parsers.hpp"

namespace f2s::style {

SyntaxTree parse(std::string_view source, Language lang) {
  switch (lang) {
    case Language::c:
    case Language::cpp:
    case Language::java:
      return detail::parse_cfamily(tokenize(source, lang), lang);
    case Language::go:
      return detail::parse_go(tokenize(source, lang));
    case Language::python:
      return detail::parse_python(tokenize(source, lang));
    case Language::unknown:
      break;
  }
  throw GrammarMissingError("no grammar for language '" + std::string(language_tag(lang)) + "'");
}

SyntaxTree parse(const CodeSnippet& code) {
  if (code.language == Language::unknown)
    throw GrammarMissingError("no grammar for language '" + code.language_tag + "'");
  return parse(code.source_text, code.language);
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<std::string> extract_variables(const SyntaxTree& tree) {
  std::vector<std::string> out;
  for (const auto& n : tree.nodes())
    // `_` is a discard marker, not a name.
    if ((n.flags & kDeclaredName) && !n.text.empty() && n.text != "_") out.push_back(n.text);
  return sorted_unique(std::move(out));
}

std::vector<std::string> extract_apis(const SyntaxTree& tree) {
  std::vector<std::string> out;
  for (const auto& n : tree.nodes())
    if ((n.kind == "call_expression" || n.kind == "call") && !n.text.empty())
      out.push_back(n.text);
  return sorted_unique(std::move(out));
}

}  // namespace f2s::style
