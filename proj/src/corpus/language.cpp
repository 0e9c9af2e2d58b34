#include "f2s/corpus/language.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace f2s {

std::string_view language_tag(Language lang) {
  switch (lang) {
    case Language::c: return "c";
    case Language::cpp: return "cpp";
    case Language::go: return "go";
    case Language::java: return "java";
    case Language::python: return "python";
    case Language::unknown: break;
  }
  return "unknown";
}

std::string_view language_display_name(Language lang) {
  switch (lang) {
    case Language::c: return "C";
    case Language::cpp: return "C++";
    case Language::go: return "Go";
    case Language::java: return "Java";
    case Language::python: return "Python";
    case Language::unknown: break;
  }
  return "Unknown";
}

std::optional<Language> parse_language(std::string_view tag) {
  std::string t(tag);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (t == "c") return Language::c;
  if (t == "cpp" || t == "c++" || t == "cxx") return Language::cpp;
  if (t == "go" || t == "golang") return Language::go;
  if (t == "java") return Language::java;
  if (t == "python" || t == "py" || t == "python3") return Language::python;
  return std::nullopt;
}

std::optional<Language> language_from_path(std::string_view path) {
  auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto ext = path.substr(dot + 1);
  if (ext == "c" || ext == "h") return Language::c;
  if (ext == "cpp" || ext == "cc" || ext == "cxx" || ext == "hpp") return Language::cpp;
  if (ext == "go") return Language::go;
  if (ext == "java") return Language::java;
  if (ext == "py") return Language::python;
  return std::nullopt;
}

}  // namespace f2s
