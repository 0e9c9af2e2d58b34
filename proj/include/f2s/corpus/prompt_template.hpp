#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace f2s {

/// A text template with `{NAME}` placeholders. Substitution is single pass, so
/// braces inside substituted code are never re-expanded.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}

  static PromptTemplate load(const std::filesystem::path& path);

  /// Unknown placeholders are left verbatim.
  std::string render(const std::map<std::string, std::string>& values) const;

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

}  // namespace f2s
