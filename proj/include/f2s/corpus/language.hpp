#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace f2s {

/// Programming languages handled by the toolkit. `unknown` only appears on
/// snippets loaded from files with an unrecognised tag; validation flags it.
enum class Language { c, cpp, go, java, python, unknown };

inline constexpr Language kSupportedLanguages[] = {Language::c, Language::cpp, Language::go,
                                                   Language::java, Language::python};

/// Corpus tag: "c", "cpp", "go", "java", "python".
std::string_view language_tag(Language lang);

/// Name used inside prompts: "C", "C++", "Go", "Java", "Python".
std::string_view language_display_name(Language lang);

/// Accepts corpus tags plus a few common spellings ("c++", "py", "golang").
std::optional<Language> parse_language(std::string_view tag);

/// Guesses the language from a file extension; nullopt when unrecognised.
std::optional<Language> language_from_path(std::string_view path);

}  // namespace f2s
