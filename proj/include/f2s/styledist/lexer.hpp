#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "f2s/corpus/language.hpp"
#include "f2s/support/error.hpp"

namespace f2s::style {

class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  /// Message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

enum class TokenKind {
  identifier,
  keyword,
  number,
  string,
  character,
  punct,
  preprocessor,  // whole C/C++ directive line
  newline,       // Python logical line end
  indent,
  dedent,
  end_of_file,
};

struct Token {
  TokenKind kind = TokenKind::end_of_file;
  std::string text;
  int line = 1;
  int column = 1;
  /// Go: semicolon inserted at a line break rather than written.
  bool implicit = false;
  /// C++/Java: this '>' or '=' directly continues a split ">>" operator.
  bool joined = false;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::punct, t); }
  bool is_keyword(std::string_view t) const { return is(TokenKind::keyword, t); }
};

/// Splits source text into tokens. Comments and insignificant whitespace are
/// discarded. Python output carries newline/indent/dedent tokens; Go output
/// carries inserted semicolons. The last token is always end_of_file.
std::vector<Token> tokenize(std::string_view source, Language lang);

bool is_keyword(std::string_view word, Language lang);

}  // namespace f2s::style
