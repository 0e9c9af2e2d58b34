#include "f2s/styledist/lexer.hpp"

#include <array>
#include <cctype>
#include <set>

namespace f2s::style {

ParseError::ParseError(std::string message, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      detail_(std::move(message)),
      line_(line),
      column_(column) {}

namespace {

const std::set<std::string_view>& keywords(Language lang) {
  static const std::set<std::string_view> c = {
      "auto",   "break",    "case",     "char",   "const",    "continue", "default",
      "do",     "double",   "else",     "enum",   "extern",   "float",    "for",
      "goto",   "if",       "inline",   "int",    "long",     "register", "restrict",
      "return", "short",    "signed",   "sizeof", "static",   "struct",   "switch",
      "typedef", "union",   "unsigned", "void",   "volatile", "while",    "_Bool"};
  static const std::set<std::string_view> cpp = [] {
    std::set<std::string_view> k(c.begin(), c.end());
    k.erase("restrict");
    for (auto w : {"alignas", "alignof", "bool", "catch", "class", "const_cast", "constexpr",
                   "decltype", "delete", "dynamic_cast", "explicit", "false", "friend",
                   "mutable", "namespace", "new", "noexcept", "nullptr", "operator", "private",
                   "protected", "public", "reinterpret_cast", "static_assert", "static_cast",
                   "template", "this", "throw", "true", "try", "typeid", "typename", "using",
                   "virtual", "wchar_t", "char16_t", "char32_t", "thread_local"})
      k.insert(w);
    return k;
  }();
  static const std::set<std::string_view> java = {
      "abstract", "assert",     "boolean",   "break",   "byte",       "case",
      "catch",    "char",       "class",     "const",   "continue",   "default",
      "do",       "double",     "else",      "enum",    "extends",    "final",
      "finally",  "float",      "for",       "goto",    "if",         "implements",
      "import",   "instanceof", "int",       "interface", "long",     "native",
      "new",      "package",    "private",   "protected", "public",   "return",
      "short",    "static",     "strictfp",  "super",   "switch",     "synchronized",
      "this",     "throw",      "throws",    "transient", "try",      "void",
      "volatile", "while",      "true",      "false",   "null"};
  static const std::set<std::string_view> go = {
      "break",  "case",   "chan",   "const", "continue", "default", "defer",
      "else",   "fallthrough", "for", "func", "go",      "goto",    "if",
      "import", "interface", "map", "package", "range",  "return",  "select",
      "struct", "switch", "type",   "var"};
  static const std::set<std::string_view> python = {
      "False", "None",   "True",    "and",      "as",     "assert", "async",
      "await", "break",  "class",   "continue", "def",    "del",    "elif",
      "else",  "except", "finally", "for",      "from",   "global", "if",
      "import", "in",    "is",      "lambda",   "nonlocal", "not",  "or",
      "pass",  "raise",  "return",  "try",      "while",  "with",   "yield"};
  static const std::set<std::string_view> none;
  switch (lang) {
    case Language::c: return c;
    case Language::cpp: return cpp;
    case Language::java: return java;
    case Language::go: return go;
    case Language::python: return python;
    case Language::unknown: break;
  }
  return none;
}

// Longest match first within each list.
const std::vector<std::string_view>& punctuators(Language lang) {
  static const std::vector<std::string_view> cfamily = {
      "<<=", ">>=", "...", "->*", "<=>", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
      "!=",  "&&",  "||",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "::", ".*"};
  static const std::vector<std::string_view> java = {
      ">>>=", "<<=", ">>=", ">>>", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
      "!=",   "&&",  "||",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "::"};
  static const std::vector<std::string_view> go = {
      "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--", "==", "!=", "<=",
      ">=",  ":=",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "&^"};
  static const std::vector<std::string_view> python = {
      "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=",
      "==",  "!=",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "@="};
  switch (lang) {
    case Language::java: return java;
    case Language::go: return go;
    case Language::python: return python;
    default: return cfamily;
  }
}

bool is_ident_start(char ch) {
  return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_' ||
         static_cast<unsigned char>(ch) >= 0x80;
}

bool is_ident_char(char ch) {
  return is_ident_start(ch) || std::isdigit(static_cast<unsigned char>(ch));
}

class Lexer {
 public:
  Lexer(std::string_view src, Language lang) : src_(src), lang_(lang) {}

  std::vector<Token> run() {
    if (lang_ == Language::python) indents_.push_back(0);
    at_line_start_ = true;
    while (pos_ < src_.size()) {
      if (lang_ == Language::python && at_line_start_ && depth_ == 0) {
        if (!python_line_start()) continue;
      }
      char ch = src_[pos_];
      if (ch == '\n') {
        newline();
        continue;
      }
      if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v') {
        advance();
        continue;
      }
      if (ch == '\\' && peek(1) == '\n') {  // explicit line joining
        advance();
        advance();
        continue;
      }
      if (ch == '\\' && peek(1) == '\r' && peek(2) == '\n') {
        advance();
        advance();
        advance();
        continue;
      }
      if (lang_ == Language::python && ch == '#') {
        skip_line_comment();
        continue;
      }
      if (lang_ != Language::python && ch == '/' && peek(1) == '/') {
        skip_line_comment();
        continue;
      }
      if (lang_ != Language::python && ch == '/' && peek(1) == '*') {
        skip_block_comment();
        continue;
      }
      if ((lang_ == Language::c || lang_ == Language::cpp) && ch == '#' && line_has_only_space()) {
        preprocessor();
        continue;
      }
      lex_token();
    }
    finish();
    return std::move(tokens_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw ParseError(msg, line, col);
  }

  void push(TokenKind kind, std::string text, int line, int col) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.column = col;
    tokens_.push_back(std::move(t));
    line_has_token_ = true;
  }

  bool line_has_only_space() const {
    std::size_t i = pos_;
    while (i > 0) {
      char c = src_[i - 1];
      if (c == '\n') return true;
      if (c != ' ' && c != '\t') return false;
      --i;
    }
    return true;
  }

  // Go: insert a semicolon at a line break after certain tokens.
  void maybe_insert_semicolon(int line, int col) {
    if (lang_ != Language::go || tokens_.empty()) return;
    const Token& last = tokens_.back();
    bool insert = false;
    switch (last.kind) {
      case TokenKind::identifier:
      case TokenKind::number:
      case TokenKind::string:
      case TokenKind::character:
        insert = true;
        break;
      case TokenKind::keyword:
        insert = last.text == "break" || last.text == "continue" ||
                 last.text == "fallthrough" || last.text == "return";
        break;
      case TokenKind::punct:
        insert = last.text == "++" || last.text == "--" || last.text == ")" ||
                 last.text == "]" || last.text == "}";
        break;
      default:
        break;
    }
    if (insert) {
      push(TokenKind::punct, ";", line, col);
      tokens_.back().implicit = true;
    }
  }

  void newline() {
    maybe_insert_semicolon(line_, col_);
    if (lang_ == Language::python && depth_ == 0 && line_has_token_) {
      push(TokenKind::newline, "", line_, col_);
    }
    advance();
    at_line_start_ = depth_ == 0;
    if (depth_ == 0) line_has_token_ = false;
  }

  // Handles indentation at the start of a Python line. Returns false when the
  // line was blank or comment-only and has been consumed.
  bool python_line_start() {
    int width = 0;
    std::size_t p = pos_;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\f')) {
      width = src_[p] == '\t' ? (width / 8 + 1) * 8 : width + 1;
      ++p;
    }
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#' ||
        (src_[p] == '\r' && p + 1 < src_.size() && src_[p + 1] == '\n') ||
        (src_[p] == '\\' && p + 1 < src_.size() && src_[p + 1] == '\n')) {
      while (pos_ < p) advance();
      if (pos_ < src_.size() && src_[pos_] == '#') skip_line_comment();
      if (pos_ < src_.size() && src_[pos_] == '\r') advance();
      if (pos_ < src_.size() && src_[pos_] == '\n') advance();
      return false;
    }
    while (pos_ < p) advance();
    at_line_start_ = false;
    if (width > indents_.back()) {
      indents_.push_back(width);
      push(TokenKind::indent, "", line_, col_);
      line_has_token_ = false;
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        push(TokenKind::dedent, "", line_, col_);
        line_has_token_ = false;
      }
      if (width != indents_.back()) fail("unindent does not match any outer level", line_, col_);
    }
    return true;
  }

  void skip_line_comment() {
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && lang_ != Language::python && peek(1) == '\n') advance();
      advance();
    }
  }

  void skip_block_comment() {
    int line = line_, col = col_;
    bool crossed_line = false;
    advance();
    advance();
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated block comment", line, col);
      if (src_[pos_] == '*' && peek(1) == '/') {
        advance();
        advance();
        break;
      }
      if (src_[pos_] == '\n') crossed_line = true;
      advance();
    }
    // A Go block comment spanning lines acts like a newline.
    if (crossed_line) maybe_insert_semicolon(line_, col_);
  }

  void preprocessor() {
    int line = line_, col = col_;
    std::string text;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && peek(1) == '\n') {
        advance();
        advance();
        text += ' ';
        continue;
      }
      if (src_[pos_] == '/' && peek(1) == '/') break;
      if (src_[pos_] == '/' && peek(1) == '*') {
        skip_block_comment();
        text += ' ';
        continue;
      }
      text += src_[pos_];
      advance();
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    push(TokenKind::preprocessor, std::move(text), line, col);
    skip_line_comment();
  }

  void lex_token() {
    const int line = line_, col = col_;
    const char ch = src_[pos_];

    if (is_ident_start(ch)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      std::string word(src_.substr(start, pos_ - start));
      if (string_prefix(word) && (peek() == '"' || peek() == '\'')) {
        lex_string(word, line, col);
        return;
      }
      TokenKind kind = is_keyword(word, lang_) ? TokenKind::keyword : TokenKind::identifier;
      push(kind, std::move(word), line, col);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) ||
        (ch == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(line, col);
      return;
    }
    if (ch == '"' || (ch == '\'' && lang_ == Language::python)) {
      lex_string("", line, col);
      return;
    }
    if (ch == '\'') {
      lex_char(line, col);
      return;
    }
    if (ch == '`' && lang_ == Language::go) {
      std::size_t start = pos_;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '`') advance();
      if (pos_ >= src_.size()) fail("unterminated raw string", line, col);
      advance();
      push(TokenKind::string, std::string(src_.substr(start, pos_ - start)), line, col);
      return;
    }
    for (auto p : punctuators(lang_)) {
      if (src_.substr(pos_, p.size()) == p) {
        if ((lang_ == Language::cpp || lang_ == Language::java) && p.substr(0, 2) == ">>") {
          // Emitted one character at a time so template argument lists can
          // close on '>'; the parser re-joins adjacent '>' into shifts.
          for (std::size_t i = 0; i < p.size(); ++i) {
            int c = col_;
            advance();
            push(TokenKind::punct, std::string(1, p[i]), line, c);
            tokens_.back().joined = i > 0;
          }
          return;
        }
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        push(TokenKind::punct, std::string(p), line, col);
        return;
      }
    }
    static constexpr std::string_view singles = "()[]{};,.:?~!+-*/%&|^<>=@";
    if (singles.find(ch) != std::string_view::npos) {
      if (ch == '(' || ch == '[' || ch == '{') ++depth_;
      if ((ch == ')' || ch == ']' || ch == '}') && depth_ > 0) --depth_;
      advance();
      push(TokenKind::punct, std::string(1, ch), line, col);
      return;
    }
    fail(std::string("unexpected character '") + ch + "'", line, col);
  }

  bool string_prefix(const std::string& word) const {
    if (lang_ == Language::python) {
      if (word.size() > 2) return false;
      for (char c : word) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
      }
      return true;
    }
    if (lang_ == Language::c || lang_ == Language::cpp) {
      return word == "L" || word == "u" || word == "U" || word == "u8" || word == "R" ||
             word == "LR" || word == "uR" || word == "UR" || word == "u8R";
    }
    return false;
  }

  void lex_number(int line, int col) {
    std::size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      char prev = pos_ > start ? src_[pos_ - 1] : '\0';
      bool hex = pos_ - start >= 2 && (src_[start + 1] == 'x' || src_[start + 1] == 'X');
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        advance();
      } else if (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
      } else if (c == '.' && peek(1) != '.' && !is_ident_start(peek(1)) &&
                 lang_ != Language::go) {
        advance();  // "1." style float
      } else if ((c == '+' || c == '-') &&
                 ((!hex && (prev == 'e' || prev == 'E')) || prev == 'p' || prev == 'P')) {
        advance();
      } else if (c == '\'' && lang_ == Language::cpp &&
                 std::isxdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
      } else {
        break;
      }
    }
    push(TokenKind::number, std::string(src_.substr(start, pos_ - start)), line, col);
  }

  void lex_char(int line, int col) {
    std::size_t start = pos_;
    advance();
    while (pos_ < src_.size() && src_[pos_] != '\'') {
      if (src_[pos_] == '\n') fail("unterminated character literal", line, col);
      if (src_[pos_] == '\\') advance();
      if (pos_ < src_.size()) advance();
    }
    if (pos_ >= src_.size()) fail("unterminated character literal", line, col);
    advance();
    push(TokenKind::character, std::string(src_.substr(start, pos_ - start)), line, col);
  }

  void lex_string(const std::string& prefix, int line, int col) {
    std::size_t start = pos_ - prefix.size();
    const bool raw_cpp = (lang_ == Language::c || lang_ == Language::cpp) &&
                         !prefix.empty() && prefix.back() == 'R';
    const char quote = src_[pos_];
    if (raw_cpp) {
      advance();
      std::string delim;
      while (pos_ < src_.size() && src_[pos_] != '(') {
        delim += src_[pos_];
        advance();
      }
      std::string close = ")" + delim + "\"";
      auto end = src_.find(close, pos_);
      if (end == std::string_view::npos) fail("unterminated raw string", line, col);
      while (pos_ < end + close.size()) advance();
    } else if (src_.substr(pos_, 3) == std::string(3, quote) &&
               (lang_ == Language::python || lang_ == Language::java)) {
      std::string close(3, quote);
      advance();
      advance();
      advance();
      for (;;) {
        if (pos_ >= src_.size()) fail("unterminated triple-quoted string", line, col);
        if (src_[pos_] == '\\') {
          advance();
          if (pos_ < src_.size()) advance();
          continue;
        }
        if (src_.substr(pos_, 3) == close) {
          advance();
          advance();
          advance();
          break;
        }
        advance();
      }
    } else {
      advance();
      for (;;) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') fail("unterminated string literal", line, col);
        if (src_[pos_] == '\\') {
          advance();
          if (pos_ < src_.size()) advance();
          continue;
        }
        if (src_[pos_] == quote) {
          advance();
          break;
        }
        advance();
      }
    }
    push(TokenKind::string, std::string(src_.substr(start, pos_ - start)), line, col);
  }

  void finish() {
    maybe_insert_semicolon(line_, col_);
    if (lang_ == Language::python) {
      if (line_has_token_) push(TokenKind::newline, "", line_, col_);
      while (indents_.size() > 1) {
        indents_.pop_back();
        push(TokenKind::dedent, "", line_, col_);
      }
    }
    push(TokenKind::end_of_file, "", line_, col_);
  }

  std::string_view src_;
  Language lang_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;  // bracket nesting; Python ignores newlines inside brackets
  bool at_line_start_ = true;
  bool line_has_token_ = false;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word, Language lang) { return keywords(lang).count(word) > 0; }

std::vector<Token> tokenize(std::string_view source, Language lang) {
  if (lang == Language::unknown) throw ArgumentError("no grammar for unknown language");
  return Lexer(source, lang).run();
}

}  // namespace f2s::style
