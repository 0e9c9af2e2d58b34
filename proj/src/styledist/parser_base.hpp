#pragma once

// Token cursor and tree-building helpers shared by the language parsers.

#include <string>
#include <string_view>
#include <vector>

#include "f2s/styledist/lexer.hpp"
#include "f2s/styledist/syntax_tree.hpp"

namespace f2s::style::detail {

class ParserBase {
 protected:
  ParserBase(std::vector<Token> tokens, Language lang) : toks_(std::move(tokens)), lang_(lang) {}

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return cur().kind == TokenKind::end_of_file; }
  bool at(std::string_view punct) const { return cur().is_punct(punct); }
  bool at_kw(std::string_view kw) const { return cur().is_keyword(kw); }
  bool at_ident() const { return cur().kind == TokenKind::identifier; }

  Token take() {
    Token t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    take();
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    take();
    return true;
  }
  Token expect(std::string_view punct, std::string_view context = {}) {
    if (!at(punct)) {
      std::string msg = "expected '" + std::string(punct) + "'";
      if (!context.empty()) msg += " " + std::string(context);
      fail(msg);
    }
    return take();
  }
  Token expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail("expected '" + std::string(kw) + "'");
    return take();
  }
  Token expect_ident(std::string_view context = {}) {
    if (!at_ident()) {
      std::string msg = "expected identifier";
      if (!context.empty()) msg += " " + std::string(context);
      fail(msg);
    }
    return take();
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = cur();
    std::string found = t.kind == TokenKind::end_of_file ? "end of input"
                        : t.kind == TokenKind::newline   ? "end of line"
                        : t.kind == TokenKind::indent    ? "indent"
                        : t.kind == TokenKind::dedent    ? "dedent"
                        : t.implicit                     ? "newline"
                                                         : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.line, t.column);
  }

  int node(std::string kind, const Token& at_tok, std::string text = {}) {
    return b_.add(std::move(kind), std::move(text), at_tok.line, at_tok.column);
  }
  int node(std::string kind) { return node(std::move(kind), cur()); }
  int leaf(std::string kind, const Token& t) { return node(std::move(kind), t, t.text); }
  void add(int parent, int child) {
    if (child >= 0) b_.attach(parent, child);
  }
  int wrap(std::string kind, int child, std::string text = {}) {
    const auto& c = b_.at(child);
    int id = b_.add(std::move(kind), std::move(text), c.line, c.column);
    b_.attach(id, child);
    return id;
  }
  SyntaxNode& at_node(int id) { return b_.at(id); }
  void mark_declared(int ident) {
    if (ident >= 0) b_.at(ident).flags |= kDeclaredName;
  }

  struct Mark {
    std::size_t pos;
    std::size_t nodes;
  };
  Mark mark() const { return {pos_, b_.mark()}; }
  void reset(const Mark& m) {
    pos_ = m.pos;
    b_.rewind(m.nodes);
  }

  /// Rightmost identifier name in a callee expression ("a.b.c" -> "c").
  std::string rightmost_name(int id) const {
    const SyntaxNode* n = &b_.at(id);
    for (int guard = 0; guard < 64; ++guard) {
      if (n->children.empty()) {
        if (n->kind.find("identifier") != std::string::npos || n->kind == "name")
          return n->text;
        return {};
      }
      const std::string& k = n->kind;
      int next;
      if (k == "template_function" || k == "generic_function" || k == "template_type" ||
          k == "generic_type" || k == "parenthesized_expression")
        next = n->children.front();
      else if (k == "field_expression" || k == "qualified_identifier" ||
               k == "scoped_identifier" || k == "selector_expression" || k == "attribute" ||
               k == "scoped_type_identifier" || k == "qualified_type")
        next = n->children.back();
      else
        return {};
      n = &b_.at(next);
    }
    return {};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Language lang_;
  TreeBuilder b_;
};

}  // namespace f2s::style::detail
