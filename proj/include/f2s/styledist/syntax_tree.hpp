#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "f2s/corpus/language.hpp"
#include "f2s/support/error.hpp"

namespace f2s::style {

/// Marks identifiers that introduce a variable (declarators, parameters,
/// assignment targets, loop variables).
inline constexpr std::uint8_t kDeclaredName = 1u << 0;

struct SyntaxNode {
  std::string kind;
  /// Identifier name, literal spelling or operator. Not used for structure.
  std::string text;
  std::vector<int> children;
  int line = 0;
  int column = 0;
  std::uint8_t flags = 0;
};

/// Ordered labelled tree. Nodes are stored in preorder; node 0 is the root.
class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(std::vector<SyntaxNode> nodes, Language lang);

  std::size_t node_count() const { return nodes_.size(); }
  const SyntaxNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<SyntaxNode>& nodes() const { return nodes_; }
  int root() const { return 0; }
  Language language() const { return language_; }

  /// Compares kinds, texts and shape.
  bool operator==(const SyntaxTree& other) const;

  /// Builds a tree of bare kinds from "a(b,c(d))" notation; for tests and tools.
  static SyntaxTree from_bracket(std::string_view text);
  /// Kinds-only bracket notation, the inverse of from_bracket.
  std::string to_bracket() const;
  /// Indented dump including node texts, for debugging.
  std::string dump() const;

 private:
  std::vector<SyntaxNode> nodes_;
  Language language_ = Language::unknown;
};

/// Collects nodes into a tree. Nodes may be created in any order; finish()
/// renumbers the nodes reachable from `root` into preorder and drops the rest.
class TreeBuilder {
 public:
  int add(std::string kind, std::string text = {}, int line = 0, int column = 0);
  void attach(int parent, int child) { nodes_[parent].children.push_back(child); }
  SyntaxNode& at(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  const SyntaxNode& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t mark() const { return nodes_.size(); }
  /// Discards nodes created after `mark` (used when backtracking).
  void rewind(std::size_t mark) { nodes_.resize(mark); }
  SyntaxTree finish(int root, Language lang) const;

 private:
  std::vector<SyntaxNode> nodes_;
};

}  // namespace f2s::style
