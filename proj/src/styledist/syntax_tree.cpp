#include "f2s/styledist/syntax_tree.hpp"

#include <cctype>
#include <sstream>

namespace f2s::style {

SyntaxTree::SyntaxTree(std::vector<SyntaxNode> nodes, Language lang)
    : nodes_(std::move(nodes)), language_(lang) {
  if (nodes_.empty()) throw ArgumentError("syntax tree needs at least one node");
}

bool SyntaxTree::operator==(const SyntaxTree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& a = nodes_[i];
    const auto& b = other.nodes_[i];
    if (a.kind != b.kind || a.text != b.text || a.children != b.children) return false;
  }
  return true;
}

SyntaxTree SyntaxTree::from_bracket(std::string_view text) {
  TreeBuilder b;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_node = [&](auto&& self) -> int {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ',' &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (start == pos) throw ArgumentError("bracket tree: expected a label at offset " +
                                          std::to_string(pos));
    int id = b.add(std::string(text.substr(start, pos - start)));
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      for (;;) {
        int child = self(self);
        b.attach(id, child);
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        throw ArgumentError("bracket tree: expected ',' or ')' at offset " +
                            std::to_string(pos));
      }
    }
    return id;
  };
  int root = parse_node(parse_node);
  skip_ws();
  if (pos != text.size()) throw ArgumentError("bracket tree: trailing text");
  return b.finish(root, Language::unknown);
}

std::string SyntaxTree::to_bracket() const {
  std::string out;
  auto emit = [&](auto&& self, int id) -> void {
    const auto& n = node(id);
    out += n.kind;
    if (n.children.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      self(self, n.children[i]);
    }
    out += ')';
  };
  emit(emit, 0);
  return out;
}

std::string SyntaxTree::dump() const {
  std::ostringstream out;
  auto emit = [&](auto&& self, int id, int depth) -> void {
    const auto& n = node(id);
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << n.kind;
    if (!n.text.empty()) out << " \"" << n.text << '"';
    if (n.flags & kDeclaredName) out << " [decl]";
    out << '\n';
    for (int c : n.children) self(self, c, depth + 1);
  };
  emit(emit, 0, 0);
  return out.str();
}

int TreeBuilder::add(std::string kind, std::string text, int line, int column) {
  SyntaxNode n;
  n.kind = std::move(kind);
  n.text = std::move(text);
  n.line = line;
  n.column = column;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

SyntaxTree TreeBuilder::finish(int root, Language lang) const {
  std::vector<SyntaxNode> out;
  out.reserve(nodes_.size());
  // Iterative preorder; children indices are fixed up once each child's new id
  // is known.
  struct Frame {
    int old_id;
    int new_parent;
  };
  std::vector<Frame> stack{{root, -1}};
  while (!stack.empty()) {
    auto [old_id, parent] = stack.back();
    stack.pop_back();
    SyntaxNode copy = nodes_[static_cast<std::size_t>(old_id)];
    auto kids = std::move(copy.children);
    copy.children.clear();
    int new_id = static_cast<int>(out.size());
    out.push_back(std::move(copy));
    if (parent >= 0) out[static_cast<std::size_t>(parent)].children.push_back(new_id);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, new_id});
  }
  return SyntaxTree(std::move(out), lang);
}

}  // namespace f2s::style
