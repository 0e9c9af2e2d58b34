#pragma once

// Exhaustive tree-edit-distance oracle for small trees. Every edit script
// corresponds to a mapping between the two node sets that preserves both
// preorder and postorder (ancestry and sibling order); its cost is
// relabels + unmapped nodes on either side. Enumerating all such mappings and
// taking the cheapest gives the edit distance without any dynamic programming.

#include <random>
#include <string>
#include <vector>

#include "f2s/styledist/syntax_tree.hpp"

namespace f2s::testing {

struct FlatTree {
  std::vector<std::string> label;  // by preorder index
  std::vector<int> post;           // postorder rank by preorder index
};

inline FlatTree flatten(const style::SyntaxTree& t) {
  FlatTree f;
  f.label.resize(t.node_count());
  f.post.resize(t.node_count());
  int rank = 0;
  auto walk = [&](auto&& self, int id) -> void {
    f.label[static_cast<std::size_t>(id)] = t.node(id).kind;
    for (int c : t.node(id).children) self(self, c);
    f.post[static_cast<std::size_t>(id)] = rank++;
  };
  walk(walk, t.root());
  return f;
}

inline long brute_force_ted(const style::SyntaxTree& t1, const style::SyntaxTree& t2) {
  const FlatTree a = flatten(t1), b = flatten(t2);
  const int n1 = static_cast<int>(a.label.size()), n2 = static_cast<int>(b.label.size());
  std::vector<std::pair<int, int>> pairs;
  long best = n1 + n2;  // delete everything, insert everything
  // Nodes of t1 are visited in preorder; mapped partners must increase in
  // preorder too, and postorder ranks must agree with every earlier pair.
  auto search = [&](auto&& self, int i, int min_j, long relabels) -> void {
    long mapped = static_cast<long>(pairs.size());
    // Lower bound: every still-possible pair gets mapped at zero cost.
    long reachable = mapped + std::min(n1 - i, n2 - min_j);
    if (relabels + n1 + n2 - 2 * reachable >= best) return;
    if (i == n1) {
      best = std::min(best, relabels + (n1 - mapped) + (n2 - mapped));
      return;
    }
    for (int j = min_j; j < n2; ++j) {
      bool ok = true;
      for (auto [pi, pj] : pairs)
        if ((a.post[static_cast<std::size_t>(pi)] < a.post[static_cast<std::size_t>(i)]) !=
            (b.post[static_cast<std::size_t>(pj)] < b.post[static_cast<std::size_t>(j)])) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pairs.emplace_back(i, j);
      self(self, i + 1, j + 1,
           relabels + (a.label[static_cast<std::size_t>(i)] != b.label[static_cast<std::size_t>(j)]));
      pairs.pop_back();
    }
    self(self, i + 1, min_j, relabels);  // i deleted
  };
  search(search, 0, 0, 0);
  return best;
}

/// Random ordered tree with 1..max_nodes nodes labelled from the first
/// `alphabet` lowercase letters, in bracket notation.
inline std::string random_bracket_tree(std::mt19937_64& rng, int max_nodes, int alphabet) {
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes));
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) kids[rng() % static_cast<unsigned>(i)].push_back(i);
  std::vector<char> label(static_cast<std::size_t>(n));
  for (auto& c : label) c = static_cast<char>('a' + rng() % static_cast<unsigned>(alphabet));
  std::string out;
  auto emit = [&](auto&& self, int v) -> void {
    out += label[static_cast<std::size_t>(v)];
    const auto& ch = kids[static_cast<std::size_t>(v)];
    if (ch.empty()) return;
    out += '(';
    for (std::size_t k = 0; k < ch.size(); ++k) {
      if (k) out += ',';
      self(self, ch[k]);
    }
    out += ')';
  };
  emit(emit, 0);
  return out;
}

}  // namespace f2s::testing
