#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "f2s/styledist/styledist.hpp"

namespace f2s::style {

double norm_edit_distance(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return static_cast<double>(row[b.size()]) / static_cast<double>(a.size());
}

void IdfTable::observe(const std::vector<std::string>& names) {
  ++doc_count_;
  std::vector<std::string_view> uniq(names.begin(), names.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  for (auto name : uniq) {
    auto it = df_.find(name);
    if (it == df_.end()) df_.emplace(std::string(name), 1);
    else ++it->second;
  }
}

std::size_t IdfTable::df(std::string_view name) const {
  auto it = df_.find(name);
  return it == df_.end() ? 0 : it->second;
}

double IdfTable::idf(std::string_view name) const {
  double n = static_cast<double>(doc_count_);
  double d = static_cast<double>(df(name));
  return std::log((n + 1.0) / (d + 1.0)) + 1.0;
}

namespace {

// One direction: weighted mean over `from` of the closest match in `to`.
double directed(const std::vector<std::string>& from, const std::vector<std::string>& to,
                const IdfTable& idf) {
  double weighted = 0, total = 0;
  for (const auto& v : from) {
    double best = 1.0;
    for (const auto& w : to) {
      best = std::min(best, norm_edit_distance(v, w));
      if (best == 0.0) break;
    }
    double lambda = idf.idf(v);
    weighted += lambda * best;
    total += lambda;
  }
  return weighted / total;
}

std::vector<std::string> as_set(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double dis_names(const std::vector<std::string>& names1, const std::vector<std::string>& names2,
                 const IdfTable& idf) {
  auto a = as_set(names1);
  auto b = as_set(names2);
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return 1.0;
  return (directed(a, b, idf) + directed(b, a, idf)) / 2.0;
}

namespace {

// Postorder view of a tree for Zhang-Shasha.
struct Postorder {
  std::vector<int> label;  // interned kind
  std::vector<int> lmd;    // leftmost leaf descendant (postorder index)
  std::vector<int> keyroots;
};

Postorder postorder(const SyntaxTree& t, std::unordered_map<std::string, int>& intern) {
  Postorder p;
  const std::size_t n = t.node_count();
  p.label.reserve(n);
  p.lmd.reserve(n);
  std::vector<int> post_of(n, -1);
  // Iterative postorder: (node, next child index).
  std::vector<std::pair<int, std::size_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& node = t.node(id);
    if (next < node.children.size()) {
      int child = node.children[next++];
      stack.emplace_back(child, 0);
      continue;
    }
    int index = static_cast<int>(p.label.size());
    post_of[static_cast<std::size_t>(id)] = index;
    auto [it, inserted] = intern.emplace(node.kind, static_cast<int>(intern.size()));
    p.label.push_back(it->second);
    p.lmd.push_back(node.children.empty()
                        ? index
                        : p.lmd[static_cast<std::size_t>(post_of[node.children.front()])]);
    stack.pop_back();
  }
  std::vector<bool> seen(n, false);
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    int l = p.lmd[static_cast<std::size_t>(i)];
    if (!seen[static_cast<std::size_t>(l)]) {
      seen[static_cast<std::size_t>(l)] = true;
      p.keyroots.push_back(i);
    }
  }
  std::sort(p.keyroots.begin(), p.keyroots.end());
  return p;
}

template <class Dist>
long zhang_shasha(const Postorder& a, const Postorder& b) {
  const std::size_t n1 = a.label.size(), n2 = b.label.size();
  std::vector<Dist> td(n1 * n2);
  std::vector<Dist> fd((n1 + 1) * (n2 + 1));
  for (int i : a.keyroots) {
    for (int j : b.keyroots) {
      const int li = a.lmd[static_cast<std::size_t>(i)];
      const int lj = b.lmd[static_cast<std::size_t>(j)];
      const std::size_t rows = static_cast<std::size_t>(i - li + 2);
      const std::size_t cols = static_cast<std::size_t>(j - lj + 2);
      auto F = [&](std::size_t x, std::size_t y) -> Dist& { return fd[x * cols + y]; };
      F(0, 0) = 0;
      for (std::size_t x = 1; x < rows; ++x) F(x, 0) = static_cast<Dist>(F(x - 1, 0) + 1);
      for (std::size_t y = 1; y < cols; ++y) F(0, y) = static_cast<Dist>(F(0, y - 1) + 1);
      for (int x = li; x <= i; ++x) {
        const std::size_t xi = static_cast<std::size_t>(x - li + 1);
        const int lx = a.lmd[static_cast<std::size_t>(x)];
        for (int y = lj; y <= j; ++y) {
          const std::size_t yj = static_cast<std::size_t>(y - lj + 1);
          const int ly = b.lmd[static_cast<std::size_t>(y)];
          Dist del = static_cast<Dist>(F(xi - 1, yj) + 1);
          Dist ins = static_cast<Dist>(F(xi, yj - 1) + 1);
          Dist best = std::min(del, ins);
          Dist& tdxy = td[static_cast<std::size_t>(x) * n2 + static_cast<std::size_t>(y)];
          if (lx == li && ly == lj) {
            Dist rel = static_cast<Dist>(
                F(xi - 1, yj - 1) + (a.label[static_cast<std::size_t>(x)] ==
                                             b.label[static_cast<std::size_t>(y)]
                                         ? 0
                                         : 1));
            best = std::min(best, rel);
            F(xi, yj) = best;
            tdxy = best;
          } else {
            Dist sub = static_cast<Dist>(
                F(static_cast<std::size_t>(lx - li), static_cast<std::size_t>(ly - lj)) + tdxy);
            F(xi, yj) = std::min(best, sub);
          }
        }
      }
    }
  }
  return static_cast<long>(td[(n1 - 1) * n2 + (n2 - 1)]);
}

}  // namespace

long tree_edit_distance(const SyntaxTree& t1, const SyntaxTree& t2, std::size_t node_budget) {
  if (t1.node_count() == 0 || t2.node_count() == 0)
    throw ArgumentError("tree_edit_distance needs non-empty trees");
  const std::size_t total = t1.node_count() + t2.node_count();
  if (total > node_budget)
    throw TreeTooLargeError("trees have " + std::to_string(total) +
                            " nodes combined, above the budget of " +
                            std::to_string(node_budget));
  std::unordered_map<std::string, int> intern;
  Postorder a = postorder(t1, intern);
  Postorder b = postorder(t2, intern);
  // The distance never exceeds n1 + n2, so 16-bit cells suffice for most inputs.
  if (total < std::numeric_limits<std::uint16_t>::max()) return zhang_shasha<std::uint16_t>(a, b);
  return zhang_shasha<std::uint32_t>(a, b);
}

long approx_tree_edit_distance(const SyntaxTree& t1, const SyntaxTree& t2) {
  std::unordered_map<std::string_view, int> intern;
  auto seq = [&](const SyntaxTree& t) {
    std::vector<int> s;
    s.reserve(t.node_count());
    for (const auto& n : t.nodes())
      s.push_back(intern.emplace(n.kind, static_cast<int>(intern.size())).first->second);
    return s;
  };
  std::vector<int> a = seq(t1), b = seq(t2);
  std::vector<long> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<long>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    long diag = row[0];
    row[0] = static_cast<long>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      long up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

double normalise_structure(long ted, const SyntaxTree& t1, const SyntaxTree& t2) {
  double denom = static_cast<double>(std::max(t1.node_count(), t2.node_count()));
  return std::clamp(static_cast<double>(ted) / denom, 0.0, 1.0);
}

}  // namespace

double dis_stru(const SyntaxTree& t1, const SyntaxTree& t2, std::size_t node_budget) {
  return normalise_structure(tree_edit_distance(t1, t2, node_budget), t1, t2);
}

StyleProfile profile(const CodeSnippet& code) {
  StyleProfile p;
  p.tree = parse(code);
  p.variables = extract_variables(p.tree);
  p.apis = extract_apis(p.tree);
  return p;
}

IdfTable build_idf(const std::vector<StyleProfile>& docs) {
  IdfTable t;
  for (const auto& d : docs) {
    std::vector<std::string> names = d.variables;
    names.insert(names.end(), d.apis.begin(), d.apis.end());
    t.observe(names);
  }
  return t;
}

StyleReport cssim(const StyleProfile& a, const StyleProfile& b, const IdfTable& idf,
                  const CssimOptions& options) {
  StyleReport r;
  r.dis_var = dis_names(a.variables, b.variables, idf);
  r.dis_api = dis_names(a.apis, b.apis, idf);
  long ted;
  try {
    ted = tree_edit_distance(a.tree, b.tree, options.node_budget);
  } catch (const TreeTooLargeError&) {
    if (!options.allow_approximate) throw;
    ted = approx_tree_edit_distance(a.tree, b.tree);
    r.approximate = true;
  }
  r.dis_stru = normalise_structure(ted, a.tree, b.tree);
  r.cssim = std::clamp(1.0 - (r.dis_var + r.dis_api + r.dis_stru) / 3.0, 0.0, 1.0);
  if (r.dis_var == 0 && r.dis_api == 0 && r.dis_stru == 0) r.cssim = 1.0;
  return r;
}

StyleReport cssim(const CodeSnippet& a, const CodeSnippet& b, const IdfTable& idf,
                  const CssimOptions& options) {
  return cssim(profile(a), profile(b), idf, options);
}

}  // namespace f2s::style
