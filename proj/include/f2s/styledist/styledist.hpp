#pragma once

// Code-style similarity: variable-name, API-call and syntax-tree distances
// combined into a single score in [0, 1].

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "f2s/corpus/corpus.hpp"
#include "f2s/styledist/lexer.hpp"
#include "f2s/styledist/syntax_tree.hpp"

namespace f2s::style {

class GrammarMissingError : public Error {
 public:
  using Error::Error;
};

/// Thrown by tree_edit_distance when the trees exceed the node budget.
class TreeTooLargeError : public Error {
 public:
  using Error::Error;
};

/// Parses source text with the grammar for `lang`. Comments are not part of
/// the tree. Throws ParseError (with line/column) or GrammarMissingError.
SyntaxTree parse(std::string_view source, Language lang);
SyntaxTree parse(const CodeSnippet& code);

/// Declared variable and parameter names, sorted and unique. Function, type
/// and imported-module names are excluded.
std::vector<std::string> extract_variables(const SyntaxTree& tree);
/// Callee names of all calls (rightmost identifier of a qualified callee),
/// sorted and unique.
std::vector<std::string> extract_apis(const SyntaxTree& tree);

/// Levenshtein distance divided by the longer length; 0 when both are empty.
double norm_edit_distance(std::string_view a, std::string_view b);

/// Document frequencies of names over a collection of code units.
/// idf(name) = ln((N + 1) / (df + 1)) + 1, so unseen names (df = 0) get the
/// largest weight and every weight is positive.
class IdfTable {
 public:
  /// Adds one document; duplicate names inside it count once.
  void observe(const std::vector<std::string>& names);
  double idf(std::string_view name) const;
  std::size_t doc_count() const { return doc_count_; }
  std::size_t df(std::string_view name) const;
  const std::map<std::string, std::size_t, std::less<>>& frequencies() const { return df_; }

 private:
  std::size_t doc_count_ = 0;
  std::map<std::string, std::size_t, std::less<>> df_;
};

/// Symmetric IDF-weighted mean of each name's minimal normalised edit distance
/// to the other set. One empty side gives 1, both empty give 0.
double dis_names(const std::vector<std::string>& names1, const std::vector<std::string>& names2,
                 const IdfTable& idf);

inline constexpr std::size_t kDefaultNodeBudget = 20000;

/// Ordered tree edit distance with unit costs; nodes match at zero cost when
/// their kinds are equal. Throws TreeTooLargeError when the combined node count
/// exceeds `node_budget`.
long tree_edit_distance(const SyntaxTree& t1, const SyntaxTree& t2,
                        std::size_t node_budget = kDefaultNodeBudget);

/// Levenshtein distance between the preorder kind sequences. Cheap stand-in
/// for the exact distance, used only past the node budget.
long approx_tree_edit_distance(const SyntaxTree& t1, const SyntaxTree& t2);

/// TED divided by the larger node count, clamped to [0, 1].
double dis_stru(const SyntaxTree& t1, const SyntaxTree& t2,
                std::size_t node_budget = kDefaultNodeBudget);

struct StyleReport {
  double dis_var = 0;
  double dis_api = 0;
  double dis_stru = 0;
  double cssim = 1;
  /// The structural term used the approximate distance.
  bool approximate = false;
};

/// Parsed snippet with its name sets, reusable across many comparisons.
struct StyleProfile {
  SyntaxTree tree;
  std::vector<std::string> variables;
  std::vector<std::string> apis;
};

StyleProfile profile(const CodeSnippet& code);

/// Builds an IDF table where each profile is one document contributing its
/// variable and API names.
IdfTable build_idf(const std::vector<StyleProfile>& docs);

struct CssimOptions {
  std::size_t node_budget = kDefaultNodeBudget;
  /// Past the budget, fall back to the approximate structural distance instead
  /// of throwing.
  bool allow_approximate = true;
};

StyleReport cssim(const StyleProfile& a, const StyleProfile& b, const IdfTable& idf,
                  const CssimOptions& options = {});
StyleReport cssim(const CodeSnippet& a, const CodeSnippet& b, const IdfTable& idf,
                  const CssimOptions& options = {});

}  // namespace f2s::style
