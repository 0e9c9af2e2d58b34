// Recursive-descent parser for Python 3.

#include "parser_base.hpp"
#include "parsers.hpp"

namespace f2s::style::detail {
namespace {

class PythonParser : public ParserBase {
 public:
  explicit PythonParser(std::vector<Token> tokens)
      : ParserBase(std::move(tokens), Language::python) {}

  SyntaxTree parse() {
    int root = node("module");
    while (!at_end()) {
      if (cur().kind == TokenKind::newline) {
        take();
        continue;
      }
      if (cur().kind == TokenKind::indent) fail("unexpected indent");
      statement_into(root);
    }
    return b_.finish(root, lang_);
  }

 private:
  bool at_newline() const { return cur().kind == TokenKind::newline; }

  // ---------------------------------------------------------------- statements

  // Appends one logical statement; a line of `a; b` contributes several.
  void statement_into(int parent) {
    const Token& t = cur();
    if (t.kind == TokenKind::keyword) {
      const std::string& k = t.text;
      if (k == "if") return add(parent, if_statement());
      if (k == "while") return add(parent, while_statement());
      if (k == "for") return add(parent, for_statement());
      if (k == "try") return add(parent, try_statement());
      if (k == "with") return add(parent, with_statement());
      if (k == "def") return add(parent, function_definition());
      if (k == "class") return add(parent, class_definition());
      if (k == "async") {
        Token a = take();
        int inner = at_kw("def") ? function_definition()
                    : at_kw("for") ? for_statement()
                    : at_kw("with") ? with_statement()
                                    : (fail("expected def, for or with after async"), -1);
        return add(parent, wrap("async_statement", inner));
      }
    }
    if (t.is_punct("@")) return add(parent, decorated());
    simple_statements(parent);
  }

  void simple_statements(int parent) {
    add(parent, small_statement());
    while (accept(";")) {
      if (at_newline() || at_end()) break;
      add(parent, small_statement());
    }
    if (at_end()) return;
    if (!at_newline()) fail("expected newline after statement");
    take();
  }

  int block() {
    expect(":", "before block");
    int n = node("block");
    if (!at_newline()) {
      simple_statements(n);
      return n;
    }
    take();
    if (cur().kind != TokenKind::indent) fail("expected an indented block");
    take();
    while (cur().kind != TokenKind::dedent && !at_end()) {
      if (at_newline()) {
        take();
        continue;
      }
      statement_into(n);
    }
    if (cur().kind == TokenKind::dedent) take();
    return n;
  }

  int small_statement() {
    const Token& t = cur();
    if (t.kind == TokenKind::keyword) {
      const std::string& k = t.text;
      if (k == "pass") return leaf("pass_statement", take());
      if (k == "break") return leaf("break_statement", take());
      if (k == "continue") return leaf("continue_statement", take());
      if (k == "return") {
        int n = node("return_statement", take());
        if (!at_newline() && !at(";") && !at_end()) add(n, expression_list(true));
        return n;
      }
      if (k == "raise") {
        int n = node("raise_statement", take());
        if (!at_newline() && !at(";") && !at_end()) {
          add(n, test());
          if (accept_kw("from")) add(n, test());
        }
        return n;
      }
      if (k == "global" || k == "nonlocal") {
        int n = node(k + "_statement", take());
        do add(n, leaf("identifier", expect_ident()));
        while (accept(","));
        return n;
      }
      if (k == "del") {
        int n = node("delete_statement", take());
        add(n, expression_list(false));
        return n;
      }
      if (k == "assert") {
        int n = node("assert_statement", take());
        add(n, test());
        if (accept(",")) add(n, test());
        return n;
      }
      if (k == "import") return import_statement();
      if (k == "from") return import_from_statement();
    }
    return expression_statement();
  }

  int dotted_name() {
    Token start = cur();
    int n = node("dotted_name", start);
    add(n, leaf("identifier", expect_ident("in module name")));
    while (accept(".")) add(n, leaf("identifier", expect_ident("in module name")));
    return n;
  }

  int import_statement() {
    int n = node("import_statement", take());
    do {
      int name = dotted_name();
      if (accept_kw("as")) {
        int a = node("aliased_import");
        add(a, name);
        add(a, leaf("identifier", expect_ident("after as")));
        name = a;
      }
      add(n, name);
    } while (accept(","));
    return n;
  }

  int import_from_statement() {
    int n = node("import_from_statement", take());
    int rel = -1;
    while (at(".") || at("...")) {
      if (rel < 0) rel = node("relative_import");
      take();
    }
    if (at_ident()) {
      if (rel >= 0) add(rel, dotted_name());
      else rel = dotted_name();
    }
    if (rel < 0) fail("expected module name");
    add(n, rel);
    expect_kw("import");
    if (at("*")) {
      add(n, leaf("wildcard_import", take()));
      return n;
    }
    bool paren = accept("(");
    do {
      if (paren && at(")")) break;
      int name = dotted_name();
      if (accept_kw("as")) {
        int a = node("aliased_import");
        add(a, name);
        add(a, leaf("identifier", expect_ident("after as")));
        name = a;
      }
      add(n, name);
    } while (accept(","));
    if (paren) expect(")");
    return n;
  }

  bool at_augassign() const {
    static const char* ops[] = {"+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=",
                                "<<=", "&=", "^=", "|=", "@="};
    for (const char* op : ops)
      if (at(op)) return true;
    return false;
  }

  int expression_statement() {
    Token start = cur();
    int first = at_kw("yield") ? yield_expression() : expression_list(true);
    if (at(":")) {
      // Annotated assignment: x: int = 0
      Token c = take();
      int n = node("assignment", c, ":");
      declare_target(first);
      add(n, first);
      add(n, wrap("type", test()));
      if (accept("=")) add(n, at_kw("yield") ? yield_expression() : expression_list(true));
      return n;
    }
    if (at_augassign()) {
      Token op = take();
      int n = node("augmented_assignment", op, op.text);
      add(n, first);
      add(n, at_kw("yield") ? yield_expression() : expression_list(true));
      return n;
    }
    if (at("=")) {
      // a = b = value: every target but the last value is assigned.
      std::vector<int> parts{first};
      std::vector<Token> ops;
      while (at("=")) {
        ops.push_back(take());
        parts.push_back(at_kw("yield") ? yield_expression() : expression_list(true));
      }
      int value = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;) {
        declare_target(parts[i]);
        int n = node("assignment", ops[i], "=");
        add(n, parts[i]);
        add(n, value);
        value = n;
      }
      return value;
    }
    int n = node("expression_statement", start);
    add(n, first);
    return n;
  }

  // Flags the plain names bound by an assignment target.
  void declare_target(int id) {
    auto& nd = b_.at(id);
    if (nd.kind == "identifier") {
      mark_declared(id);
      return;
    }
    if (nd.kind == "tuple" || nd.kind == "list" || nd.kind == "pattern_list" ||
        nd.kind == "parenthesized_expression" || nd.kind == "list_splat" ||
        nd.kind == "expression_list") {
      std::vector<int> kids = nd.children;
      for (int ch : kids) declare_target(ch);
    }
  }

  int if_statement() {
    int n = node("if_statement", take());
    add(n, named_test());
    add(n, block());
    while (at_kw("elif")) {
      int e = node("elif_clause", take());
      add(e, named_test());
      add(e, block());
      add(n, e);
    }
    if (at_kw("else")) {
      int e = node("else_clause", take());
      add(e, block());
      add(n, e);
    }
    return n;
  }

  int while_statement() {
    int n = node("while_statement", take());
    add(n, named_test());
    add(n, block());
    if (at_kw("else")) {
      int e = node("else_clause", take());
      add(e, block());
      add(n, e);
    }
    return n;
  }

  int for_statement() {
    int n = node("for_statement", take());
    int target = target_list();
    declare_target(target);
    add(n, target);
    expect_kw("in");
    add(n, expression_list(true));
    add(n, block());
    if (at_kw("else")) {
      int e = node("else_clause", take());
      add(e, block());
      add(n, e);
    }
    return n;
  }

  // for-loop / comprehension targets stop before `in`.
  int target_list() {
    Token start = cur();
    int first = star_or(bitwise_or_level());
    if (!at(",")) return first;
    int n = node("pattern_list", start);
    add(n, first);
    while (accept(",")) {
      if (at_kw("in")) break;
      add(n, star_or(bitwise_or_level()));
    }
    return n;
  }

  int star_or(int e) { return e; }
  int bitwise_or_level() {
    if (at("*")) {
      int n = node("list_splat", take());
      add(n, binary(kBitOr));
      return n;
    }
    return binary(kBitOr);
  }

  int try_statement() {
    int n = node("try_statement", take());
    add(n, block());
    while (at_kw("except")) {
      int e = node("except_clause", take());
      accept("*");
      if (!at(":")) {
        add(e, test());
        if (accept_kw("as")) {
          int id = leaf("identifier", expect_ident("after as"));
          mark_declared(id);
          add(e, id);
        } else if (accept(",")) {
          add(e, test());
        }
      }
      add(e, block());
      add(n, e);
    }
    if (at_kw("else")) {
      int e = node("else_clause", take());
      add(e, block());
      add(n, e);
    }
    if (at_kw("finally")) {
      int e = node("finally_clause", take());
      add(e, block());
      add(n, e);
    }
    return n;
  }

  int with_statement() {
    int n = node("with_statement", take());
    bool paren = false;
    if (at("(")) {
      // Parenthesised with-items (3.10) vs a parenthesised expression.
      Mark m = mark();
      take();
      try {
        int items = with_items();
        accept(",");
        expect(")");
        if (at(":")) {
          add(n, items);
          paren = true;
        }
      } catch (const ParseError&) {
      }
      if (!paren) reset(m);
    }
    if (!paren) add(n, with_items());
    add(n, block());
    return n;
  }

  int with_items() {
    int clause = node("with_clause");
    do {
      if (at(")")) break;
      int item = node("with_item");
      add(item, test());
      if (accept_kw("as")) {
        int t = binary(kBitOr);
        declare_target(t);
        add(item, t);
      }
      add(clause, item);
    } while (accept(","));
    return clause;
  }

  int decorated() {
    int n = node("decorated_definition");
    while (at("@")) {
      int d = node("decorator", take());
      add(d, named_test());
      if (!at_newline()) fail("expected newline after decorator");
      take();
      add(n, d);
    }
    if (at_kw("def")) add(n, function_definition());
    else if (at_kw("class")) add(n, class_definition());
    else if (at_kw("async")) {
      take();
      add(n, wrap("async_statement", function_definition()));
    } else
      fail("expected def or class after decorator");
    return n;
  }

  int function_definition() {
    int n = node("function_definition", take());
    add(n, leaf("identifier", expect_ident("for function name")));
    add(n, parameters("(", ")"));
    if (accept("->")) add(n, wrap("type", test()));
    add(n, block());
    return n;
  }

  int parameters(std::string_view open, std::string_view close) {
    int n = node(open == "(" ? "parameters" : "lambda_parameters");
    if (!open.empty()) expect(open);
    auto done = [&] { return close.empty() ? at(":") : at(close); };
    while (!done()) {
      if (at("/")) {
        add(n, leaf("positional_separator", take()));
      } else if (at("*") && (peek().is_punct(",") || peek().is_punct(close.empty() ? ":" : close))) {
        add(n, leaf("keyword_separator", take()));
      } else {
        std::string kind = "parameter";
        Token start = cur();
        if (accept("*")) kind = "list_splat_pattern";
        else if (accept("**")) kind = "dictionary_splat_pattern";
        int p = node(kind, start);
        int id = leaf("identifier", expect_ident("for parameter name"));
        mark_declared(id);
        add(p, id);
        if (!close.empty() && accept(":")) add(p, wrap("type", test()));
        if (accept("=")) add(p, test());
        add(n, p);
      }
      if (!accept(",")) break;
    }
    if (!close.empty()) expect(close, "to close parameters");
    return n;
  }

  int class_definition() {
    int n = node("class_definition", take());
    add(n, leaf("identifier", expect_ident("for class name")));
    if (at("(")) add(n, arguments());
    add(n, block());
    return n;
  }

  // ---------------------------------------------------------------- expressions

  // Comma-separated expressions; a trailing comma or several items make a tuple.
  int expression_list(bool allow_star) {
    Token start = cur();
    int first = star_test(allow_star);
    if (!at(",")) return first;
    int n = node("expression_list", start);
    add(n, first);
    while (accept(",")) {
      if (at_newline() || at_end() || at("=") || at(")") || at(":") || at(";") ||
          at_augassign())
        break;
      add(n, star_test(allow_star));
    }
    return n;
  }

  int star_test(bool allow_star) {
    if (allow_star && at("*")) {
      int n = node("list_splat", take());
      add(n, binary(kBitOr));
      return n;
    }
    return named_test();
  }

  int named_test() {
    if (at_ident() && peek().is_punct(":=")) {
      int id = leaf("identifier", take());
      mark_declared(id);
      int n = node("named_expression", take());
      add(n, id);
      add(n, test());
      return n;
    }
    return test();
  }

  int yield_expression() {
    int n = node("yield", take());
    if (accept_kw("from")) {
      add(n, test());
    } else if (!at_newline() && !at(")") && !at(";") && !at_end() && !at("=")) {
      add(n, expression_list(true));
    }
    return n;
  }

  int test() {
    if (at_kw("lambda")) return lambda(true);
    int e = or_test();
    if (at_kw("if")) {
      int n = node("conditional_expression", take());
      add(n, e);
      add(n, or_test());
      expect_kw("else");
      add(n, test());
      return n;
    }
    return e;
  }

  int test_no_cond() {
    if (at_kw("lambda")) return lambda(false);
    return or_test();
  }

  int lambda(bool allow_cond) {
    int n = node("lambda", take());
    int params = parameters("", "");
    add(n, params);
    expect(":", "in lambda");
    add(n, allow_cond ? test() : test_no_cond());
    return n;
  }

  int or_test() {
    int left = and_test();
    while (at_kw("or")) {
      int n = node("boolean_operator", take(), "or");
      add(n, left);
      add(n, and_test());
      left = n;
    }
    return left;
  }

  int and_test() {
    int left = not_test();
    while (at_kw("and")) {
      int n = node("boolean_operator", take(), "and");
      add(n, left);
      add(n, not_test());
      left = n;
    }
    return left;
  }

  int not_test() {
    if (at_kw("not")) {
      int n = node("not_operator", take());
      add(n, not_test());
      return n;
    }
    return comparison();
  }

  bool at_comp_op() const {
    if (at("<") || at(">") || at("==") || at(">=") || at("<=") || at("!=") || at("<>"))
      return true;
    if (at_kw("in") || at_kw("is")) return true;
    return at_kw("not") && peek().is_keyword("in");
  }

  int comparison() {
    Token start = cur();
    int first = binary(kBitOr);
    if (!at_comp_op()) return first;
    int n = node("comparison_operator", start);
    add(n, first);
    std::string ops;
    while (at_comp_op()) {
      Token op = take();
      std::string text = op.text;
      if (text == "not") {
        take();
        text = "not in";
      } else if (text == "is" && at_kw("not")) {
        take();
        text = "is not";
      }
      ops += ops.empty() ? text : " " + text;
      add(n, binary(kBitOr));
    }
    at_node(n).text = ops;
    return n;
  }

  enum Level { kBitOr = 1, kBitXor, kBitAnd, kShift, kArith, kTerm };

  static int level_of(const Token& t) {
    if (t.kind != TokenKind::punct) return 0;
    const std::string& s = t.text;
    if (s == "|") return kBitOr;
    if (s == "^") return kBitXor;
    if (s == "&") return kBitAnd;
    if (s == "<<" || s == ">>") return kShift;
    if (s == "+" || s == "-") return kArith;
    if (s == "*" || s == "/" || s == "//" || s == "%" || s == "@") return kTerm;
    return 0;
  }

  int binary(int min_level) {
    int left = factor();
    for (;;) {
      int lv = level_of(cur());
      if (lv == 0 || lv < min_level) break;
      Token op = take();
      int n = node("binary_operator", op, op.text);
      add(n, left);
      add(n, binary(lv + 1));
      left = n;
    }
    return left;
  }

  int factor() {
    if (at("+") || at("-") || at("~")) {
      Token op = take();
      int n = node("unary_operator", op, op.text);
      add(n, factor());
      return n;
    }
    return power();
  }

  int power() {
    int base;
    if (at_kw("await")) {
      base = node("await", take());
      add(base, postfix(atom()));
    } else {
      base = postfix(atom());
    }
    if (at("**")) {
      Token op = take();
      int n = node("binary_operator", op, "**");
      add(n, base);
      add(n, factor());
      return n;
    }
    return base;
  }

  int postfix(int e) {
    for (;;) {
      if (at(".")) {
        Token dot = take();
        int n = node("attribute", dot);
        add(n, e);
        add(n, leaf("identifier", expect_ident("after '.'")));
        e = n;
        continue;
      }
      if (at("(")) {
        int n = b_.add("call", rightmost_name(e), b_.at(e).line, b_.at(e).column);
        add(n, e);
        add(n, arguments());
        e = n;
        continue;
      }
      if (at("[")) {
        int n = node("subscript", take());
        add(n, e);
        do {
          if (at("]")) break;
          add(n, subscript_item());
        } while (accept(","));
        expect("]", "to close subscript");
        e = n;
        continue;
      }
      break;
    }
    return e;
  }

  int subscript_item() {
    Token start = cur();
    int lower = at(":") ? -1 : named_test();
    if (!at(":")) return lower;
    int n = node("slice", start);
    add(n, lower);
    while (accept(":")) {
      if (!at(":") && !at("]") && !at(",")) add(n, test());
    }
    return n;
  }

  int arguments() {
    int n = node("argument_list", expect("("));
    while (!at(")")) {
      if (at_end()) fail("expected ')' to close argument list");
      if (at("*")) {
        int s = node("list_splat", take());
        add(s, test());
        add(n, s);
      } else if (at("**")) {
        int s = node("dictionary_splat", take());
        add(s, test());
        add(n, s);
      } else if (at_ident() && peek().is_punct("=")) {
        int kw = node("keyword_argument");
        add(kw, leaf("identifier", take()));
        take();
        add(kw, test());
        add(n, kw);
      } else {
        Token start = cur();
        int e = named_test();
        if (at_kw("for") || at_kw("async")) {
          int g = node("generator_expression", start);
          add(g, e);
          comprehension_clauses(g);
          e = g;
        }
        add(n, e);
      }
      if (!accept(",")) break;
    }
    expect(")", "to close argument list");
    return n;
  }

  void comprehension_clauses(int parent) {
    while (at_kw("for") || at_kw("async") || at_kw("if")) {
      if (at_kw("if")) {
        int c = node("if_clause", take());
        add(c, test_no_cond());
        add(parent, c);
        continue;
      }
      accept_kw("async");
      int c = node("for_in_clause", take());
      int target = target_list();
      declare_target(target);
      add(c, target);
      expect_kw("in");
      add(c, or_test());
      add(parent, c);
    }
  }

  int atom() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::identifier:
        return leaf("identifier", take());
      case TokenKind::number: {
        bool is_float = t.text.find_first_of(".eEjJ") != std::string::npos &&
                        t.text.rfind("0x", 0) != 0 && t.text.rfind("0X", 0) != 0;
        return leaf(is_float ? "float" : "integer", take());
      }
      case TokenKind::string: {
        Token first = take();
        if (cur().kind != TokenKind::string) return leaf("string", first);
        int n = node("concatenated_string", first);
        add(n, leaf("string", first));
        while (cur().kind == TokenKind::string) add(n, leaf("string", take()));
        return n;
      }
      case TokenKind::keyword:
        if (t.text == "None") return leaf("none", take());
        if (t.text == "True") return leaf("true", take());
        if (t.text == "False") return leaf("false", take());
        fail("unexpected keyword '" + t.text + "' in expression");
      case TokenKind::punct:
        if (t.text == "(") return paren_atom();
        if (t.text == "[") return list_atom();
        if (t.text == "{") return brace_atom();
        if (t.text == "...") return leaf("ellipsis", take());
        break;
      default:
        break;
    }
    fail("expected expression");
  }

  int paren_atom() {
    Token l = take();
    if (accept(")")) return node("tuple", l);
    if (at_kw("yield")) {
      int y = yield_expression();
      expect(")");
      return wrap("parenthesized_expression", y);
    }
    int first = star_test(true);
    if (at_kw("for") || at_kw("async")) {
      int g = node("generator_expression", l);
      add(g, first);
      comprehension_clauses(g);
      expect(")", "to close generator");
      return g;
    }
    if (!at(",")) {
      expect(")", "to close parenthesis");
      int n = node("parenthesized_expression", l);
      add(n, first);
      return n;
    }
    int n = node("tuple", l);
    add(n, first);
    while (accept(",")) {
      if (at(")")) break;
      add(n, star_test(true));
    }
    expect(")", "to close tuple");
    return n;
  }

  int list_atom() {
    Token l = take();
    int n = node("list", l);
    if (accept("]")) return n;
    int first = star_test(true);
    if (at_kw("for") || at_kw("async")) {
      at_node(n).kind = "list_comprehension";
      add(n, first);
      comprehension_clauses(n);
      expect("]", "to close list comprehension");
      return n;
    }
    add(n, first);
    while (accept(",")) {
      if (at("]")) break;
      add(n, star_test(true));
    }
    expect("]", "to close list");
    return n;
  }

  int brace_atom() {
    Token l = take();
    int n = node("dictionary", l);
    if (accept("}")) return n;
    auto item = [&]() -> int {
      if (at("**")) {
        int s = node("dictionary_splat", take());
        add(s, binary(kBitOr));
        return s;
      }
      int k = star_test(true);
      if (accept(":")) {
        int p = node("pair");
        add(p, k);
        add(p, test());
        return p;
      }
      at_node(n).kind = "set";
      return k;
    };
    int first = item();
    if (at_kw("for") || at_kw("async")) {
      at_node(n).kind = b_.at(first).kind == "pair" ? "dictionary_comprehension"
                                                    : "set_comprehension";
      add(n, first);
      comprehension_clauses(n);
      expect("}", "to close comprehension");
      return n;
    }
    add(n, first);
    while (accept(",")) {
      if (at("}")) break;
      add(n, item());
    }
    expect("}", "to close dictionary");
    return n;
  }
};

}  // namespace

SyntaxTree parse_python(std::vector<Token> tokens) {
  return PythonParser(std::move(tokens)).parse();
}

}  // namespace f2s::style::detail
