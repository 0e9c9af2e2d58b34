// Recursive-descent parser for Go.

#include "parser_base.hpp"
#include "parsers.hpp"

namespace f2s::style::detail {
namespace {

class GoParser : public ParserBase {
 public:
  explicit GoParser(std::vector<Token> tokens) : ParserBase(std::move(tokens), Language::go) {}

  SyntaxTree parse() {
    int root = node("source_file");
    skip_semis();
    if (at_kw("package")) {
      int p = node("package_clause", take());
      add(p, leaf("package_identifier", expect_ident("after package")));
      add(root, p);
      end_statement();
    }
    while (at_kw("import")) {
      add(root, import_declaration());
      end_statement();
    }
    while (!at_end()) {
      add(root, top_level());
      if (!at_end()) end_statement();
    }
    return b_.finish(root, lang_);
  }

 private:
  void skip_semis() {
    while (at(";")) take();
  }

  // A statement ends at ';' (written or inserted) or before a closing brace.
  void end_statement() {
    if (at(";")) {
      skip_semis();
      return;
    }
    if (at("}") || at(")") || at_end()) return;
    fail("expected ';' or newline");
  }

  int import_declaration() {
    int n = node("import_declaration", take());
    auto spec = [this] {
      int s = node("import_spec");
      if (at_ident() || at(".")) add(s, leaf("package_identifier", take()));
      if (cur().kind != TokenKind::string) fail("expected import path");
      add(s, leaf("interpreted_string_literal", take()));
      return s;
    };
    if (accept("(")) {
      int list = node("import_spec_list");
      skip_semis();
      while (!at(")")) {
        add(list, spec());
        end_statement();
      }
      expect(")");
      add(n, list);
    } else {
      add(n, spec());
    }
    return n;
  }

  int top_level() {
    if (at_kw("func")) return function_declaration();
    if (at_kw("var") || at_kw("const") || at_kw("type")) return declaration();
    if (at_kw("import")) return import_declaration();
    fail("expected declaration");
  }

  int function_declaration() {
    Token f = take();
    int n = node("function_declaration", f);
    if (at("(")) {
      at_node(n).kind = "method_declaration";
      add(n, parameters(true));
    }
    add(n, leaf(at_node(n).kind == "method_declaration" ? "field_identifier" : "identifier",
                expect_ident("for function name")));
    if (at("[")) add(n, type_parameters());
    add(n, parameters(true));
    if (int r = result(); r >= 0) add(n, r);
    if (at("{")) add(n, block());
    return n;
  }

  int type_parameters() {
    int n = node("type_parameter_list", expect("["));
    while (!at("]")) {
      int p = node("type_parameter_declaration");
      do add(p, leaf("identifier", expect_ident("in type parameters")));
      while (accept(","));
      add(p, constraint());
      add(n, p);
      if (!accept(",")) break;
    }
    expect("]");
    return n;
  }

  int constraint() {
    Token start = cur();
    int first = constraint_term();
    if (!at("|")) return first;
    int n = node("union_type", start);
    add(n, first);
    while (accept("|")) add(n, constraint_term());
    return n;
  }
  int constraint_term() {
    if (at("~")) {
      int n = node("negated_type", take());
      add(n, type());
      return n;
    }
    return type();
  }

  // Parameter list with Go's grouped-name ambiguity: (a, b int) vs (int, string).
  int parameters(bool declare) {
    int n = node("parameter_list", expect("("));
    struct Entry {
      int name = -1;
      int type = -1;
      bool variadic = false;
      Token at;
    };
    std::vector<Entry> entries;
    bool any_named = false;
    while (!at(")")) {
      Entry e;
      e.at = cur();
      if (at_ident() && !peek().is_punct(",") && !peek().is_punct(")") && !peek().is_punct(".")) {
        e.name = leaf("identifier", take());
        if (accept("...")) e.variadic = true;
        e.type = type();
        any_named = true;
      } else {
        if (accept("...")) e.variadic = true;
        e.type = type();
      }
      entries.push_back(e);
      if (!accept(",")) break;
      skip_semis();
    }
    expect(")", "to close parameter list");
    // When some entries are named, bare identifiers are names sharing the
    // next entry's type.
    for (auto& e : entries) {
      if (any_named && e.name < 0) {
        const auto& t = b_.at(e.type);
        if (t.kind == "type_identifier") {
          e.name = e.type;
          at_node(e.name).kind = "identifier";
          e.type = -1;
        }
      }
      int p = node(e.variadic ? "variadic_parameter_declaration" : "parameter_declaration", e.at);
      if (e.name >= 0) {
        if (declare) mark_declared(e.name);
        add(p, e.name);
      }
      add(p, e.type);
      add(n, p);
    }
    return n;
  }

  int result() {
    if (at("(")) return parameters(true);
    if (starts_type()) return type();
    return -1;
  }

  bool starts_type() const {
    return at_ident() || at("*") || at("[") || at("(") || at_kw("map") || at_kw("chan") ||
           at_kw("func") || at_kw("struct") || at_kw("interface") || at("<-");
  }

  // ---------------------------------------------------------------- types

  int type() {
    const Token& t = cur();
    if (t.kind == TokenKind::identifier) {
      Token start = t;
      int id = leaf("type_identifier", take());
      if (at(".") && peek().kind == TokenKind::identifier) {
        take();
        int q = node("qualified_type", start);
        at_node(id).kind = "package_identifier";
        add(q, id);
        add(q, leaf("type_identifier", take()));
        id = q;
      }
      if (at("[") && !peek().is_punct("]")) {
        // Generic instantiation T[int]
        Mark m = mark();
        try {
          int g = node("generic_type", start);
          add(g, id);
          int args = node("type_arguments", take());
          do add(args, type());
          while (accept(","));
          expect("]");
          add(g, args);
          return g;
        } catch (const ParseError&) {
          reset(m);
        }
      }
      return id;
    }
    if (at("*")) {
      int n = node("pointer_type", take());
      add(n, type());
      return n;
    }
    if (at("(")) {
      take();
      int inner = type();
      expect(")");
      return wrap("parenthesized_type", inner);
    }
    if (at("[")) {
      Token l = take();
      if (accept("]")) {
        int n = node("slice_type", l);
        add(n, type());
        return n;
      }
      int n = node("array_type", l);
      if (at("...")) add(n, leaf("ellipsis", take()));
      else add(n, expression());
      expect("]");
      add(n, type());
      return n;
    }
    if (at_kw("map")) {
      int n = node("map_type", take());
      expect("[");
      add(n, type());
      expect("]");
      add(n, type());
      return n;
    }
    if (at_kw("chan") || at("<-")) {
      Token s = take();
      int n = node("channel_type", s);
      if (s.text == "<-") expect_kw("chan");
      else accept("<-");
      add(n, type());
      return n;
    }
    if (at_kw("func")) {
      int n = node("function_type", take());
      add(n, parameters(false));
      if (int r = result_in_type(); r >= 0) add(n, r);
      return n;
    }
    if (at_kw("struct")) return struct_type();
    if (at_kw("interface")) return interface_type();
    fail("expected type");
  }

  int result_in_type() {
    if (at("(")) return parameters(false);
    if (at_ident() || at("*") || at("[") || at_kw("map") || at_kw("chan") || at_kw("func") ||
        at_kw("struct") || at_kw("interface"))
      return type();
    return -1;
  }

  int struct_type() {
    int n = node("struct_type", take());
    int list = node("field_declaration_list", expect("{"));
    skip_semis();
    while (!at("}")) {
      int f = node("field_declaration");
      if (at("*")) {
        add(f, type());  // embedded pointer
      } else if (at_ident() && (peek().is_punct(";") || peek().is_punct("}") ||
                                peek().is_punct(".") || peek().kind == TokenKind::string)) {
        add(f, type());  // embedded type
      } else {
        do {
          int id = leaf("field_identifier", expect_ident("for field name"));
          mark_declared(id);
          add(f, id);
        } while (accept(","));
        add(f, type());
      }
      if (cur().kind == TokenKind::string) add(f, leaf("raw_string_literal", take()));
      add(list, f);
      end_statement();
    }
    expect("}", "to close struct");
    add(n, list);
    return n;
  }

  int interface_type() {
    int n = node("interface_type", take());
    expect("{");
    skip_semis();
    while (!at("}")) {
      if (at_ident() && peek().is_punct("(")) {
        int m = node("method_spec");
        add(m, leaf("field_identifier", take()));
        add(m, parameters(false));
        if (int r = result_in_type(); r >= 0) add(m, r);
        add(n, m);
      } else {
        add(n, constraint());
      }
      end_statement();
    }
    expect("}", "to close interface");
    return n;
  }

  // ---------------------------------------------------------------- declarations

  int declaration() {
    Token kw = take();
    std::string kind = kw.text + "_declaration";
    int n = node(kind, kw);
    auto one = [&] { return kw.text == "type" ? type_spec() : value_spec(kw.text); };
    if (accept("(")) {
      skip_semis();
      while (!at(")")) {
        add(n, one());
        end_statement();
      }
      expect(")");
    } else {
      add(n, one());
    }
    return n;
  }

  int type_spec() {
    int n = node("type_spec");
    add(n, leaf("type_identifier", expect_ident("for type name")));
    if (at("[") && peek().kind == TokenKind::identifier && !peek(2).is_punct("]")) {
      add(n, type_parameters());
    }
    if (accept("=")) at_node(n).kind = "type_alias";
    add(n, type());
    return n;
  }

  int value_spec(const std::string& kw) {
    int n = node(kw + "_spec");
    do {
      int id = leaf("identifier", expect_ident("in " + kw + " declaration"));
      mark_declared(id);
      add(n, id);
    } while (accept(","));
    if (!at("=") && !at(";") && !at(")") && !at("}")) add(n, type());
    if (accept("=")) add(n, expression_list());
    return n;
  }

  // ---------------------------------------------------------------- statements

  int block() {
    int n = node("block", expect("{", "to open block"));
    int saved = no_lit_;
    no_lit_ = 0;
    skip_semis();
    while (!at("}")) {
      if (at_end()) fail("expected '}' to close block");
      add(n, statement());
      end_statement();
    }
    take();
    no_lit_ = saved;
    return n;
  }

  int statement() {
    const Token& t = cur();
    if (t.kind == TokenKind::keyword) {
      const std::string& k = t.text;
      if (k == "var" || k == "const" || k == "type") return declaration();
      if (k == "if") return if_statement();
      if (k == "for") return for_statement();
      if (k == "switch") return switch_statement();
      if (k == "select") return select_statement();
      if (k == "return") {
        int n = node("return_statement", take());
        if (!at(";") && !at("}")) add(n, expression_list());
        return n;
      }
      if (k == "break" || k == "continue" || k == "goto") {
        int n = node(k + "_statement", take());
        if (at_ident()) add(n, leaf("label_name", take()));
        return n;
      }
      if (k == "fallthrough") return leaf("fallthrough_statement", take());
      if (k == "defer" || k == "go") {
        int n = node(k + "_statement", take());
        add(n, expression());
        return n;
      }
    }
    if (t.is_punct("{")) return block();
    if (t.is_punct(";")) return node("empty_statement");
    if (t.kind == TokenKind::identifier && peek().is_punct(":") ) {
      int n = node("labeled_statement", t);
      add(n, leaf("label_name", take()));
      take();
      skip_semis();
      if (!at("}")) add(n, statement());
      return n;
    }
    return simple_statement();
  }

  int simple_statement(bool allow_range = false) {
    Token start = cur();
    int lhs = expression_list();
    if (at(":=")) {
      Token op = take();
      int n = node("short_var_declaration", op);
      for (int id : b_.at(lhs).children)
        if (b_.at(id).kind == "identifier") mark_declared(id);
      add(n, lhs);
      if (allow_range && at_kw("range")) {
        int r = node("range_clause", take());
        add(r, lhs);
        add(r, expression());
        at_node(n).kind = "range_clause";
        return r;
      }
      add(n, expression_list());
      return n;
    }
    if (cur().kind == TokenKind::punct &&
        (at("=") || at("+=") || at("-=") || at("*=") || at("/=") || at("%=") || at("&=") ||
         at("|=") || at("^=") || at("<<=") || at(">>=") || at("&^="))) {
      Token op = take();
      if (allow_range && op.text == "=" && at_kw("range")) {
        int r = node("range_clause", take());
        add(r, lhs);
        add(r, expression());
        return r;
      }
      int n = node("assignment_statement", op, op.text);
      add(n, lhs);
      add(n, expression_list());
      return n;
    }
    int single = b_.at(lhs).children.size() == 1 ? b_.at(lhs).children[0] : lhs;
    if (at("++") || at("--")) {
      Token op = take();
      int n = node(op.text == "++" ? "inc_statement" : "dec_statement", op);
      add(n, single);
      return n;
    }
    if (at("<-")) {
      int n = node("send_statement", take());
      add(n, single);
      add(n, expression());
      return n;
    }
    int n = node("expression_statement", start);
    add(n, single);
    return n;
  }

  int if_statement() {
    int n = node("if_statement", take());
    ++no_lit_;
    int s = simple_statement();
    if (accept(";")) {
      add(n, s);
      s = expression();
    } else if (b_.at(s).kind == "expression_statement") {
      s = b_.at(s).children[0];
    }
    add(n, s);
    --no_lit_;
    add(n, block());
    if (accept_kw("else")) {
      add(n, at_kw("if") ? if_statement() : block());
    }
    return n;
  }

  int for_statement() {
    int n = node("for_statement", take());
    if (at("{")) {
      add(n, block());
      return n;
    }
    ++no_lit_;
    if (at_kw("range")) {
      int r = node("range_clause", take());
      add(r, expression());
      add(n, r);
    } else {
      int first = -1;
      if (!at(";")) first = simple_statement(true);
      if (first >= 0 && b_.at(first).kind == "range_clause") {
        add(n, first);
      } else if (at(";")) {
        // Three-clause form.
        int clause = node("for_clause", take());
        add(clause, first);
        if (!at(";")) add(clause, expression());
        expect(";", "in for clause");
        if (!at("{")) add(clause, simple_statement());
        add(n, clause);
      } else {
        if (first >= 0 && b_.at(first).kind == "expression_statement")
          first = b_.at(first).children[0];
        add(n, first);
      }
    }
    --no_lit_;
    add(n, block());
    return n;
  }

  int switch_statement() {
    int n = node("expression_switch_statement", take());
    ++no_lit_;
    if (!at("{")) {
      int s = at(";") ? -1 : simple_statement();
      if (accept(";")) {
        add(n, s);
        if (!at("{")) s = simple_statement();
        else s = -1;
      }
      if (s >= 0) {
        auto& sn = b_.at(s);
        if (sn.kind == "expression_statement") s = sn.children[0];
        if (is_type_switch(s)) at_node(n).kind = "type_switch_statement";
        add(n, s);
      }
    }
    --no_lit_;
    expect("{", "to open switch body");
    skip_semis();
    bool type_switch = at_node(n).kind == "type_switch_statement";
    while (!at("}")) {
      int c;
      if (at_kw("case")) {
        c = node(type_switch ? "type_case" : "expression_case", take());
        if (type_switch) {
          do add(c, type());
          while (accept(","));
        } else {
          add(c, expression_list());
        }
      } else {
        c = node("default_case", expect_kw("default"));
      }
      expect(":", "after case");
      skip_semis();
      while (!at_kw("case") && !at_kw("default") && !at("}")) {
        if (at_end()) fail("expected '}' to close switch");
        add(c, statement());
        end_statement();
      }
      add(n, c);
    }
    take();
    return n;
  }

  bool is_type_switch(int id) const {
    std::vector<int> stack{id};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (b_.at(x).kind == "type_switch_guard") return true;
      for (int ch : b_.at(x).children) stack.push_back(ch);
    }
    return false;
  }

  int select_statement() {
    int n = node("select_statement", take());
    expect("{");
    skip_semis();
    while (!at("}")) {
      int c;
      if (at_kw("case")) {
        c = node("communication_case", take());
        add(c, simple_statement());
      } else {
        c = node("default_case", expect_kw("default"));
      }
      expect(":", "after case");
      skip_semis();
      while (!at_kw("case") && !at_kw("default") && !at("}")) {
        add(c, statement());
        end_statement();
      }
      add(n, c);
    }
    take();
    return n;
  }

  // ---------------------------------------------------------------- expressions

  int expression_list() {
    int n = node("expression_list");
    do add(n, expression());
    while (accept(","));
    return n;
  }

  static int precedence(const Token& t) {
    if (t.kind != TokenKind::punct) return 0;
    const std::string& s = t.text;
    if (s == "||") return 1;
    if (s == "&&") return 2;
    if (s == "==" || s == "!=" || s == "<" || s == "<=" || s == ">" || s == ">=") return 3;
    if (s == "+" || s == "-" || s == "|" || s == "^") return 4;
    if (s == "*" || s == "/" || s == "%" || s == "<<" || s == ">>" || s == "&" || s == "&^")
      return 5;
    return 0;
  }

  int expression(int min_prec = 1) {
    int left = unary();
    for (;;) {
      int p = precedence(cur());
      if (p == 0 || p < min_prec) break;
      Token op = take();
      int n = node("binary_expression", op, op.text);
      add(n, left);
      add(n, expression(p + 1));
      left = n;
    }
    return left;
  }

  int unary() {
    const Token& t = cur();
    if (t.kind == TokenKind::punct &&
        (t.text == "+" || t.text == "-" || t.text == "!" || t.text == "^" || t.text == "*" ||
         t.text == "&" || t.text == "<-")) {
      if (t.text == "<-" && peek().is_keyword("chan")) return postfix(type());
      int n = node("unary_expression", take(), t.text);
      add(n, unary());
      return n;
    }
    return postfix(operand());
  }

  int operand() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::number:
        return leaf(t.text.find_first_of(".eE") != std::string::npos &&
                            t.text.rfind("0x", 0) != 0
                        ? "float_literal"
                        : "int_literal",
                    take());
      case TokenKind::string:
        return leaf(t.text[0] == '`' ? "raw_string_literal" : "interpreted_string_literal",
                    take());
      case TokenKind::character:
        return leaf("rune_literal", take());
      case TokenKind::identifier:
        return leaf("identifier", take());
      case TokenKind::keyword:
        if (t.text == "func") {
          Token f = take();
          int n = node("func_literal", f);
          add(n, parameters(true));
          if (int r = result_in_type(); r >= 0) add(n, r);
          add(n, block());
          return n;
        }
        if (t.text == "map" || t.text == "chan" || t.text == "struct" || t.text == "interface")
          return type();
        break;
      case TokenKind::punct:
        if (t.text == "(") {
          Token l = take();
          int saved = no_lit_;
          no_lit_ = 0;
          int inner = expression();
          no_lit_ = saved;
          expect(")", "to close parenthesis");
          int n = node("parenthesized_expression", l);
          add(n, inner);
          return n;
        }
        if (t.text == "[") return type();
        break;
      default:
        break;
    }
    fail("expected expression");
  }

  bool literal_type(int id) const {
    const std::string& k = b_.at(id).kind;
    return k == "identifier" || k == "selector_expression" || k == "slice_type" ||
           k == "array_type" || k == "map_type" || k == "struct_type" || k == "generic_type" ||
           k == "index_expression";
  }

  bool type_literal(int id) const {
    const std::string& k = b_.at(id).kind;
    return k == "slice_type" || k == "array_type" || k == "map_type" || k == "struct_type";
  }

  int postfix(int e) {
    for (;;) {
      if (at(".")) {
        Token dot = take();
        if (at("(")) {
          take();
          int n = node("type_assertion_expression", dot);
          add(n, e);
          if (at_kw("type")) {
            take();
            at_node(n).kind = "type_switch_guard";
          } else {
            add(n, type());
          }
          expect(")");
          e = n;
          continue;
        }
        int n = node("selector_expression", dot);
        add(n, e);
        add(n, leaf("field_identifier", expect_ident("after '.'")));
        e = n;
        continue;
      }
      if (at("(")) {
        int n = b_.add("call_expression", rightmost_name(e), b_.at(e).line, b_.at(e).column);
        add(n, e);
        int args = node("argument_list", take());
        int saved = no_lit_;
        no_lit_ = 0;
        while (!at(")")) {
          // make([]int, n) and new(T) take types.
          if (at("[") || at_kw("map") || at_kw("chan") || at_kw("struct") || at_kw("interface"))
            add(args, postfix(type()));
          else
            add(args, expression());
          accept("...");
          if (!accept(",")) break;
          skip_semis();
        }
        no_lit_ = saved;
        expect(")", "to close argument list");
        add(n, args);
        e = n;
        continue;
      }
      if (at("[")) {
        Token l = take();
        int saved = no_lit_;
        no_lit_ = 0;
        int n = node("index_expression", l);
        add(n, e);
        int first = at(":") ? -1 : expression();
        if (at(":")) {
          at_node(n).kind = "slice_expression";
          add(n, first);
          while (accept(":")) {
            if (!at(":") && !at("]")) add(n, expression());
          }
        } else {
          add(n, first);
          while (accept(",")) add(n, type());
        }
        no_lit_ = saved;
        expect("]", "to close index");
        e = n;
        continue;
      }
      // In clause headers only explicit type literals are unambiguous.
      if (at("{") && literal_type(e) && (no_lit_ == 0 || type_literal(e))) {
        int n = node("composite_literal");
        add(n, e);
        add(n, literal_value());
        e = n;
        continue;
      }
      break;
    }
    return e;
  }

  int literal_value() {
    int n = node("literal_value", take());
    int saved = no_lit_;
    no_lit_ = 0;
    skip_semis();
    while (!at("}")) {
      int el = at("{") ? literal_value() : expression();
      if (accept(":")) {
        int kv = node("keyed_element");
        add(kv, el);
        add(kv, at("{") ? literal_value() : expression());
        el = kv;
      }
      add(n, el);
      if (!accept(",")) break;
      skip_semis();
    }
    skip_semis();
    expect("}", "to close composite literal");
    no_lit_ = saved;
    return n;
  }

  int no_lit_ = 0;  // >0 inside control-clause headers
};

}  // namespace

SyntaxTree parse_go(std::vector<Token> tokens) { return GoParser(std::move(tokens)).parse(); }

}  // namespace f2s::style::detail
