// Recursive-descent parser for C, C++ and Java.
//
// The grammar is the practical subset found in competitive-programming and
// textbook code: declarations, functions, classes/structs, templates and
// generics, the usual statements, and full expression precedence. Ambiguities
// between declarations and expressions are settled by speculative parsing.

#include <cctype>
#include <set>

#include "parser_base.hpp"
#include "parsers.hpp"

namespace f2s::style::detail {
namespace {

const std::set<std::string_view> kPrimitiveC = {
    "void", "char", "short", "int", "long", "float", "double", "signed", "unsigned", "_Bool"};
const std::set<std::string_view> kPrimitiveCpp = {
    "void", "char", "short", "int", "long", "float", "double", "signed",
    "unsigned", "bool", "auto", "wchar_t", "char16_t", "char32_t"};
const std::set<std::string_view> kPrimitiveJava = {
    "void", "boolean", "byte", "char", "short", "int", "long", "float", "double"};

const std::set<std::string_view> kQualifiersC = {"const", "volatile", "static", "extern",
                                                 "register", "inline", "restrict"};
const std::set<std::string_view> kQualifiersCpp = {
    "const",  "volatile", "static",  "extern",   "register", "inline",
    "constexpr", "mutable", "thread_local", "virtual", "explicit", "friend"};
const std::set<std::string_view> kModifiersJava = {
    "public", "private", "protected", "static",   "final",    "abstract",
    "native", "synchronized", "transient", "volatile", "strictfp"};

const std::set<std::string_view> kAssignOps = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                               "&=", "|=", "^=", "<<=", ">>=", ">>>="};

class CFamilyParser : public ParserBase {
 public:
  CFamilyParser(std::vector<Token> tokens, Language lang)
      : ParserBase(drop_inline_directives(std::move(tokens)), lang) {}

  SyntaxTree parse() {
    int root = node(java() ? "program" : "translation_unit");
    while (!at_end()) {
      int item = java() ? java_top_item() : external_item();
      add(root, item);
    }
    return b_.finish(root, lang_);
  }

 private:
  bool cpp() const { return lang_ == Language::cpp; }
  bool java() const { return lang_ == Language::java; }
  bool c() const { return lang_ == Language::c; }

  const std::set<std::string_view>& primitives() const {
    return java() ? kPrimitiveJava : cpp() ? kPrimitiveCpp : kPrimitiveC;
  }
  bool is_primitive(const Token& t) const {
    return t.kind == TokenKind::keyword && primitives().count(t.text) > 0;
  }
  bool is_qualifier(const Token& t) const {
    if (t.kind != TokenKind::keyword) return false;
    if (java()) return kModifiersJava.count(t.text) > 0;
    return (cpp() ? kQualifiersCpp : kQualifiersC).count(t.text) > 0;
  }
  bool is_tag_keyword(const Token& t) const {
    if (t.kind != TokenKind::keyword) return false;
    if (java()) return false;
    return t.text == "struct" || t.text == "union" || t.text == "enum" ||
           (cpp() && t.text == "class");
  }

  // ---------------------------------------------------------------- top level

  int preprocessor_item() {
    Token t = take();
    std::string_view text = t.text;
    std::size_t i = 1;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
    std::string directive(text.substr(i, j - i));
    std::string kind = directive == "include" ? "preproc_include"
                       : directive == "define" ? "preproc_def"
                                               : "preproc_directive";
    int n = node(kind, t, t.text);
    if (directive == "define") {
      // #define NAME ... makes NAME usable as a type or constant.
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
      std::size_t k = j;
      while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_')) ++k;
      if (k > j) {
        std::string name(text.substr(j, k - j));
        std::string rest(text.substr(k));
        if (rest.find_first_not_of(' ') != std::string::npos && rest[0] != '(') {
          // Object-like macro whose body starts with a type keyword.
          std::size_t s = rest.find_first_not_of(' ');
          std::string first = rest.substr(s, rest.find_first_of(" \t*", s) - s);
          if (primitives().count(first) || first == "struct" || first == "const")
            type_names_.insert(name);
        }
        int id = b_.add("identifier", name, t.line, t.column);
        add(n, id);
      }
    }
    return n;
  }

  int external_item() {
    if (cur().kind == TokenKind::preprocessor) return preprocessor_item();
    if (at(";")) {
      return leaf("empty_declaration", take());
    }
    if (cpp() && at_kw("namespace")) return namespace_definition();
    if (cpp() && at_kw("template")) return template_declaration([this] { return external_item(); });
    if (cpp() && at_kw("using")) return using_item();
    if (at_kw("typedef")) return typedef_item();
    if (at_kw("extern") && peek().kind == TokenKind::string) {
      Token t = take();
      int n = node("linkage_specification", t);
      add(n, leaf("string_literal", take()));
      if (accept("{")) {
        while (!at("}") && !at_end()) add(n, external_item());
        expect("}");
      } else {
        add(n, external_item());
      }
      return n;
    }
    if (cpp() && at_kw("static_assert")) return expression_statement();
    return declaration_or_macro(Scope::file);
  }

  int namespace_definition() {
    Token t = take();
    int n = node("namespace_definition", t);
    if (at_ident()) add(n, qualified_name("namespace_identifier"));
    if (accept("=")) {
      at_node(n).kind = "namespace_alias_definition";
      add(n, qualified_name("namespace_identifier"));
      expect(";", "after namespace alias");
      return n;
    }
    expect("{", "to open namespace");
    int body = node("declaration_list");
    while (!at("}") && !at_end()) add(body, external_item());
    expect("}");
    add(n, body);
    return n;
  }

  template <class ItemFn>
  int template_declaration(ItemFn item) {
    Token t = take();
    int n = node("template_declaration", t);
    int params = node("template_parameter_list", expect("<"));
    while (!at(">") && !at_end()) {
      if (at_kw("typename") || at_kw("class")) {
        Token k = take();
        int p = node("type_parameter_declaration", k);
        accept("...");
        if (at_ident()) {
          Token name = take();
          type_names_.insert(name.text);
          add(p, leaf("type_identifier", name));
        }
        if (accept("=")) add(p, type_expression());
        add(params, p);
      } else {
        int p = node("parameter_declaration");
        add(p, type_expression());
        if (at_ident()) add(p, leaf("identifier", take()));
        if (accept("=")) add(p, expression(Prec::ternary));
        add(params, p);
      }
      if (!accept(",")) break;
    }
    expect(">", "to close template parameters");
    add(n, params);
    add(n, item());
    return n;
  }

  int using_item() {
    Token t = take();
    if (accept_kw("namespace")) {
      int n = node("using_declaration", t, "namespace");
      add(n, qualified_name("namespace_identifier"));
      expect(";", "after using directive");
      return n;
    }
    if (at_ident() && peek().is_punct("=")) {
      int n = node("alias_declaration", t);
      Token name = take();
      type_names_.insert(name.text);
      add(n, leaf("type_identifier", name));
      expect("=");
      add(n, type_expression());
      expect(";", "after alias declaration");
      return n;
    }
    int n = node("using_declaration", t);
    add(n, qualified_name("identifier"));
    expect(";", "after using declaration");
    return n;
  }

  int typedef_item() {
    Token t = take();
    int n = node("type_definition", t);
    Specs specs;
    if (!specifiers(specs, Scope::file)) fail("expected type in typedef");
    for (int s : specs.nodes) add(n, s);
    do {
      Decl d = declarator(DeclMode::named);
      if (d.name >= 0) {
        type_names_.insert(at_node(d.name).text);
        at_node(d.name).kind = "type_identifier";
      }
      add(n, d.node);
    } while (accept(","));
    expect(";", "after typedef");
    return n;
  }

  // ---------------------------------------------------------------- specifiers

  enum class Scope { file, klass, block, param };

  struct Specs {
    std::vector<int> nodes;
    bool has_type = false;
    bool defines_body = false;  // struct/class/enum with a body
    bool is_ctor = false;
  };

  // Attributes like [[nodiscard]] and __attribute__((...)) carry no structure.
  void skip_attributes() {
    for (;;) {
      if (cpp() && at("[") && peek().is_punct("[")) {
        int depth = 0;
        do {
          if (at("[")) ++depth;
          if (at("]")) --depth;
          take();
        } while (depth > 0 && !at_end());
        continue;
      }
      if (at_ident() && (cur().text == "__attribute__" || cur().text == "__declspec")) {
        take();
        balanced_skip();
        continue;
      }
      break;
    }
  }

  void balanced_skip() {
    if (!at("(")) return;
    int depth = 0;
    do {
      if (at("(")) ++depth;
      if (at(")")) --depth;
      take();
    } while (depth > 0 && !at_end());
  }

  int annotation() {
    Token t = expect("@");
    int n = node("annotation", t);
    add(n, qualified_name("identifier"));
    if (at("(")) add(n, argument_list());
    return n;
  }

  // Parses declaration specifiers. Returns true when a type (or a constructor
  // name in class scope) was found.
  bool specifiers(Specs& s, Scope scope) {
    for (;;) {
      skip_attributes();
      const Token& t = cur();
      if (java() && at("@") && !peek().is_keyword("interface")) {
        s.nodes.push_back(annotation());
        continue;
      }
      if (is_qualifier(t) || (java() && t.is_keyword("default") && scope == Scope::klass)) {
        s.nodes.push_back(leaf(java() ? "modifier" : "type_qualifier", take()));
        continue;
      }
      if (cpp() && t.is_keyword("typename")) {
        take();
        continue;
      }
      if (is_primitive(t)) {
        // long long, unsigned int, long double ...
        Token first = take();
        int n = node("primitive_type", first, first.text);
        while (is_primitive(cur()) || (!java() && is_qualifier(cur()) && cur().text == "const"))
          add(n, leaf("primitive_type", take()));
        s.nodes.push_back(n);
        s.has_type = true;
        if (java()) s.nodes.back() = java_array_suffix(s.nodes.back());
        continue;
      }
      if (s.has_type) break;
      if (is_tag_keyword(t)) {
        s.nodes.push_back(tag_specifier(s));
        s.has_type = true;
        continue;
      }
      if (cpp() && t.is_keyword("decltype")) {
        Token d = take();
        int n = node("decltype", d);
        expect("(");
        add(n, expression(Prec::comma));
        expect(")");
        s.nodes.push_back(n);
        s.has_type = true;
        continue;
      }
      if (java() && (t.is_keyword("class") || t.is_keyword("interface") || t.is_keyword("enum") ||
                     (t.is_punct("@") && peek().is_keyword("interface"))))
        break;
      if (java() && at("<") && scope == Scope::klass) {
        s.nodes.push_back(java_type_parameters());
        continue;
      }
      if (t.kind == TokenKind::identifier || (cpp() && t.is_punct("::"))) {
        if (cpp() && scope == Scope::klass && is_constructor_name()) {
          s.is_ctor = true;
          return true;
        }
        if (java() && scope == Scope::klass && !class_stack_.empty() &&
            t.text == class_stack_.back() && peek().is_punct("(")) {
          s.is_ctor = true;
          return true;
        }
        if (cpp() && scope == Scope::file && is_out_of_line_constructor()) {
          s.is_ctor = true;
          return true;
        }
        s.nodes.push_back(type_name());
        s.has_type = true;
        continue;
      }
      if (cpp() && t.is_keyword("operator") && scope != Scope::block) {
        s.is_ctor = true;
        return true;
      }
      if (cpp() && t.is_punct("~") && scope != Scope::block) {
        s.is_ctor = true;
        return true;
      }
      break;
    }
    return s.has_type;
  }

  bool is_constructor_name() const {
    if (class_stack_.empty()) return false;
    if (cur().text == class_stack_.back() && peek().is_punct("(")) return true;
    return false;
  }

  // A::A( or A::~A(
  bool is_out_of_line_constructor() const {
    if (!at_ident()) return false;
    std::size_t i = pos_;
    std::string last;
    std::string prev;
    while (i + 2 < toks_.size() && toks_[i].kind == TokenKind::identifier &&
           toks_[i + 1].is_punct("::")) {
      prev = toks_[i].text;
      i += 2;
      if (toks_[i].is_punct("~")) ++i;
    }
    if (prev.empty() || toks_[i].kind != TokenKind::identifier) return false;
    return toks_[i].text == prev && toks_[i + 1].is_punct("(");
  }

  int tag_specifier(Specs& s) {
    Token kw = take();
    std::string kind = kw.text == "enum" ? "enum_specifier"
                       : kw.text == "union" ? "union_specifier"
                       : kw.text == "class" ? "class_specifier"
                                            : "struct_specifier";
    int n = node(kind, kw);
    if (kw.text == "enum" && (at_kw("class") || at_kw("struct"))) take();
    skip_attributes();
    std::string name;
    if (at_ident()) {
      int q = qualified_name("type_identifier");
      name = rightmost_name(q);
      type_names_.insert(name);
      add(n, q);
      if (cpp() && at("<")) add(n, template_arguments());
    }
    if (cpp() && at_ident() && cur().text == "final") take();
    if (kw.text == "enum") {
      if (accept(":")) add(n, type_expression());
      if (at("{")) {
        s.defines_body = true;
        int list = node("enumerator_list", take());
        while (!at("}") && !at_end()) {
          int e = node("enumerator");
          add(e, leaf("identifier", expect_ident("in enumerator list")));
          if (accept("=")) add(e, expression(Prec::ternary));
          add(list, e);
          if (!accept(",")) break;
        }
        expect("}", "to close enum");
        add(n, list);
      }
      return n;
    }
    if (cpp() && accept(":")) {
      int bases = node("base_class_clause");
      do {
        while (at_kw("public") || at_kw("private") || at_kw("protected") || at_kw("virtual"))
          take();
        add(bases, type_name());
      } while (accept(","));
      add(n, bases);
    }
    if (at("{")) {
      s.defines_body = true;
      class_stack_.push_back(name);
      add(n, member_list());
      class_stack_.pop_back();
    }
    return n;
  }

  int member_list() {
    int list = node("field_declaration_list", expect("{"));
    while (!at("}") && !at_end()) {
      if (cur().kind == TokenKind::preprocessor) {
        add(list, preprocessor_item());
        continue;
      }
      if (cpp() && (at_kw("public") || at_kw("private") || at_kw("protected")) &&
          peek().is_punct(":")) {
        add(list, leaf("access_specifier", take()));
        take();
        continue;
      }
      if (at(";")) {
        take();
        continue;
      }
      if (cpp() && at_kw("template")) {
        add(list, template_declaration([this] { return declaration(Scope::klass); }));
        continue;
      }
      if (cpp() && at_kw("using")) {
        add(list, using_item());
        continue;
      }
      if (at_kw("typedef")) {
        add(list, typedef_item());
        continue;
      }
      if (cpp() && at_kw("static_assert")) {
        add(list, expression_statement());
        continue;
      }
      add(list, declaration_or_macro(Scope::klass));
    }
    expect("}", "to close member list");
    return list;
  }

  // ---------------------------------------------------------------- types

  // name, a::b, ::a::b<T>::c. `kind` labels the final component.
  int qualified_name(const char* kind) {
    Token start = cur();
    std::vector<int> parts;
    if (cpp() && at("::")) take();
    parts.push_back(leaf(kind, expect_ident()));
    while (true) {
      if (cpp() && at("::") && (peek().kind == TokenKind::identifier || peek().is_punct("~"))) {
        take();
        if (at("~")) {
          Token tilde = take();
          Token name = expect_ident();
          parts.push_back(node("destructor_name", tilde, "~" + name.text));
          continue;
        }
        parts.push_back(leaf(kind, take()));
        continue;
      }
      if (java() && at(".") && peek().kind == TokenKind::identifier) {
        take();
        parts.push_back(leaf(kind, take()));
        continue;
      }
      break;
    }
    if (parts.size() == 1) return parts[0];
    int n = node(java() ? "scoped_identifier" : "qualified_identifier", start);
    for (int p : parts) add(n, p);
    return n;
  }

  // A named type: qualified name plus template/generic arguments.
  int type_name() {
    Token start = cur();
    std::vector<int> parts;
    if (cpp() && at("::")) take();
    for (;;) {
      int id = leaf("type_identifier", expect_ident("in type"));
      if ((cpp() || java()) && at("<")) {
        int t = node(java() ? "generic_type" : "template_type", start);
        add(t, id);
        add(t, template_arguments());
        id = t;
      }
      parts.push_back(id);
      if (cpp() && at("::") && peek().kind == TokenKind::identifier) {
        take();
        continue;
      }
      if (java() && at(".") && peek().kind == TokenKind::identifier) {
        take();
        continue;
      }
      break;
    }
    int result = parts[0];
    if (parts.size() > 1) {
      result = node(java() ? "scoped_type_identifier" : "qualified_type", start);
      for (int p : parts) add(result, p);
    }
    if (java()) result = java_array_suffix(result);
    return result;
  }

  int java_array_suffix(int type) {
    while (at("[") && peek().is_punct("]")) {
      take();
      take();
      type = wrap("array_type", type);
    }
    return type;
  }

  int template_arguments() {
    int n = node(java() ? "type_arguments" : "template_argument_list", expect("<"));
    if (accept(">")) return n;
    for (;;) {
      if (java() && at("?")) {
        int w = node("wildcard", take());
        if (accept_kw("extends") || accept_kw("super")) add(w, type_expression());
        add(n, w);
      } else {
        Mark m = mark();
        bool done = false;
        try {
          int t = type_expression();
          if (at(",") || at(">") || at("...")) {
            add(n, t);
            done = true;
          }
        } catch (const ParseError&) {
        }
        if (!done) {
          reset(m);
          ++no_gt_;
          int e = expression(Prec::ternary);
          --no_gt_;
          add(n, e);
        }
      }
      accept("...");
      if (!accept(",")) break;
    }
    expect(">", "to close template arguments");
    return n;
  }

  // Full type as used in casts, template arguments, new-expressions and
  // trailing return types: specifiers plus an abstract declarator.
  int type_expression() {
    Specs s;
    Token start = cur();
    if (!specifiers(s, Scope::param)) fail("expected type");
    int n = s.nodes.size() == 1 ? s.nodes[0] : node("type_descriptor", start);
    if (s.nodes.size() > 1)
      for (int x : s.nodes) add(n, x);
    if (!java()) {
      while (at("*") || at("&") || at("&&")) {
        Token p = take();
        n = wrap(p.text == "*" ? "pointer_type" : "reference_type", n);
        while (at_kw("const") || at_kw("volatile")) take();
      }
      if (at("(") && peek().is_punct("*")) {
        // Function pointer type: ret (*)(args)
        Decl d = declarator(DeclMode::abstract);
        n = wrap("type_descriptor", n);
        add(n, d.node);
      }
      while (at("[") ) {
        Token l = take();
        int arr = node("abstract_array_declarator", l);
        if (!at("]")) add(arr, expression(Prec::comma));
        expect("]");
        add(n, arr);
      }
    }
    return n;
  }

  int java_type_parameters() {
    int n = node("type_parameters", expect("<"));
    while (!at(">") && !at_end()) {
      int p = node("type_parameter");
      Token name = expect_ident("in type parameters");
      type_names_.insert(name.text);
      add(p, leaf("type_identifier", name));
      if (accept_kw("extends")) {
        add(p, type_expression());
        while (accept("&")) add(p, type_expression());
      }
      add(n, p);
      if (!accept(",")) break;
    }
    expect(">", "to close type parameters");
    return n;
  }

  // ---------------------------------------------------------------- declarators

  enum class DeclMode { named, abstract, maybe_abstract };

  struct Decl {
    int node = -1;
    int name = -1;
    bool function = false;
    bool has_ctor_args = false;
  };

  int declarator_name() {
    Token t = cur();
    if (cpp() && at_kw("operator")) {
      take();
      std::string op = "operator";
      if (at("(") && peek().is_punct(")")) {
        take();
        take();
        op += "()";
      } else if (at("[") && peek().is_punct("]")) {
        take();
        take();
        op += "[]";
      } else if (at_kw("new") || at_kw("delete")) {
        op += " " + take().text;
        if (at("[")) {
          take();
          expect("]");
          op += "[]";
        }
      } else if (cur().kind == TokenKind::punct) {
        op += take().text;
        while (cur().joined) op += take().text;
      } else {
        int t2 = type_expression();
        op += " " + at_node(t2).text;
      }
      return node("operator_name", t, op);
    }
    if (cpp() && at("~")) {
      Token tilde = take();
      Token name = expect_ident();
      return node("destructor_name", tilde, "~" + name.text);
    }
    if (cpp() && (at("::") || (at_ident() && peek().is_punct("::")))) return qualified_declarator(t);
    return plain_declarator_name(t);
  }

  // Qualified declarator, e.g. Foo::bar, Foo<T>::x or Foo::operator<
  int qualified_declarator(const Token& t) {
    int n = node("qualified_identifier", t);
    accept("::");
    for (;;) {
      if (at_kw("operator") || at("~")) {
        add(n, declarator_name());
        break;
      }
      add(n, leaf("identifier", expect_ident("in declarator")));
      if (at("<")) {
        Mark m = mark();
        try {
          add(n, template_arguments());
        } catch (const ParseError&) {
          reset(m);
        }
      }
      if (!(at("::"))) break;
      take();
    }
    return n;
  }

  int plain_declarator_name(const Token& t) {
    Mark before = mark();
    int id = leaf("identifier", expect_ident("in declarator"));
    if (cpp() && at("<")) {
      // Explicit specialisation or out-of-line member of a class template.
      Mark m = mark();
      try {
        int args = template_arguments();
        if (at("(")) {
          int n = node("template_function", t);
          add(n, id);
          add(n, args);
          return n;
        }
        if (at("::")) {
          reset(before);
          return qualified_declarator(t);
        }
      } catch (const ParseError&) {
      }
      reset(m);
    }
    return id;
  }

  Decl declarator(DeclMode mode, bool block_scope = false) {
    skip_attributes();
    if (!java() && (at("*") || (cpp() && (at("&") || at("&&"))) || (cpp() && at("^")))) {
      Token p = take();
      int n = node(p.text == "*" ? "pointer_declarator" : "reference_declarator", p);
      while (at_kw("const") || at_kw("volatile") || at_kw("restrict")) add(n, leaf("type_qualifier", take()));
      Decl inner = declarator(mode, block_scope);
      add(n, inner.node);
      inner.node = n;
      return inner;
    }
    if (cpp() && at("...")) take();
    Decl d;
    if (!java() && at("(") && (peek().is_punct("*") || peek().is_punct("&") || peek().is_punct("^"))) {
      Token l = take();
      Decl inner = declarator(mode, block_scope);
      expect(")");
      d = inner;
      d.node = wrap("parenthesized_declarator", inner.node);
      (void)l;
    } else if (cpp() && at("[") && !peek().is_punct("[")) {
      // Structured binding: auto [a, b] = ...
      int n = node("structured_binding_declarator", take());
      do {
        int id = leaf("identifier", expect_ident("in structured binding"));
        mark_declared(id);
        add(n, id);
      } while (accept(","));
      expect("]");
      d.node = n;
      return d;
    } else if (at_ident() || (cpp() && (at_kw("operator") || at("~") || at("::")))) {
      d.name = declarator_name();
      d.node = d.name;
      // Only the last identifier names the entity.
      while (at_node(d.name).kind == "qualified_identifier" ||
             at_node(d.name).kind == "template_function") {
        const auto& kids = at_node(d.name).children;
        int pick = kids.front();
        for (int k : kids)
          if (at_node(k).kind != "template_argument_list") pick = k;
        if (at_node(d.name).kind == "template_function") pick = kids.front();
        d.name = pick;
      }
    } else if (mode == DeclMode::named) {
      fail("expected declarator");
    }
    // Suffixes.
    for (;;) {
      if (at("[")) {
        Token l = take();
        int n = node("array_declarator", l);
        if (d.node >= 0) add(n, d.node);
        if (!at("]")) add(n, expression(Prec::comma));
        expect("]", "to close array declarator");
        d.node = n;
        continue;
      }
      if (at("(") && d.node >= 0 && !d.function) {
        if (block_scope && !c() && at_node(d.node).kind != "parenthesized_declarator") {
          // In a block, T name(args) constructs an object.
          int args = argument_list();
          d.has_ctor_args = true;
          int n = node("init_declarator");
          add(n, d.node);
          add(n, args);
          d.node = n;
          break;
        }
        Mark m = mark();
        int params = -1;
        try {
          params = parameter_list();
        } catch (const ParseError&) {
          reset(m);
        }
        if (params < 0) {
          // File-scope object with constructor arguments.
          int args = argument_list();
          d.has_ctor_args = true;
          int n = node("init_declarator");
          add(n, d.node);
          add(n, args);
          d.node = n;
          break;
        }
        int n = node("function_declarator");
        // (*fp)(args) declares a pointer variable, not a function.
        bool pointer = at_node(d.node).kind == "parenthesized_declarator";
        add(n, d.node);
        add(n, params);
        d.node = n;
        d.function = !pointer;
        if (pointer) {
          function_trailer(n);
          break;
        }
        function_trailer(n);
        continue;
      }
      break;
    }
    return d;
  }

  void function_trailer(int fn) {
    for (;;) {
      if (at_kw("const") || at_kw("volatile")) {
        add(fn, leaf("type_qualifier", take()));
        continue;
      }
      if (cpp() && (at("&") || at("&&"))) {
        take();
        continue;
      }
      if (cpp() && at_kw("noexcept")) {
        take();
        if (at("(")) balanced_skip();
        continue;
      }
      if (cpp() && at_kw("throw") && peek().is_punct("(")) {
        take();
        balanced_skip();
        continue;
      }
      if (cpp() && at_ident() && (cur().text == "override" || cur().text == "final")) {
        add(fn, leaf("virtual_specifier", take()));
        continue;
      }
      if (cpp() && at("->")) {
        take();
        add(fn, wrap("trailing_return_type", type_expression()));
        continue;
      }
      if (java() && at("[") && peek().is_punct("]")) {
        take();
        take();
        continue;
      }
      break;
    }
  }

  int parameter_list() {
    int n = node("parameter_list", expect("("));
    if (accept(")")) return n;
    if (!java() && at_kw("void") && peek().is_punct(")")) {
      take();
      take();
      return n;
    }
    for (;;) {
      if (at("...")) {
        add(n, leaf("variadic_parameter", take()));
        break;
      }
      add(n, parameter());
      if (!accept(",")) break;
    }
    expect(")", "to close parameter list");
    return n;
  }

  int parameter() {
    int p = node("parameter_declaration");
    Specs s;
    if (!specifiers(s, Scope::param)) fail("expected parameter type");
    for (int x : s.nodes) add(p, x);
    if (java()) {
      if (accept("...")) at_node(p).kind = "spread_parameter";
      int id = leaf("identifier", expect_ident("for parameter name"));
      mark_declared(id);
      add(p, java_array_suffix(id));
      return p;
    }
    if (!at(",") && !at(")") && !at("=")) {
      Decl d = declarator(DeclMode::maybe_abstract);
      if (!d.function) mark_declared(d.name);
      add(p, d.node);
    }
    if (accept("=")) add(p, wrap("default_value", expression(Prec::assignment)));
    return p;
  }

  // ---------------------------------------------------------------- declarations

  // Declarations with macro noise: `API_MACRO int f()`, or a bare macro
  // invocation such as `TEST(a, b) { ... }` at file or class scope.
  int declaration_or_macro(Scope scope) {
    Mark m = mark();
    try {
      return declaration(scope);
    } catch (const ParseError& first) {
      reset(m);
      if (java() || !at_ident()) throw;
      if (is_macro_name(cur().text) &&
          (peek().kind == TokenKind::identifier || peek().kind == TokenKind::keyword)) {
        take();
        return declaration_or_macro(scope);
      }
      if (!peek().is_punct("(")) throw;
      try {
        Token name = take();
        int n = b_.add("macro_invocation", name.text, name.line, name.column);
        Mark args = mark();
        try {
          add(n, argument_list());
        } catch (const ParseError&) {
          reset(args);
          balanced_skip();  // arguments that are not expressions, e.g. types
        }
        if (at("{")) add(n, compound_statement());
        else accept(";");
        return n;
      } catch (const ParseError&) {
        throw first;
      }
    }
  }

  static bool is_macro_name(const std::string& s) {
    bool upper = false;
    for (char ch : s) {
      if (std::islower(static_cast<unsigned char>(ch))) return false;
      if (std::isupper(static_cast<unsigned char>(ch))) upper = true;
    }
    return upper;
  }

  // Preprocessor lines are kept only where a declaration or statement may
  // start; elsewhere (inside expressions or argument lists) they are dropped.
  static std::vector<Token> drop_inline_directives(std::vector<Token> in) {
    std::vector<Token> out;
    out.reserve(in.size());
    for (auto& t : in) {
      if (t.kind == TokenKind::preprocessor && !out.empty()) {
        const Token& prev = out.back();
        bool boundary = prev.kind == TokenKind::preprocessor || prev.is_punct(";") ||
                        prev.is_punct("{") || prev.is_punct("}") || prev.is_punct(":");
        if (!boundary) continue;
      }
      out.push_back(std::move(t));
    }
    return out;
  }

  int declaration(Scope scope) {
    Token start = cur();
    Specs s;
    bool typed = specifiers(s, scope);
    if (java() && (at_kw("class") || at_kw("interface") || at_kw("enum") ||
                   (at("@") && peek().is_keyword("interface")))) {
      return java_type_declaration(s.nodes);
    }
    if (java() && scope == Scope::klass && at("{")) {
      int n = node("static_initializer", start);
      for (int x : s.nodes) add(n, x);
      add(n, compound_statement());
      return n;
    }
    if (!typed && !s.is_ctor) {
      if (scope == Scope::file && at_ident() && peek().is_punct("(")) {
        // Implicit-int style: main() { ... }
        s.is_ctor = true;
      } else {
        fail("expected declaration");
      }
    }
    int decl = node("declaration", start);
    for (int x : s.nodes) add(decl, x);
    if (s.defines_body && accept(";")) {
      at_node(decl).kind = s.nodes.empty() ? "declaration" : at_node(s.nodes.back()).kind == "enum_specifier" ? "enum_declaration" : "struct_declaration";
      return decl;
    }
    if (!s.defines_body && at(";") && !s.nodes.empty()) {
      // Forward declaration such as `struct node;` or `class A;`
      take();
      return decl;
    }
    bool first = true;
    for (;;) {
      Decl d = declarator(DeclMode::named, scope == Scope::block);
      if (first && d.function &&
          (at("{") || (cpp() && at(":")) || (java() && at_kw("throws")) ||
           (cpp() && at_kw("try")) || (java() && at(";") && scope == Scope::klass))) {
        at_node(decl).kind = java() ? (s.is_ctor ? "constructor_declaration" : "method_declaration")
                                    : "function_definition";
        add(decl, d.node);
        if (java() && accept_kw("throws")) {
          int t = node("throws");
          do add(t, type_expression());
          while (accept(","));
          add(decl, t);
        }
        if (java() && accept(";")) return decl;  // abstract / interface method
        if (cpp() && at(":")) add(decl, member_initializers());
        accept_kw("try");
        add(decl, compound_statement());
        if (cpp()) {
          while (at_kw("catch")) add(decl, catch_clause());
        }
        return decl;
      }
      first = false;
      if (!d.function) mark_declared(d.name);
      int item = d.node;
      if (!d.has_ctor_args) {
        if (accept("=")) {
          int init = node("init_declarator");
          add(init, d.node);
          if (cpp() && (at_kw("default") || at_kw("delete"))) {
            add(init, leaf("default_method_clause", take()));
          } else {
            add(init, initializer());
          }
          item = init;
        } else if (cpp() && at("{")) {
          int init = node("init_declarator");
          add(init, d.node);
          add(init, initializer_list());
          item = init;
        } else if (!java() && scope == Scope::klass && at(":")) {
          take();
          int bf = node("bitfield_clause");
          add(bf, expression(Prec::ternary));
          int init = node("field_declarator");
          add(init, d.node);
          add(init, bf);
          item = init;
        }
      }
      add(decl, item);
      if (!accept(",")) break;
    }
    if (java() && scope == Scope::klass) at_node(decl).kind = "field_declaration";
    if (!java() && scope == Scope::klass) at_node(decl).kind = "field_declaration";
    expect(";", "after declaration");
    return decl;
  }

  int member_initializers() {
    int n = node("field_initializer_list", expect(":"));
    do {
      int f = node("field_initializer");
      add(f, qualified_name("field_identifier"));
      if (at("{")) add(f, initializer_list());
      else add(f, argument_list());
      add(n, f);
    } while (accept(","));
    return n;
  }

  int initializer() {
    if (at("{")) return initializer_list();
    return expression(Prec::assignment);
  }

  int initializer_list() {
    int n = node(java() ? "array_initializer" : "initializer_list", expect("{"));
    while (!at("}") && !at_end()) {
      if (!java() && at(".") && peek().kind == TokenKind::identifier) {
        // Designated initializer .x = 1
        Token d = take();
        int des = node("initializer_pair", d);
        add(des, leaf("field_designator", take()));
        expect("=");
        add(des, initializer());
        add(n, des);
      } else {
        add(n, initializer());
      }
      accept("...");
      if (!accept(",")) break;
    }
    expect("}", "to close initializer list");
    return n;
  }

  // ---------------------------------------------------------------- Java

  int java_top_item() {
    if (at(";")) {
      take();
      return node("empty_declaration");
    }
    if (at_kw("package")) {
      Token t = take();
      int n = node("package_declaration", t);
      add(n, qualified_name("identifier"));
      expect(";", "after package declaration");
      return n;
    }
    if (at_kw("import")) {
      Token t = take();
      int n = node("import_declaration", t);
      accept_kw("static");
      add(n, qualified_name("identifier"));
      if (accept(".")) {
        expect("*");
        add(n, node("asterisk"));
      }
      expect(";", "after import");
      return n;
    }
    return declaration(Scope::file);
  }

  int java_type_declaration(std::vector<int> modifiers) {
    if (at("@")) {
      // Annotation type declaration; body kept shallow.
      Token t = take();
      take();
      int n = node("annotation_type_declaration", t);
      add(n, leaf("identifier", expect_ident()));
      add(n, java_class_body(""));
      return n;
    }
    Token kw = take();
    std::string kind = kw.text == "interface" ? "interface_declaration"
                       : kw.text == "enum"    ? "enum_declaration"
                                              : "class_declaration";
    int n = node(kind, kw);
    for (int m : modifiers) add(n, m);
    Token name = expect_ident("after " + kw.text);
    type_names_.insert(name.text);
    add(n, leaf("identifier", name));
    if (at("<")) add(n, java_type_parameters());
    if (accept_kw("extends")) {
      int sc = node("superclass");
      do add(sc, type_expression());
      while (accept(","));
      add(n, sc);
    }
    if (accept_kw("implements")) {
      int si = node("super_interfaces");
      do add(si, type_expression());
      while (accept(","));
      add(n, si);
    }
    if (kw.text == "enum") {
      add(n, java_enum_body(name.text));
    } else {
      add(n, java_class_body(name.text));
    }
    return n;
  }

  int java_class_body(const std::string& name) {
    int body = node("class_body", expect("{", "to open class body"));
    class_stack_.push_back(name);
    while (!at("}") && !at_end()) {
      if (accept(";")) continue;
      add(body, declaration(Scope::klass));
    }
    class_stack_.pop_back();
    expect("}", "to close class body");
    return body;
  }

  int java_enum_body(const std::string& name) {
    int body = node("enum_body", expect("{", "to open enum body"));
    class_stack_.push_back(name);
    while (at_ident() || at("@")) {
      if (at("@")) {
        annotation();
        continue;
      }
      int c = node("enum_constant");
      add(c, leaf("identifier", take()));
      if (at("(")) add(c, argument_list());
      if (at("{")) add(c, java_class_body(name));
      add(body, c);
      if (!accept(",")) break;
    }
    if (accept(";")) {
      while (!at("}") && !at_end()) {
        if (accept(";")) continue;
        add(body, declaration(Scope::klass));
      }
    }
    class_stack_.pop_back();
    expect("}", "to close enum body");
    return body;
  }

  // ---------------------------------------------------------------- statements

  int compound_statement() {
    int n = node("compound_statement", expect("{", "to open block"));
    while (!at("}")) {
      if (at_end()) fail("expected '}' to close block");
      add(n, statement());
    }
    take();
    return n;
  }

  bool looks_like_declaration() {
    const Token& t = cur();
    if (is_primitive(t) || is_qualifier(t) || is_tag_keyword(t)) return true;
    if (cpp() && (t.is_keyword("typename") || t.is_keyword("decltype"))) return true;
    if (java() && t.is_punct("@")) return true;
    if (java() && (t.is_keyword("class") || t.is_keyword("interface") || t.is_keyword("enum")))
      return true;
    if (!(t.kind == TokenKind::identifier || (cpp() && t.is_punct("::")))) return false;
    Mark m = mark();
    bool result = false;
    try {
      type_name();
      if (!java()) {
        while (at_kw("const") || at_kw("volatile")) take();
        while (at("*") || (cpp() && (at("&") || at("&&")))) {
          take();
          while (at_kw("const")) take();
        }
      }
      result = at_ident() || (cpp() && at("[") && !peek().is_punct("]") &&
                              peek().kind == TokenKind::identifier && false);
      if (result && !java()) {
        // `a b` is only a declaration when followed by a declarator tail.
        const Token& after = peek();
        result = after.is_punct("=") || after.is_punct(";") || after.is_punct(",") ||
                 after.is_punct("[") || after.is_punct("(") || after.is_punct("{") ||
                 after.is_punct(":") || after.is_punct(")");
      }
    } catch (const ParseError&) {
      result = false;
    }
    reset(m);
    return result;
  }

  int statement() {
    const Token& t = cur();
    if (t.kind == TokenKind::preprocessor) return preprocessor_item();
    if (t.is_punct("{")) return compound_statement();
    if (t.is_punct(";")) return leaf("empty_statement", take());
    if (t.kind == TokenKind::keyword) {
      const std::string& k = t.text;
      if (k == "if") return if_statement();
      if (k == "for") return for_statement();
      if (k == "while") return while_statement();
      if (k == "do") return do_statement();
      if (k == "switch") return switch_statement();
      if (k == "case" || (k == "default" && (peek().is_punct(":") || peek().is_punct("->"))))
        return case_label();
      if (k == "return") {
        int n = node("return_statement", take());
        if (!at(";")) add(n, expression(Prec::comma));
        expect(";", "after return statement");
        return n;
      }
      if (k == "break" || k == "continue") {
        int n = node(k + "_statement", take());
        if (java() && at_ident()) add(n, leaf("identifier", take()));
        expect(";", "after " + k);
        return n;
      }
      if (k == "goto") {
        int n = node("goto_statement", take());
        add(n, leaf("statement_identifier", expect_ident()));
        expect(";", "after goto");
        return n;
      }
      if (k == "try") return try_statement();
      if (k == "throw" && java()) {
        int n = node("throw_statement", take());
        add(n, expression(Prec::comma));
        expect(";", "after throw");
        return n;
      }
      if (k == "typedef") return typedef_item();
      if (k == "using" && cpp()) return using_item();
      if (k == "static_assert") return expression_statement();
      if (java() && k == "assert") {
        int n = node("assert_statement", take());
        add(n, expression(Prec::ternary));
        if (accept(":")) add(n, expression(Prec::ternary));
        expect(";", "after assert");
        return n;
      }
      if (java() && k == "synchronized" && peek().is_punct("(")) {
        int n = node("synchronized_statement", take());
        add(n, parenthesized());
        add(n, compound_statement());
        return n;
      }
    }
    if (t.kind == TokenKind::identifier && peek().is_punct(":") && !peek(2).is_punct(":")) {
      int n = node("labeled_statement", t);
      add(n, leaf("statement_identifier", take()));
      take();
      if (at("}")) return n;
      add(n, statement());
      return n;
    }
    if (looks_like_declaration()) {
      if (java() && (at_kw("class") || at_kw("interface") || at_kw("enum")))
        return java_type_declaration({});
      return declaration(Scope::block);
    }
    return expression_statement();
  }

  int expression_statement() {
    Token start = cur();
    int e = expression(Prec::comma);
    // Function-like macros used as statement heads: rep(i, n) { ... }
    if (!java() && at_node(e).kind == "call_expression" &&
        (at("{") || (cur().kind == TokenKind::keyword && !at_kw("else")) ||
         (at_ident() && cur().line > start.line))) {
      int n = node("macro_statement", start);
      add(n, e);
      add(n, statement());
      return n;
    }
    int n = node("expression_statement", start);
    add(n, e);
    expect(";", "after expression");
    return n;
  }

  int parenthesized() {
    int n = node("parenthesized_expression", expect("("));
    add(n, expression(Prec::comma));
    expect(")");
    return n;
  }

  int condition_clause() {
    int n = node("condition_clause", expect("("));
    if (cpp() && looks_like_declaration()) {
      Specs s;
      specifiers(s, Scope::block);
      int decl = node("declaration");
      for (int x : s.nodes) add(decl, x);
      Decl d = declarator(DeclMode::named);
      mark_declared(d.name);
      int init = node("init_declarator");
      add(init, d.node);
      if (accept("=")) add(init, initializer());
      else if (at("{")) add(init, initializer_list());
      add(decl, init);
      add(n, decl);
      if (accept(";")) add(n, expression(Prec::comma));
    } else {
      add(n, expression(Prec::comma));
    }
    expect(")", "to close condition");
    return n;
  }

  int if_statement() {
    int n = node("if_statement", take());
    if (cpp()) accept_kw("constexpr");
    add(n, condition_clause());
    add(n, statement());
    if (at_kw("else")) {
      int e = node("else_clause", take());
      add(e, statement());
      add(n, e);
    }
    return n;
  }

  int while_statement() {
    int n = node("while_statement", take());
    add(n, condition_clause());
    add(n, statement());
    return n;
  }

  int do_statement() {
    int n = node("do_statement", take());
    add(n, statement());
    expect_kw("while");
    add(n, parenthesized());
    expect(";", "after do-while");
    return n;
  }

  int switch_statement() {
    int n = node("switch_statement", take());
    add(n, condition_clause());
    add(n, statement());
    return n;
  }

  int case_label() {
    Token t = take();
    int n = node("case_statement", t);
    if (t.text == "case") {
      do add(n, expression(Prec::ternary));
      while (java() && accept(","));
    }
    if (java() && accept("->")) {
      if (at("{")) add(n, compound_statement());
      else if (at_kw("throw")) add(n, statement());
      else {
        int e = node("expression_statement");
        add(e, expression(Prec::comma));
        expect(";");
        add(n, e);
      }
      return n;
    }
    expect(":", "after case label");
    return n;
  }

  int for_statement() {
    Token t = take();
    expect("(", "after for");
    // Range-based / enhanced for.
    {
      Mark m = mark();
      bool range = false;
      int n = -1;
      if (looks_like_declaration() || (cpp() && at_kw("auto"))) {
        try {
          Specs s;
          if (specifiers(s, Scope::block)) {
            Decl d = declarator(DeclMode::named);
            if (at(":")) {
              take();
              n = node(java() ? "enhanced_for_statement" : "for_range_loop", t);
              int decl = node("declaration");
              for (int x : s.nodes) add(decl, x);
              mark_declared(d.name);
              add(decl, d.node);
              add(n, decl);
              add(n, cpp() && at("{") ? initializer_list() : expression(Prec::comma));
              expect(")", "to close for header");
              add(n, statement());
              range = true;
            }
          }
        } catch (const ParseError&) {
          range = false;
        }
      }
      if (range) return n;
      reset(m);
    }
    int n = node("for_statement", t);
    if (at(";")) {
      take();
      add(n, node("empty_init"));
    } else if (looks_like_declaration()) {
      add(n, declaration(Scope::block));
    } else {
      add(n, expression(Prec::comma));
      expect(";", "in for header");
    }
    if (!at(";")) add(n, expression(Prec::comma));
    else add(n, node("empty_condition"));
    expect(";", "in for header");
    if (!at(")")) add(n, expression(Prec::comma));
    expect(")", "to close for header");
    add(n, statement());
    return n;
  }

  int catch_clause() {
    int n = node("catch_clause", take());
    expect("(");
    if (at("...")) {
      take();
    } else {
      int p = node(java() ? "catch_formal_parameter" : "parameter_declaration");
      Specs s;
      if (!specifiers(s, Scope::param)) fail("expected exception type");
      for (int x : s.nodes) add(p, x);
      while (java() && accept("|")) add(p, type_name());
      if (!at(")")) {
        Decl d = declarator(DeclMode::maybe_abstract);
        mark_declared(d.name);
        add(p, d.node);
      }
      add(n, p);
    }
    expect(")");
    add(n, compound_statement());
    return n;
  }

  int try_statement() {
    int n = node("try_statement", take());
    if (java() && at("(")) {
      int res = node("resource_specification", take());
      while (!at(")") && !at_end()) {
        int r = node("resource");
        Specs s;
        specifiers(s, Scope::block);
        for (int x : s.nodes) add(r, x);
        int id = leaf("identifier", expect_ident());
        mark_declared(id);
        add(r, id);
        expect("=");
        add(r, expression(Prec::assignment));
        add(res, r);
        if (!accept(";")) break;
      }
      expect(")");
      add(n, res);
    }
    add(n, compound_statement());
    while (at_kw("catch")) add(n, catch_clause());
    if (java() && at_kw("finally")) {
      int f = node("finally_clause", take());
      add(f, compound_statement());
      add(n, f);
    }
    return n;
  }

  // ---------------------------------------------------------------- expressions

  enum Prec : int {
    comma = 1,
    assignment,
    ternary,
    logical_or,
    logical_and,
    bit_or,
    bit_xor,
    bit_and,
    equality,
    relational,
    three_way,
    shift,
    additive,
    multiplicative,
    pointer_member,
  };

  struct BinOp {
    std::string text;
    int tokens = 0;
    int prec = 0;
  };

  BinOp binary_op() const {
    const Token& t = cur();
    if (t.kind == TokenKind::keyword) {
      if (java() && t.text == "instanceof") return {"instanceof", 1, relational};
      return {};
    }
    if (t.kind != TokenKind::punct) return {};
    const std::string& s = t.text;
    if (s == ">" && (cpp() || java())) {
      // Re-join split shift operators.
      std::string op = ">";
      int n = 1;
      while (peek(n).joined && (peek(n).text == ">" || peek(n).text == "=")) {
        op += peek(n).text;
        ++n;
        if (op.back() == '=') break;
      }
      if (no_gt_ > 0) return {};
      if (op == ">") return {">", 1, relational};
      if (op == ">>" || op == ">>>") return {op, n, shift};
      return {op, n, assignment};  // >>= or >>>=
    }
    if (s == ",") return {",", 1, comma};
    if (kAssignOps.count(s)) return {s, 1, assignment};
    if (s == "?") return {"?", 1, ternary};
    if (s == "||") return {s, 1, logical_or};
    if (s == "&&") return {s, 1, logical_and};
    if (s == "|") return {s, 1, bit_or};
    if (s == "^") return {s, 1, bit_xor};
    if (s == "&") return {s, 1, bit_and};
    if (s == "==" || s == "!=") return {s, 1, equality};
    if (s == "<" || s == "<=" || s == ">=" || s == ">") return {s, 1, relational};
    if (s == "<=>") return {s, 1, three_way};
    if (s == "<<" || s == ">>") return {s, 1, shift};
    if (s == "+" || s == "-") return {s, 1, additive};
    if (s == "*" || s == "/" || s == "%") return {s, 1, multiplicative};
    if (s == ".*" || s == "->*") return {s, 1, pointer_member};
    if (java() && s == "::") return {};
    return {};
  }

  int expression(int min_prec) {
    int left = unary();
    for (;;) {
      BinOp op = binary_op();
      if (op.tokens == 0 || op.prec < min_prec) break;
      Token t = cur();
      for (int i = 0; i < op.tokens; ++i) take();
      if (op.text == "?") {
        int n = node("conditional_expression", t);
        add(n, left);
        int saved = no_gt_;
        no_gt_ = 0;
        add(n, expression(Prec::comma));
        no_gt_ = saved;
        expect(":", "in conditional expression");
        add(n, expression(Prec::assignment));
        left = n;
        continue;
      }
      if (op.prec == assignment) {
        int n = node("assignment_expression", t, op.text);
        add(n, left);
        add(n, at("{") && !java() ? initializer_list() : expression(Prec::assignment));
        left = n;
        continue;
      }
      if (op.text == "instanceof") {
        int n = node("instanceof_expression", t);
        add(n, left);
        accept_kw("final");
        add(n, type_expression());
        if (at_ident()) {
          int id = leaf("identifier", take());
          mark_declared(id);
          add(n, id);
        }
        left = n;
        continue;
      }
      int n = node(op.text == "," ? "comma_expression" : "binary_expression", t, op.text);
      add(n, left);
      add(n, expression(op.prec + 1));
      left = n;
    }
    return left;
  }

  bool starts_operand(const Token& t) const {
    switch (t.kind) {
      case TokenKind::identifier:
      case TokenKind::number:
      case TokenKind::string:
      case TokenKind::character:
        return true;
      case TokenKind::keyword:
        return t.text == "sizeof" || t.text == "this" || t.text == "new" || t.text == "true" ||
               t.text == "false" || t.text == "nullptr" || t.text == "null" ||
               t.text == "super" || t.text == "static_cast" || t.text == "const_cast" ||
               t.text == "reinterpret_cast" || t.text == "dynamic_cast";
      case TokenKind::punct:
        return t.text == "(" || t.text == "!" || t.text == "~" || t.text == "::";
      default:
        return false;
    }
  }

  // Tries "( type )" at the current position; returns the cast expression or -1.
  int try_cast() {
    Mark m = mark();
    Token l = take();  // (
    bool keyword_type = is_primitive(cur()) || is_tag_keyword(cur()) || at_kw("const") ||
                        (cpp() && at("::"));
    bool known = at_ident() && type_names_.count(cur().text) > 0;
    int type = -1;
    try {
      type = type_expression();
    } catch (const ParseError&) {
      reset(m);
      return -1;
    }
    if (!at(")")) {
      reset(m);
      return -1;
    }
    const std::string& tk = at_node(type).kind;
    bool decorated = tk == "pointer_type" || tk == "template_type" || tk == "generic_type" ||
                     tk == "qualified_type" || tk == "scoped_type_identifier" ||
                     tk == "array_type";
    take();  // )
    const Token& next = cur();
    bool ok = false;
    if (keyword_type || decorated || known) {
      ok = starts_operand(next) || next.is_punct("{") ||
           ((keyword_type || known || !java()) &&
            (next.is_punct("-") || next.is_punct("+") || next.is_punct("*") ||
             next.is_punct("&") || next.is_punct("++") || next.is_punct("--")));
    } else if (java()) {
      // (Foo) x : reference cast when followed by an operand that cannot
      // continue a parenthesised expression.
      ok = next.kind == TokenKind::identifier || next.kind == TokenKind::string ||
           next.kind == TokenKind::number || next.is_punct("(") || next.is_punct("!") ||
           next.is_punct("~") || next.is_keyword("this") || next.is_keyword("new") ||
           next.is_keyword("super");
    } else if (!c()) {
      ok = false;
    }
    if (!ok) {
      reset(m);
      return -1;
    }
    if (!java() && at("{")) {
      int n = node("compound_literal_expression", l);
      add(n, type);
      add(n, initializer_list());
      return n;
    }
    int n = node("cast_expression", l);
    add(n, type);
    add(n, unary());
    return n;
  }

  int unary() {
    const Token& t = cur();
    if (t.kind == TokenKind::punct) {
      const std::string& s = t.text;
      if (s == "!" || s == "~" || s == "-" || s == "+") {
        int n = node("unary_expression", take(), s);
        add(n, unary());
        return n;
      }
      if (s == "++" || s == "--") {
        int n = node("update_expression", take(), s);
        add(n, unary());
        return n;
      }
      if ((s == "*" || s == "&") && !java()) {
        int n = node("pointer_expression", take(), s);
        add(n, unary());
        return n;
      }
      if (s == "&&" && cpp()) {  // label address / rvalue, rare
        int n = node("pointer_expression", take(), s);
        add(n, unary());
        return n;
      }
      if (s == "(") {
        int cast = try_cast();
        if (cast >= 0) return cast;
        if (java()) {
          int lam = try_java_lambda();
          if (lam >= 0) return postfix(lam);
        }
      }
    }
    if (t.kind == TokenKind::keyword) {
      const std::string& k = t.text;
      if (k == "sizeof" || k == "alignof" || (cpp() && k == "typeid")) {
        int n = node(k + "_expression", take());
        if (cpp() && at("...")) take();
        if (at("(")) {
          Mark m = mark();
          take();
          try {
            int ty = type_expression();
            if (at(")")) {
              take();
              add(n, ty);
              return postfix(n);
            }
          } catch (const ParseError&) {
          }
          reset(m);
        }
        add(n, unary());
        return n;
      }
      if (k == "new") return postfix(new_expression());
      if (k == "delete" && cpp()) {
        int n = node("delete_expression", take());
        if (at("[")) {
          take();
          expect("]");
        }
        add(n, unary());
        return n;
      }
      if (k == "throw" && cpp()) {
        int n = node("throw_expression", take());
        if (!at(";") && !at(")")) add(n, expression(Prec::assignment));
        return n;
      }
    }
    return postfix(primary());
  }

  int new_expression() {
    Token t = take();
    int n = node(java() ? "object_creation_expression" : "new_expression", t);
    if (java()) {
      if (at("<")) add(n, template_arguments());
      Specs s;
      int type;
      if (is_primitive(cur())) {
        type = leaf("primitive_type", take());
      } else {
        type = -1;
        // Parse the class name without consuming array brackets.
        Token start = cur();
        std::vector<int> parts;
        for (;;) {
          int id = leaf("type_identifier", expect_ident("after new"));
          if (at("<")) {
            int g = node("generic_type", start);
            add(g, id);
            add(g, template_arguments());
            id = g;
          }
          parts.push_back(id);
          if (at(".") && peek().kind == TokenKind::identifier) {
            take();
            continue;
          }
          break;
        }
        type = parts[0];
        if (parts.size() > 1) {
          type = node("scoped_type_identifier", start);
          for (int p : parts) add(type, p);
        }
      }
      add(n, type);
      if (at("[")) {
        at_node(n).kind = "array_creation_expression";
        while (at("[")) {
          Token l = take();
          int dim = node("dimensions_expr", l);
          if (!at("]")) add(dim, expression(Prec::comma));
          expect("]");
          add(n, dim);
        }
        if (at("{")) add(n, initializer_list());
        return n;
      }
      add(n, argument_list());
      if (at("{")) add(n, java_class_body(""));
      return n;
    }
    if (at("(")) {
      // placement new or parenthesised type
      Mark m = mark();
      try {
        add(n, argument_list());
      } catch (const ParseError&) {
        reset(m);
      }
    }
    Specs s;
    if (!specifiers(s, Scope::param)) fail("expected type after new");
    for (int x : s.nodes) add(n, x);
    while (at("*")) {
      take();
    }
    while (at("[")) {
      Token l = take();
      int dim = node("new_declarator", l);
      add(dim, expression(Prec::comma));
      expect("]");
      add(n, dim);
    }
    if (at("(")) add(n, argument_list());
    else if (at("{")) add(n, initializer_list());
    return n;
  }

  int try_java_lambda() {
    // ( params ) -> body
    Mark m = mark();
    Token l = take();
    int params = node("formal_parameters", l);
    try {
      while (!at(")")) {
        if (at_ident() && (peek().is_punct(",") || peek().is_punct(")"))) {
          int id = leaf("identifier", take());
          mark_declared(id);
          add(params, id);
        } else {
          add(params, parameter());
        }
        if (!accept(",")) break;
      }
      expect(")");
    } catch (const ParseError&) {
      reset(m);
      return -1;
    }
    if (!at("->")) {
      reset(m);
      return -1;
    }
    take();
    int n = node("lambda_expression", l);
    add(n, params);
    add(n, at("{") ? compound_statement() : expression(Prec::assignment));
    return n;
  }

  int argument_list() {
    int n = node("argument_list", expect("("));
    int saved = no_gt_;
    no_gt_ = 0;
    while (!at(")")) {
      if (at_end()) fail("expected ')' to close argument list");
      add(n, cpp() && at("{") ? initializer_list() : expression(Prec::assignment));
      accept("...");
      if (!accept(",")) break;
    }
    no_gt_ = saved;
    expect(")", "to close argument list");
    return n;
  }

  int postfix(int e) {
    for (;;) {
      if (at("(")) {
        int n = b_.add("call_expression", rightmost_name(e), at_node(e).line, at_node(e).column);
        add(n, e);
        add(n, argument_list());
        e = n;
        continue;
      }
      if (at("[")) {
        int n = node("subscript_expression", take());
        add(n, e);
        int saved = no_gt_;
        no_gt_ = 0;
        add(n, cpp() && at("{") ? initializer_list() : expression(Prec::comma));
        no_gt_ = saved;
        expect("]", "to close subscript");
        e = n;
        continue;
      }
      if (at(".") || (!java() && at("->"))) {
        Token op = take();
        int n = node("field_expression", op, op.text);
        add(n, e);
        if (java() && at("<")) add(n, template_arguments());
        if (cpp() && at_kw("template")) take();
        if (at_ident()) {
          add(n, leaf("field_identifier", take()));
        } else if (cpp() && at("~")) {
          Token tl = take();
          add(n, node("destructor_name", tl, "~" + expect_ident().text));
        } else if (java() && (at_kw("class") || at_kw("this") || at_kw("new") || at_kw("super"))) {
          if (at_kw("new")) {
            add(n, new_expression());
          } else {
            add(n, leaf("field_identifier", take()));
          }
        } else {
          fail("expected member name");
        }
        if (cpp() && at("<") && looks_like_template_call()) add(n, template_arguments());
        e = n;
        continue;
      }
      if (at("++") || at("--")) {
        Token op = take();
        int n = node("update_expression", op, op.text);
        add(n, e);
        e = n;
        continue;
      }
      if (java() && at("::")) {
        Token op = take();
        int n = node("method_reference", op);
        add(n, e);
        if (at_kw("new")) add(n, leaf("identifier", take()));
        else add(n, leaf("identifier", expect_ident()));
        e = n;
        continue;
      }
      if (cpp() && at("{") && brace_init_allowed(e)) {
        int n = node("compound_literal_expression");
        add(n, e);
        add(n, initializer_list());
        e = n;
        continue;
      }
      break;
    }
    return e;
  }

  bool brace_init_allowed(int e) const {
    const auto& n = b_.at(e);
    if (n.kind == "template_function" || n.kind == "template_type") return true;
    if (n.kind == "identifier" || n.kind == "qualified_identifier") {
      std::string name = rightmost_name(e);
      return type_names_.count(name) > 0;
    }
    return false;
  }

  // After a name, decides whether '<' opens template arguments.
  bool looks_like_template_call() {
    Mark m = mark();
    bool ok = false;
    try {
      template_arguments();
      ok = at("(") || at("::") || at("{");
    } catch (const ParseError&) {
      ok = false;
    }
    reset(m);
    return ok;
  }

  int primary() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::number:
        return leaf("number_literal", take());
      case TokenKind::character:
        return leaf("char_literal", take());
      case TokenKind::string: {
        Token first = take();
        if (cur().kind != TokenKind::string) return leaf("string_literal", first);
        int n = node("concatenated_string", first);
        add(n, leaf("string_literal", first));
        while (cur().kind == TokenKind::string) add(n, leaf("string_literal", take()));
        return n;
      }
      case TokenKind::keyword: {
        const std::string& k = t.text;
        if (k == "true" || k == "false") return leaf(k, take());
        if (k == "nullptr" || k == "null") return leaf("null", take());
        if (k == "this") return leaf("this", take());
        if (k == "super") return leaf("super", take());
        if (cpp() && (k == "static_cast" || k == "const_cast" || k == "reinterpret_cast" ||
                      k == "dynamic_cast")) {
          Token kw = take();
          int n = node("cast_expression", kw, kw.text);
          expect("<");
          add(n, type_expression());
          expect(">", "to close cast type");
          expect("(");
          add(n, expression(Prec::comma));
          expect(")");
          return n;
        }
        if (is_primitive(t)) {
          // Functional cast int(x), or Java int.class / int[]::new
          Token ty = take();
          int n = leaf("primitive_type", ty);
          if (java()) n = java_array_suffix(n);
          return n;
        }
        if (cpp() && k == "decltype") {
          Specs s;
          specifiers(s, Scope::param);
          return s.nodes.back();
        }
        if (k == "static_assert") return leaf("identifier", take());
        if (cpp() && k == "operator") {
          return declarator_name();
        }
        fail("unexpected keyword '" + k + "' in expression");
      }
      case TokenKind::punct: {
        if (t.text == "(") {
          int n = node("parenthesized_expression", take());
          int saved = no_gt_;
          no_gt_ = 0;
          add(n, expression(Prec::comma));
          no_gt_ = saved;
          expect(")", "to close parenthesis");
          return n;
        }
        if (cpp() && t.text == "[") return lambda();
        if (!java() && t.text == "{") return initializer_list();
        if (cpp() && t.text == "::") return name_expression();
        fail("expected expression");
      }
      case TokenKind::identifier: {
        if (java() && peek().is_punct("->")) {
          int n = node("lambda_expression", t);
          int id = leaf("identifier", take());
          mark_declared(id);
          add(n, id);
          take();
          add(n, at("{") ? compound_statement() : expression(Prec::assignment));
          return n;
        }
        return name_expression();
      }
      default:
        fail("expected expression");
    }
  }

  // identifier, a::b::c, name<T>(...)
  int name_expression() {
    Token start = cur();
    std::vector<int> parts;
    if (cpp() && at("::")) take();
    for (;;) {
      int id = leaf("identifier", expect_ident());
      if (cpp() && at("<") && looks_like_template_call()) {
        int tf = node("template_function", start);
        add(tf, id);
        add(tf, template_arguments());
        id = tf;
      }
      parts.push_back(id);
      if (cpp() && at("::") && (peek().kind == TokenKind::identifier)) {
        take();
        continue;
      }
      if (cpp() && at("::") && peek().is_punct("~")) {
        take();
        Token tl = take();
        parts.push_back(node("destructor_name", tl, "~" + expect_ident().text));
      }
      break;
    }
    if (parts.size() == 1) return parts[0];
    int n = node("qualified_identifier", start);
    for (int p : parts) add(n, p);
    return n;
  }

  int lambda() {
    int n = node("lambda_expression", cur());
    int cap = node("lambda_capture_specifier", take());
    while (!at("]") && !at_end()) {
      if (at_ident()) {
        int id = leaf("identifier", take());
        add(cap, id);
        if (accept("=")) add(cap, expression(Prec::assignment));
      } else if (at_kw("this")) {
        add(cap, leaf("this", take()));
      } else {
        add(cap, leaf("capture_default", take()));
      }
      accept(",");
    }
    expect("]", "to close lambda capture");
    add(n, cap);
    if (at("(")) {
      int params = parameter_list();
      add(n, params);
    }
    for (;;) {
      if (at_kw("mutable") || at_kw("constexpr")) {
        take();
        continue;
      }
      if (at_kw("noexcept")) {
        take();
        continue;
      }
      if (at("->")) {
        take();
        add(n, wrap("trailing_return_type", type_expression()));
        continue;
      }
      break;
    }
    add(n, compound_statement());
    return n;
  }

  int no_gt_ = 0;  // >0 while parsing a template argument expression
  std::set<std::string> type_names_ = {"string", "vector", "pair", "map", "set",
                                       "array", "tuple", "deque", "queue"};
  std::vector<std::string> class_stack_;
};

}  // namespace

SyntaxTree parse_cfamily(std::vector<Token> tokens, Language lang) {
  return CFamilyParser(std::move(tokens), lang).parse();
}

}  // namespace f2s::style::detail
