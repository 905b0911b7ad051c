#include "fusec/syntax.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <utility>

namespace fusec {

ParseError::ParseError(SourcePos pos, const std::string& message)
    : Error("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " + message),
      pos_(pos) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t num = 0;
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
  static const std::array<std::string_view, 4> kLong = {"/\\", "=>", "->", "<<"};
  static const std::string_view kShort = "\\.:=+*()[],|@{};";
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.pos = {line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::uint64_t n = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        std::uint64_t d = static_cast<std::uint64_t>(src[j] - '0');
        if (n > (UINT64_MAX - d) / 10) throw ParseError(tok.pos, "numeric literal out of range");
        n = n * 10 + d;
        ++j;
      }
      tok.kind = Tok::Number;
      tok.num = n;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (auto sym : kLong) {
        if (src.substr(i, sym.size()) == sym) {
          tok.kind = Tok::Sym;
          tok.text = std::string(sym);
          advance(sym.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kShort.find(c) == std::string_view::npos)
          throw ParseError(tok.pos, std::string("unexpected character '") + c + "'");
        tok.kind = Tok::Sym;
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "functor", "type", "def",  "forall", "Mu",    "Nu",     "Unit",  "Nat",     "let",
      "in",      "case", "of",   "inl",    "inr",   "fst",    "snd",   "fold",    "unfold",
      "build",   "cobuild", "out", "unroll",
  };
  return kw;
}

bool is_keyword(const std::string& s) { return keywords().count(s) > 0; }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Program& program, std::size_t visible)
      : toks_(std::move(tokens)), program_(program), visible_(visible) {}

  void set_visible(std::size_t v) { visible_ = v; }
  bool done() const { return peek().kind == Tok::End; }
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  bool at_sym(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Sym && t.text == s;
  }
  bool at_kw(std::string_view s) const {
    const Token& t = peek();
    return t.kind == Tok::Ident && t.text == s;
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().pos, msg); }
  std::string describe(const Token& t) const {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }
  void expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
    next();
  }
  void expect_kw(std::string_view s) {
    if (!at_kw(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
    next();
  }
  std::string expect_name(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail(std::string("expected ") + what + ", found " + describe(t));
    next();
    return t.text;
  }

  // --- types

  bool has_tyvar(const std::string& n) const {
    return std::find(tyvars_.begin(), tyvars_.end(), n) != tyvars_.end();
  }

  TypeExpr type() {
    if (at_kw("forall")) {
      next();
      std::vector<std::string> names;
      do names.push_back(expect_name("a type variable"));
      while (!at_sym("."));
      expect_sym(".");
      for (const auto& n : names) tyvars_.push_back(n);
      TypeExpr body = type();
      tyvars_.resize(tyvars_.size() - names.size());
      for (auto it = names.rbegin(); it != names.rend(); ++it) body = ty::forall(*it, body);
      return body;
    }
    TypeExpr l = sum_type();
    if (at_sym("->")) {
      next();
      return ty::arrow(l, type());
    }
    return l;
  }

  TypeExpr sum_type() {
    TypeExpr l = prod_type();
    if (at_sym("+")) {
      next();
      return ty::sum(l, sum_type());
    }
    return l;
  }

  TypeExpr prod_type() {
    TypeExpr l = app_type();
    if (at_sym("*")) {
      next();
      return ty::prod(l, prod_type());
    }
    return l;
  }

  TypeExpr app_type() {
    if (at_kw("Mu") || at_kw("Nu")) {
      bool mu = next().text == "Mu";
      FunctorExpr f = functor_atom();
      return mu ? ty::mu(f) : ty::nu(f);
    }
    const Token& t = peek();
    if (t.kind == Tok::Ident && !is_keyword(t.text) && !has_tyvar(t.text) &&
        !program_.find_alias(t.text, visible_)) {
      if (const Decl* d = program_.find_functor(t.text, visible_)) {
        next();
        return functor_apply(d->functor, atom_type());
      }
    }
    return atom_type();
  }

  TypeExpr atom_type() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      if (t.num != 1) fail("only 1 is a type literal");
      next();
      return ty::unit();
    }
    if (at_sym("(")) {
      next();
      TypeExpr inner = type();
      expect_sym(")");
      return inner;
    }
    if (t.kind != Tok::Ident) fail("expected a type, found " + describe(t));
    if (t.text == "Unit") {
      next();
      return ty::unit();
    }
    if (t.text == "Nat") {
      next();
      return ty::nat();
    }
    if (is_keyword(t.text)) fail("expected a type, found " + describe(t));
    if (has_tyvar(t.text)) {
      next();
      return ty::var(t.text);
    }
    if (const Decl* d = program_.find_alias(t.text, visible_)) {
      next();
      return d->type;
    }
    if (program_.find_functor(t.text, visible_)) fail("functor " + t.text + " needs an argument here");
    fail("unknown type name " + t.text);
  }

  // Body of a functor with X as the hole.
  FunctorExpr functor_body() {
    SourcePos at = peek().pos;
    tyvars_.push_back("X");
    TypeExpr body = type();
    tyvars_.pop_back();
    try {
      return functor_from_type(body, "X");
    } catch (const PositivityError& e) {
      throw ParseError(at, std::string(e.what()) + " (at " + e.path() + ")");
    }
  }

  // NAME or [body]
  FunctorExpr functor_atom() {
    if (at_sym("[")) return bracket_functor();
    const Token& t = peek();
    if (t.kind == Tok::Ident)
      if (const Decl* d = program_.find_functor(t.text, visible_)) {
        next();
        return d->functor;
      }
    fail("expected a functor, found " + describe(t));
  }

  FunctorExpr bracket_functor() {
    expect_sym("[");
    FunctorExpr f;
    const Token& t = peek();
    const Decl* named = t.kind == Tok::Ident ? program_.find_functor(t.text, visible_) : nullptr;
    if (named && at_sym("]", 1)) {
      next();
      f = named->functor;
    } else {
      f = functor_body();
    }
    expect_sym("]");
    return f;
  }

  TypeExpr bracket_type() {
    expect_sym("[");
    TypeExpr t = type();
    expect_sym("]");
    return t;
  }

  // --- terms

  static Term at(SourcePos pos, Term t) { return with_pos(t, pos); }

  Term term() {
    SourcePos p = peek().pos;
    if (at_sym("\\")) {
      next();
      std::string x = expect_name("a variable");
      expect_sym(":");
      TypeExpr ann = type();
      expect_sym(".");
      return at(p, tm::lam(x, ann, term()));
    }
    if (at_sym("/\\")) {
      next();
      std::string a = expect_name("a type variable");
      expect_sym(".");
      tyvars_.push_back(a);
      Term body = term();
      tyvars_.pop_back();
      return at(p, tm::tylam(a, body));
    }
    if (at_kw("let")) {
      next();
      std::string x = expect_name("a variable");
      expect_sym("=");
      Term bound = term();
      expect_kw("in");
      return at(p, tm::let(x, bound, term()));
    }
    if (at_kw("case")) {
      next();
      Term scrut = term();
      expect_kw("of");
      expect_kw("inl");
      std::string x = expect_name("a variable");
      expect_sym("=>");
      Term l = term();
      expect_sym("|");
      expect_kw("inr");
      std::string y = expect_name("a variable");
      expect_sym("=>");
      Term r = term();
      return at(p, tm::case_of(scrut, x, l, y, r));
    }
    Term l = add_term();
    if (at_sym("<<")) {
      next();
      return at(p, tm::compose(l, term()));
    }
    return l;
  }

  Term add_term() {
    SourcePos p = peek().pos;
    Term l = app_term();
    while (at_sym("+")) {
      next();
      l = at(p, tm::add(l, app_term()));
    }
    return l;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) return !is_keyword(t.text);
    return at_sym("(");
  }

  bool starts_prefix() const {
    if (starts_atom()) return true;
    const Token& t = peek();
    static const char* const kPrefix[] = {"fst", "snd",    "inl",  "inr",   "in",    "out",
                                          "unroll", "fold", "unfold", "build", "cobuild"};
    if (t.kind != Tok::Ident) return false;
    for (const char* k : kPrefix)
      if (t.text == k) return true;
    return false;
  }

  Term app_term() {
    SourcePos p = peek().pos;
    Term head = prefix_term();
    while (starts_atom()) head = at(p, tm::app(head, postfix_term()));
    return head;
  }

  Term prefix_term() {
    SourcePos p = peek().pos;
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      const std::string& k = t.text;
      if (k == "fst" || k == "snd") {
        next();
        Term e = prefix_term();
        return at(p, k == "fst" ? tm::fst(e) : tm::snd(e));
      }
      if (k == "inl" || k == "inr") {
        next();
        if (!at_sym("[")) fail(k + " needs its sum type, as in " + k + "[A + B]");
        TypeExpr s = bracket_type();
        Term e = prefix_term();
        return at(p, k == "inl" ? tm::inl(s, e) : tm::inr(s, e));
      }
      if (k == "in" || k == "out" || k == "unroll" || k == "fold" || k == "unfold" || k == "build" ||
          k == "cobuild") {
        std::string kw = k;
        next();
        if (!at_sym("[")) fail(kw + " needs its functor, as in " + kw + "[F]");
        FunctorExpr f = bracket_functor();
        if ((kw == "in" || kw == "out" || kw == "unroll") && !starts_prefix()) {
          // a bare constructor or destructor stands for its eta-expansion
          TypeExpr arg = kw == "in" ? functor_apply(f, ty::mu(f)) : kw == "out" ? ty::nu(f) : ty::mu(f);
          Term x = at(p, tm::var("x"));
          Term body = kw == "in" ? tm::in(f, x) : kw == "out" ? tm::out(f, x) : tm::unroll(f, x);
          return at(p, tm::lam("x", arg, at(p, body)));
        }
        Term e = prefix_term();
        Term r;
        if (kw == "in") r = tm::in(f, e);
        else if (kw == "out") r = tm::out(f, e);
        else if (kw == "unroll") r = tm::unroll(f, e);
        else if (kw == "fold") r = tm::cata(f, e);
        else if (kw == "unfold") r = tm::ana(f, e);
        else if (kw == "build") r = tm::build(f, e);
        else r = tm::cobuild(f, e);
        return at(p, r);
      }
    }
    return postfix_term();
  }

  Term postfix_term() {
    SourcePos p = peek().pos;
    Term e = atom_term();
    while (at_sym("@")) {
      next();
      e = at(p, tm::tyapp(e, bracket_type()));
    }
    return e;
  }

  Term atom_term() {
    SourcePos p = peek().pos;
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return at(p, tm::nat(t.num));
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      next();
      return at(p, tm::var(t.text));
    }
    if (at_sym("(")) {
      next();
      if (at_sym(")")) {
        next();
        return at(p, tm::unit());
      }
      std::vector<Term> items{term()};
      while (at_sym(",")) {
        next();
        items.push_back(term());
      }
      expect_sym(")");
      Term r = items.back();
      for (std::size_t i = items.size() - 1; i-- > 0;) r = at(p, tm::pair(items[i], r));
      return r;
    }
    fail("expected a term, found " + describe(t));
  }

  // --- values

  ValueSyntax value() {
    ValueSyntax v;
    v.pos = peek().pos;
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      v.kind = ValueSyntax::Kind::Nat;
      v.nat = t.num;
      return v;
    }
    if (at_kw("inl") || at_kw("inr") || at_kw("in")) {
      std::string k = next().text;
      v.kind = k == "inl" ? ValueSyntax::Kind::Inl : k == "inr" ? ValueSyntax::Kind::Inr : ValueSyntax::Kind::In;
      v.items.push_back(value());
      return v;
    }
    auto seq = [&](std::string_view close, std::string_view sep) {
      std::vector<ValueSyntax> items;
      if (at_sym(close)) {
        next();
        return items;
      }
      items.push_back(value());
      while (at_sym(sep)) {
        next();
        items.push_back(value());
      }
      expect_sym(close);
      return items;
    };
    if (at_sym("(")) {
      next();
      v.items = seq(")", ",");
      if (v.items.empty()) {
        v.kind = ValueSyntax::Kind::Unit;
      } else if (v.items.size() == 1) {
        ValueSyntax inner = std::move(v.items[0]);
        return inner;
      } else {
        v.kind = ValueSyntax::Kind::Tuple;
      }
      return v;
    }
    if (at_sym("[")) {
      next();
      v.kind = ValueSyntax::Kind::List;
      v.items = seq("]", ",");
      return v;
    }
    if (at_sym("{")) {
      next();
      v.kind = ValueSyntax::Kind::Nest;
      v.items = seq("}", ";");
      return v;
    }
    fail("expected a value, found " + describe(t));
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Program& program_;
  std::size_t visible_;
  std::vector<std::string> tyvars_;
};

// ---------------------------------------------------------------------------
// Printer

class Printer {
 public:
  Printer(const Program* program, std::size_t visible) : program_(program), visible_(visible) {}

  std::string type(const TypeExpr& t, int level) {
    if (std::string abbrev; abbreviate(t, level, abbrev)) return abbrev;
    switch (t->kind) {
      case TypeKind::Unit:
        return "1";
      case TypeKind::Nat:
        return "Nat";
      case TypeKind::Var:
        return t->name;
      case TypeKind::Arrow:
        return wrap(level > 1, type(t->left, 2) + " -> " + type(t->right, 1));
      case TypeKind::Sum:
        return wrap(level > 2, type(t->left, 3) + " + " + type(t->right, 2));
      case TypeKind::Prod:
        return wrap(level > 3, type(t->left, 4) + " * " + type(t->right, 3));
      case TypeKind::Mu:
      case TypeKind::Nu: {
        std::string ref = functor_ref(t->functor);
        std::string head = t->kind == TypeKind::Mu ? "Mu" : "Nu";
        return wrap(level > 4, ref.front() == '[' ? head + ref : head + " " + ref);
      }
      case TypeKind::Forall: {
        tyvars_.push_back(t->name);
        std::string s = "forall " + t->name + ". " + type(t->left, 0);
        tyvars_.pop_back();
        return wrap(level > 0, s);
      }
    }
    return "?";
  }

  std::string functor_body(const FunctorExpr& f) {
    tyvars_.push_back("X");
    ++in_functor_body_;
    std::string s = type(functor_apply(f, ty::var("X")), 0);
    --in_functor_body_;
    tyvars_.pop_back();
    return s;
  }

  // NAME or [body]
  std::string functor_ref(const FunctorExpr& f) {
    if (program_) {
      for (std::size_t i = std::min(visible_, program_->decls.size()); i-- > 0;) {
        const Decl& d = program_->decls[i];
        if (d.kind == DeclKind::Functor && !shadowed(d.name) && functor_equal(d.functor, f)) {
          if (resolves_to_functor(d.name, i)) return d.name;
          break;
        }
      }
    }
    return "[" + functor_body(f) + "]";
  }

  std::string term(const Term& t, int level) {
    const auto& k = t->kids;
    switch (t->kind) {
      case TermKind::Var:
        return t->name;
      case TermKind::NatLit:
        return std::to_string(t->nat);
      case TermKind::Unit:
        return "()";
      case TermKind::Pair: {
        std::string s = "(" + term(k[0], 0);
        Term rest = k[1];
        while (rest->kind == TermKind::Pair) {
          s += ", " + term(rest->kids[0], 0);
          rest = rest->kids[1];
        }
        return s + ", " + term(rest, 0) + ")";
      }
      case TermKind::Lam:
        return wrap(level > 0, "\\" + t->name + " : " + type(t->type, 0) + ". " + term(k[0], 0));
      case TermKind::TyLam: {
        tyvars_.push_back(t->name);
        std::string s = "/\\" + t->name + ". " + term(k[0], 0);
        tyvars_.pop_back();
        return wrap(level > 0, s);
      }
      case TermKind::Let:
        return wrap(level > 0, "let " + t->name + " = " + term(k[0], 0) + " in " + term(k[1], 0));
      case TermKind::Case:
        return wrap(level > 0, "case " + term(k[0], 1) + " of inl " + t->name + " => " + term(k[1], 1) +
                                   " | inr " + t->name2 + " => " + term(k[2], 0));
      case TermKind::Compose:
        return wrap(level > 1, term(k[0], 2) + " << " + term(k[1], 1));
      case TermKind::Add:
        return wrap(level > 2, term(k[0], 2) + " + " + term(k[1], 3));
      case TermKind::App:
        return wrap(level > 3, term(k[0], 3) + " " + term(k[1], 5));
      case TermKind::Proj1:
        return wrap(level > 4, "fst " + term(k[0], 5));
      case TermKind::Proj2:
        return wrap(level > 4, "snd " + term(k[0], 5));
      case TermKind::Inl:
      case TermKind::Inr:
        return wrap(level > 4, std::string(t->kind == TermKind::Inl ? "inl" : "inr") + "[" + type(t->type, 0) +
                                   "] " + term(k[0], 5));
      case TermKind::InMu:
        return prefix("in", t, level);
      case TermKind::OutNu:
        return prefix("out", t, level);
      case TermKind::Unroll:
        return prefix("unroll", t, level);
      case TermKind::Cata:
        return prefix("fold", t, level);
      case TermKind::Ana:
        return prefix("unfold", t, level);
      case TermKind::Build:
        return prefix("build", t, level);
      case TermKind::Cobuild:
        return prefix("cobuild", t, level);
      case TermKind::TyApp:
        return term(k[0], 5) + " @[" + type(t->type, 0) + "]";
    }
    return "?";
  }

  // Binders and case splits over several lines; everything else inline.
  std::string block(const Term& t, int indent) {
    const auto& k = t->kids;
    std::string pad(indent, ' ');
    auto body = [&](const Term& b) -> std::string {
      if (b->kind == TermKind::Lam || b->kind == TermKind::TyLam) return " " + block(b, indent);
      if (b->kind == TermKind::Case) return "\n" + pad + "  " + block(b, indent + 2);
      return " " + term(b, 0);
    };
    switch (t->kind) {
      case TermKind::Lam:
        return "\\" + t->name + " : " + type(t->type, 0) + "." + body(k[0]);
      case TermKind::TyLam: {
        tyvars_.push_back(t->name);
        std::string s = "/\\" + t->name + "." + body(k[0]);
        tyvars_.pop_back();
        return s;
      }
      case TermKind::Case: {
        std::string s = "case " + term(k[0], 1) + " of\n" + pad + "  inl " + t->name + " => " + term(k[1], 1) +
                        "\n" + pad + "| inr " + t->name2 + " =>";
        if (k[2]->kind == TermKind::Case) return s + "\n" + pad + "  " + block(k[2], indent + 2);
        return s + " " + term(k[2], 0);
      }
      default:
        return term(t, 0);
    }
  }

 private:
  static std::string wrap(bool paren, std::string s) { return paren ? "(" + s + ")" : s; }

  std::string prefix(const char* kw, const Term& t, int level) {
    std::string ref = functor_ref(t->functor);
    if (ref.front() != '[') ref = "[" + ref + "]";
    return wrap(level > 4, std::string(kw) + ref + " " + term(t->kids[0], 5));
  }

  bool shadowed(const std::string& name) const {
    return std::find(tyvars_.begin(), tyvars_.end(), name) != tyvars_.end();
  }

  // The parser reads an identifier as an alias before a functor; a functor
  // name hidden behind a later alias of the same name cannot be printed.
  bool resolves_to_functor(const std::string& name, std::size_t index) const {
    const Decl* alias = program_->find_alias(name, visible_);
    return !alias || program_->index_of(name) == index;
  }

  bool abbreviate(const TypeExpr& t, int level, std::string& out) {
    if (!program_ || t->kind == TypeKind::Var || t->kind == TypeKind::Unit || t->kind == TypeKind::Nat) return false;
    std::size_t n = std::min(visible_, program_->decls.size());
    for (std::size_t i = n; i-- > 0;) {
      const Decl& d = program_->decls[i];
      if (d.kind == DeclKind::Alias && !shadowed(d.name) && type_equal(d.type, t) &&
          program_->find_alias(d.name, visible_) == &d) {
        out = d.name;
        return true;
      }
    }
    // Functor bodies are spelled out around their own hole.
    if (in_functor_body_ && occurs_free(t, "X")) return false;
    for (std::size_t i = n; i-- > 0;) {
      const Decl& d = program_->decls[i];
      if (d.kind != DeclKind::Functor || shadowed(d.name) || d.functor->kind == FunctorKind::Id ||
          !functor_has_hole(d.functor) || program_->find_alias(d.name, visible_))
        continue;
      if (program_->find_functor(d.name, visible_) != &d) continue;
      if (auto m = functor_match(d.functor, t)) {
        out = wrap(level > 4, d.name + " " + type(*m, 5));
        return true;
      }
    }
    return false;
  }

  const Program* program_;
  std::size_t visible_;
  std::vector<std::string> tyvars_;
  int in_functor_body_ = 0;
};

Program& empty_program() {
  static Program p;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(const TypeExpr& t) { return Printer(nullptr, 0).type(t, 0); }
std::string to_string(const FunctorExpr& f) { return Printer(nullptr, 0).functor_body(f); }
std::string to_string(const BifunctorExpr& w) {
  return Printer(nullptr, 0).type(bifunctor_to_type(w, ty::var("Y"), ty::var("X")), 0);
}

Program parse_program(std::string_view source) {
  Program program;
  Parser p(lex(source), program, 0);
  std::set<std::string> names;
  while (!p.done()) {
    p.set_visible(program.decls.size());
    Decl d;
    d.pos = p.peek().pos;
    if (p.at_kw("functor")) {
      p.next();
      d.kind = DeclKind::Functor;
      d.name = p.expect_name("a functor name");
      if (d.name == "X") throw ParseError(d.pos, "X is reserved for the functor hole");
      p.expect_sym("=");
      d.functor = p.functor_body();
    } else if (p.at_kw("type")) {
      p.next();
      d.kind = DeclKind::Alias;
      d.name = p.expect_name("a type name");
      p.expect_sym("=");
      d.type = p.type();
    } else if (p.at_kw("def")) {
      p.next();
      d.kind = DeclKind::Term;
      d.name = p.expect_name("a term name");
      p.expect_sym(":");
      d.type = p.type();
      p.expect_sym("=");
      d.body = p.term();
    } else {
      p.fail("expected a declaration (functor, type or def), found " + p.describe(p.peek()));
    }
    if (!names.insert(d.name).second) throw ParseError(d.pos, "duplicate declaration of " + d.name);
    program.decls.push_back(std::move(d));
  }
  std::set<std::string> globals;
  for (const auto& n : program.term_names()) globals.insert(n);
  for (auto& d : program.decls)
    if (d.kind == DeclKind::Term) d.body = alpha_normalize(d.body, globals);
  return program;
}

TypeExpr parse_type(std::string_view source, const Program& program, std::size_t visible) {
  Parser p(lex(source), program, visible);
  TypeExpr t = p.type();
  if (!p.done()) p.fail("unexpected " + p.describe(p.peek()) + " after type");
  return t;
}

Term parse_term(std::string_view source, const Program& program, std::size_t visible) {
  Parser p(lex(source), program, visible);
  Term t = p.term();
  if (!p.done()) p.fail("unexpected " + p.describe(p.peek()) + " after term");
  return t;
}

std::string print_type(const TypeExpr& t, const Program& program, std::size_t visible) {
  return Printer(&program, visible).type(t, 0);
}

std::string print_term(const Term& t, const Program& program, std::size_t visible) {
  return Printer(&program, visible).term(t, 0);
}

std::string print_program(const Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.decls.size(); ++i) {
    const Decl& d = program.decls[i];
    Printer pr(&program, i);
    if (i) out += '\n';
    switch (d.kind) {
      case DeclKind::Functor:
        out += "functor " + d.name + " = " + pr.functor_body(d.functor) + "\n";
        break;
      case DeclKind::Alias:
        out += "type " + d.name + " = " + pr.type(d.type, 0) + "\n";
        break;
      case DeclKind::Term:
      {
        std::string body = pr.term(d.body, 0);
        if (body.size() > 96) body = pr.block(d.body, 2);
        out += "def " + d.name + " : " + pr.type(d.type, 0) + " =\n  " + body + "\n";
      }
        break;
    }
  }
  return out;
}

ValueSyntax parse_value_syntax(std::string_view source) {
  Parser p(lex(source), empty_program(), 0);
  ValueSyntax v = p.value();
  if (!p.done()) p.fail("unexpected " + p.describe(p.peek()) + " after value");
  return v;
}

namespace {

[[noreturn]] void mismatch(const ValueSyntax& s, const TypeExpr& t) {
  throw ParseError(s.pos, "literal does not match type " + to_string(t));
}

}  // namespace

Value value_from_syntax(const ValueSyntax& s, const TypeExpr& type) {
  using K = ValueSyntax::Kind;
  switch (type->kind) {
    case TypeKind::Unit:
      if (s.kind != K::Unit) mismatch(s, type);
      return val::unit();
    case TypeKind::Nat:
      if (s.kind != K::Nat) mismatch(s, type);
      return val::nat(s.nat);
    case TypeKind::Prod: {
      if (s.kind != K::Tuple || s.items.size() < 2) mismatch(s, type);
      Value a = value_from_syntax(s.items[0], type->left);
      if (s.items.size() == 2) return val::pair(a, value_from_syntax(s.items[1], type->right));
      ValueSyntax rest = s;
      rest.items.erase(rest.items.begin());
      return val::pair(a, value_from_syntax(rest, type->right));
    }
    case TypeKind::Sum:
      if (s.kind == K::Inl) return val::inl(value_from_syntax(s.items[0], type->left));
      if (s.kind == K::Inr) return val::inr(value_from_syntax(s.items[0], type->right));
      mismatch(s, type);
    case TypeKind::Mu: {
      const FunctorExpr& f = type->functor;
      if (s.kind == K::In) return val::mu(f, value_from_syntax(s.items[0], functor_apply(f, type)));
      auto fields = list_fields(f);
      if (s.kind != K::List || !fields) mismatch(s, type);
      TypeExpr elem = fields->back();
      for (std::size_t i = fields->size() - 1; i-- > 0;) elem = ty::prod((*fields)[i], elem);
      Value list = val::mu(f, val::inl(val::unit()));
      for (auto it = s.items.rbegin(); it != s.items.rend(); ++it) {
        Value e = value_from_syntax(*it, elem);
        std::vector<Value> parts;
        for (std::size_t i = 0; i + 1 < fields->size(); ++i) {
          parts.push_back(e->a);
          e = e->b;
        }
        Value cell = val::pair(e, list);
        for (auto p = parts.rbegin(); p != parts.rend(); ++p) cell = val::pair(*p, cell);
        list = val::mu(f, val::inr(cell));
      }
      return list;
    }
    default:
      throw UnsupportedError("no literal syntax for values of type " + to_string(type));
  }
}

Value parse_value(std::string_view source, const TypeExpr& type) {
  return value_from_syntax(parse_value_syntax(source), type);
}

}  // namespace fusec
