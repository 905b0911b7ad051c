#include "doctest.h"

#include "fusec/syntax.hpp"
#include "fusec/typecheck.hpp"
#include "support.hpp"

using namespace fusec;
using namespace fusec::testing;

namespace {

bool same_program(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const Decl& x = a.decls[i];
    const Decl& y = b.decls[i];
    if (x.kind != y.kind || x.name != y.name) return false;
    switch (x.kind) {
      case DeclKind::Functor:
        if (!functor_equal(x.functor, y.functor)) return false;
        break;
      case DeclKind::Alias:
        if (!type_equal(x.type, y.type)) return false;
        break;
      case DeclKind::Term:
        if (!type_equal(x.type, y.type) || !term_equal(x.body, y.body)) return false;
        break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("every corpus file survives print and parse") {
  for (const auto& path : corpus_files()) {
    CAPTURE(path);
    Program p = load(path);
    std::string once = print_program(p);
    Program again = parse_program(once);
    CHECK(same_program(p, again));
    CHECK(print_program(again) == once);
  }
}

TEST_CASE("operator precedence and associativity") {
  Program p = corpus("lists.fuse");
  auto t = parse_term("sum << dup << dup", p);
  REQUIRE(t->kind == TermKind::Compose);
  CHECK(t->kids[1]->kind == TermKind::Compose);

  auto a = parse_term("1 + 2 + 3", p);
  REQUIRE(a->kind == TermKind::Add);
  CHECK(a->kids[0]->kind == TermKind::Add);

  auto app = parse_term("cat (nil (), nil ())", p);
  REQUIRE(app->kind == TermKind::App);
  CHECK(app->kids[1]->kind == TermKind::Pair);

  auto tup = parse_term("(1, 2, 3)", p);
  REQUIRE(tup->kind == TermKind::Pair);
  CHECK(tup->kids[1]->kind == TermKind::Pair);

  auto ty = parse_type("Nat -> Nat -> Nat * Nat + 1", p);
  REQUIRE(ty->kind == TypeKind::Arrow);
  CHECK(ty->right->kind == TypeKind::Arrow);
  CHECK(ty->right->right->kind == TypeKind::Sum);
}

TEST_CASE("type printing uses the declared names") {
  Program p = corpus("sumzip.fuse");
  auto t = parse_type("1 + Nat * Nat * (Mu[1 + Nat * Nat * X])", p);
  CHECK(print_type(t, p) == "L PairList");
  CHECK(print_type(parse_type("Mu[1 + X]", p), p) == "Mu[1 + X]");
}

TEST_CASE("parse errors carry positions") {
  try {
    load(data_path("parse_error.fuse"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 5);
    CHECK(std::string(e.what()).find("line 5, column 1") == 0);
  }
  CHECK_THROWS_AS(parse_program("functor F = X -> Nat\n"), ParseError);
  CHECK_THROWS_AS(parse_program("def a : Nat = 1\ndef a : Nat = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_program("def a : Nat = $\n"), ParseError);
}

TEST_CASE("comments and empty files") {
  CHECK(parse_program("").decls.empty());
  CHECK(parse_program("-- nothing here\n").decls.empty());
  CHECK(parse_program("def a : Nat = 1 -- one\n").decls.size() == 1);
}

TEST_CASE("value literals at their types") {
  Program p = corpus("sumzip.fuse");
  auto pair_ty = parse_type("NatList * NatList", p);
  Value v = parse_value("([1, 2], [])", pair_ty);
  CHECK(print_value(v) == "([1, 2], [])");
  auto pl = parse_type("PairList", p);
  CHECK(print_value(parse_value("[(1, 2), (3, 4)]", pl)) == "[(1, 2), (3, 4)]");
  CHECK(print_value(parse_value("in inl ()", pl)) == "[]");
  CHECK(print_value(parse_value("inr 3", parse_type("1 + Nat", p))) == "inr 3");
  CHECK_THROWS(parse_value("[1, (2, 3)]", parse_type("NatList", p)));
  CHECK_THROWS(parse_value("(1, 2", pair_ty));
}

TEST_CASE("nest literals are read as syntax") {
  auto s = parse_value_syntax("{1; (2, 3)}");
  CHECK(s.kind == ValueSyntax::Kind::Nest);
  CHECK(s.items.size() == 2);
}
