#include "doctest.h"

#include "fusec/syntax.hpp"
#include "fusec/typecheck.hpp"
#include "support.hpp"

using namespace fusec;
using fusec::testing::corpus;
using fusec::testing::load;
using fusec::testing::data_path;

namespace {

TypeError::Kind kind_of(const Program& p) {
  try {
    typecheck_program(p);
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("expected a type error");
  return TypeError::Kind::TypeMismatch;
}

std::string type_of(const Program& p, const std::string& src) {
  return print_type(typecheck_term(p, {}, parse_term(src, p)), p);
}

const Program& lists() {
  static Program p = corpus("lists.fuse");
  return p;
}

}  // namespace

TEST_CASE("corpus signatures") {
  Program p = corpus("sumzip.fuse");
  auto types = typecheck_program(p);
  auto find = [&](const std::string& n) {
    for (const auto& t : types)
      if (t.name == n) return print_type(t.type, p);
    return std::string("?");
  };
  CHECK(find("zipW") == "NatList * NatList -> PairList");
  CHECK(find("zipW'") == "forall X. (L X -> X) -> NatList * NatList -> X");
  CHECK(find("composite") == "NatList * NatList -> Nat");

  Program co = corpus("sumzip_co.fuse");
  auto ct = typecheck_program(co);
  bool found = false;
  for (const auto& t : ct)
    if (t.name == "ssum'") {
      CHECK(print_type(t.type, co) == "forall X. (X -> L X) -> X -> Nat");
      found = true;
    }
  CHECK(found);
}

TEST_CASE("a build body returning the fixpoint is a mismatch at its path") {
  Program p = load(data_path("bad_build_body.fuse"));
  try {
    typecheck_program(p);
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == TypeError::Kind::TypeMismatch);
    CHECK(e.decl() == "bad");
    CHECK(e.path() == TermPath{0});
    CHECK(e.pos().line == 6);
  }
}

TEST_CASE("the carrier may not escape into the producer input") {
  CHECK(kind_of(load(data_path("escape.fuse"))) == TypeError::Kind::EscapedTypeVariable);
}

TEST_CASE("constructors, folds and unfolds") {
  const Program& p = lists();
  CHECK(type_of(p, "in[NL]") == "NL NatList -> NatList");
  CHECK(type_of(p, "unroll[NL]") == "NatList -> NL NatList");
  CHECK(type_of(p, "fold[NL] sum_alg") == "NatList -> Nat");
  CHECK(type_of(p, "unfold[NL] fromList") == "NatList -> NatStream");
  CHECK(type_of(p, "out[NL]") == "NatStream -> NL NatStream");
  CHECK(type_of(p, "sum << dup") == "NatList -> Nat");
  CHECK(type_of(p, "let x = 3 in (x, ())") == "Nat * 1");
}

TEST_CASE("rejections") {
  const Program& p = lists();
  auto kind = [&](const std::string& src) {
    try {
      typecheck_term(p, {}, parse_term(src, p));
    } catch (const TypeError& e) {
      return std::string(to_string(e.kind()));
    }
    return std::string("ok");
  };
  CHECK(kind("1 + ()") == "TypeMismatch");
  CHECK(kind("3 4") == "NotAFunction");
  CHECK(kind("y") == "UnboundVariable");
  CHECK(kind("sum @[Nat]") == "NotPolymorphic");
  try {
    typecheck_term(p, {}, tm::lam("x", ty::var("Y"), tm::var("x")));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == TypeError::Kind::UnboundTypeVariable);
  }
  CHECK(kind("fold[NL] sum") == "TypeMismatch");
  CHECK(kind("sum << sum") == "TypeMismatch");
}

TEST_CASE("declarations only see what precedes them") {
  auto p = parse_program("def a : Nat = 1\ndef b : Nat = a + 1\n");
  CHECK(typecheck_program(p).size() == 2);
  CHECK(kind_of(parse_program("def b : Nat = a\ndef a : Nat = 1\n")) == TypeError::Kind::UnboundVariable);
}

TEST_CASE("contexts below a path") {
  const Program& p = lists();
  Term t = parse_term("\\l : NatList. case unroll[NL] l of inl u => 0 | inr c => fst c", p);
  TypeChecker tc(p);
  auto ctx = tc.context_at({}, t, {0, 2});
  REQUIRE(ctx.lookup("c"));
  CHECK(print_type(*ctx.lookup("c"), p) == "Nat * NatList");
  CHECK(ctx.lookup("l"));
  CHECK_FALSE(ctx.lookup("u"));
}

TEST_CASE("pairing, folds over pairs and an empty producer") {
  Program p = corpus("sumzip.fuse");
  CHECK(type_of(p, "\\a : Nat. (a + 1, (a, ()))") == "Nat -> Nat * Nat * 1");
  CHECK(type_of(p, "fold[L] ssum_alg") == "PairList -> Nat");
  CHECK(type_of(p, "build[L] (/\\X. \\c : L X -> X. \\a : 1. c (inl[L X] ()))") == "1 -> PairList");
}
