#include "doctest.h"

#include "fusec/type.hpp"

using namespace fusec;

namespace {

// 1 + Nat * Nat * X
FunctorExpr pair_list_functor() {
  return fn::sum(fn::constant(ty::unit()),
                 fn::prod(fn::constant(ty::nat()), fn::prod(fn::constant(ty::nat()), fn::id())));
}

}  // namespace

TEST_CASE("hole-free functor nodes collapse into constants") {
  auto f = fn::prod(fn::constant(ty::nat()), fn::constant(ty::unit()));
  CHECK(f->kind == FunctorKind::Const);
  CHECK(type_equal(f->constant, ty::prod(ty::nat(), ty::unit())));
  CHECK(functor_equal(fn::sum(fn::constant(ty::unit()), fn::constant(ty::nat())),
                      fn::constant(ty::sum(ty::unit(), ty::nat()))));
}

TEST_CASE("functor keys and rendering") {
  auto l = pair_list_functor();
  CHECK(to_string(l) == "1 + Nat * Nat * X");
  CHECK(l->key == pair_list_functor()->key);
  CHECK(l->key != fn::sum(fn::constant(ty::unit()), fn::prod(fn::constant(ty::nat()), fn::id()))->key);
}

TEST_CASE("functor application and matching invert each other") {
  auto l = pair_list_functor();
  auto carrier = ty::prod(ty::nat(), ty::unit());
  auto applied = functor_apply(l, carrier);
  CHECK(to_string(applied) == "1 + Nat * Nat * Nat * 1");
  auto m = functor_match(l, applied);
  REQUIRE(m);
  CHECK(type_equal(*m, carrier));
  CHECK_FALSE(functor_match(l, ty::nat()));
  // Two different fillers in one type do not match.
  auto mixed = ty::prod(ty::var("A"), ty::var("B"));
  CHECK_FALSE(functor_match(fn::prod(fn::id(), fn::id()), mixed));
}

TEST_CASE("list-shaped functors expose their fields") {
  auto fields = list_fields(pair_list_functor());
  REQUIRE(fields);
  REQUIRE(fields->size() == 2);
  CHECK(type_equal((*fields)[0], ty::nat()));
  CHECK_FALSE(list_fields(fn::sum(fn::constant(ty::unit()), fn::prod(fn::id(), fn::id()))));
}

TEST_CASE("alpha-equivalence of quantified types") {
  auto a = ty::forall("X", ty::arrow(ty::var("X"), ty::var("X")));
  auto b = ty::forall("Y", ty::arrow(ty::var("Y"), ty::var("Y")));
  CHECK(type_equal(a, b));
  CHECK_FALSE(type_equal(a, ty::forall("Y", ty::arrow(ty::var("Y"), ty::var("X")))));
}

TEST_CASE("substitution avoids capture") {
  auto t = ty::forall("Y", ty::arrow(ty::var("X"), ty::var("Y")));
  auto s = subst_type(t, "X", ty::var("Y"));
  REQUIRE(s->kind == TypeKind::Forall);
  CHECK(s->name != "Y");
  CHECK(type_equal(s, ty::forall("Z", ty::arrow(ty::var("Y"), ty::var("Z")))));
  CHECK(free_type_vars(s) == std::set<std::string>{"Y"});
}

TEST_CASE("positivity reports the first bad occurrence") {
  auto ok = ty::sum(ty::unit(), ty::prod(ty::nat(), ty::var("X")));
  CHECK(check_positivity(ok, "X").ok);

  auto neg = ty::sum(ty::unit(), ty::arrow(ty::var("X"), ty::nat()));
  auto r = check_positivity(neg, "X");
  CHECK_FALSE(r.ok);
  CHECK(r.path == "Sum-right/Arrow-left");
  CHECK_THROWS_AS(functor_from_type(neg, "X"), PositivityError);

  auto under = ty::arrow(ty::nat(), ty::var("X"));
  CHECK(check_positivity(under, "X").path == "Arrow-right");
}

TEST_CASE("decomposition into W and V") {
  // (1 + X -> X) -> 1 -> X
  auto body = ty::arrow(ty::arrow(ty::sum(ty::unit(), ty::var("X")), ty::var("X")),
                        ty::arrow(ty::unit(), ty::var("X")));
  auto d = decompose_polytype(body, "X");
  CHECK(d.components.size() == 2);
  CHECK(d.V->kind == FunctorKind::Id);
  CHECK(to_string(d.W) == "(1 + Y -> X) * 1");
}

TEST_CASE("decomposition of constant and ill-formed codomains") {
  auto body = ty::arrow(ty::var("X"), ty::arrow(ty::var("X"), ty::nat()));
  auto d = decompose_polytype(body, "X");
  CHECK(d.V->kind == FunctorKind::Const);
  auto fix = ty::mu(fn::sum(fn::constant(ty::unit()), fn::constant(ty::var("X"))));
  CHECK_THROWS_AS(decompose_polytype(ty::arrow(ty::nat(), fix), "X"), DecompositionError);
  auto nested = ty::arrow(ty::nat(), ty::forall("Y", ty::var("Y")));
  CHECK_THROWS_AS(decompose_polytype(nested, "X"), DecompositionError);
}

TEST_CASE("bifunctor read back at different carriers") {
  auto w = bifunctor_from_type(ty::arrow(ty::var("X"), ty::var("X")), "X");
  auto t = bifunctor_to_type(w, ty::nat(), ty::unit());
  CHECK(type_equal(t, ty::arrow(ty::nat(), ty::unit())));
  // Two arrow-left edges make a hole covariant again.
  auto w2 = bifunctor_from_type(ty::arrow(ty::arrow(ty::var("X"), ty::nat()), ty::nat()), "X");
  CHECK(type_equal(bifunctor_to_type(w2, ty::nat(), ty::unit()),
                   ty::arrow(ty::arrow(ty::unit(), ty::nat()), ty::nat())));
}

TEST_CASE("fresh type variables avoid the given names") {
  CHECK(fresh_type_var({}, "X") == "X");
  auto v = fresh_type_var({"X", "X1"}, "X");
  CHECK(v != "X");
  CHECK(v != "X1");
}

TEST_CASE("substitution and application on small cases") {
  auto x = ty::var("X");
  CHECK(type_equal(subst_type(x, "X", ty::nat()), ty::nat()));
  CHECK(type_equal(subst_type(ty::arrow(x, ty::unit()), "X", ty::nat()), ty::arrow(ty::nat(), ty::unit())));
  CHECK(type_equal(subst_type(ty::forall("X", x), "X", ty::nat()), ty::forall("X", x)));

  auto l = fn::sum(fn::constant(ty::unit()), fn::prod(fn::constant(ty::nat()), fn::prod(fn::constant(ty::nat()), fn::id())));
  auto t = ty::var("T");
  CHECK(type_equal(functor_apply(l, t), ty::sum(ty::unit(), ty::prod(ty::nat(), ty::prod(ty::nat(), t)))));
  CHECK(type_equal(functor_apply(fn::id(), ty::nat()), ty::nat()));
  CHECK(type_equal(functor_apply(fn::constant(ty::unit()), ty::nat()), ty::unit()));
}

TEST_CASE("positivity on small cases") {
  auto l = fn::sum(fn::constant(ty::unit()), fn::prod(fn::constant(ty::nat()), fn::prod(fn::constant(ty::nat()), fn::id())));
  CHECK(check_positivity(l).ok);
  CHECK(check_positivity(fn::constant(ty::arrow(ty::nat(), ty::nat()))).ok);
  auto bad = check_positivity(ty::arrow(ty::var("X"), ty::nat()), "X");
  CHECK_FALSE(bad.ok);
  CHECK(bad.path == "Arrow-left");
}

TEST_CASE("decomposition of the fixpoint encodings") {
  auto x = ty::var("X");
  auto f = fn::sum(fn::constant(ty::unit()), fn::id());
  auto church = decompose_polytype(ty::arrow(ty::arrow(functor_apply(f, x), x), x), "X");
  CHECK(church.components.size() == 1);
  CHECK(to_string(church.W) == "1 + Y -> X");
  CHECK(church.V->kind == FunctorKind::Id);
  auto bare = decompose_polytype(x, "X");
  CHECK(bare.components.empty());
  CHECK(to_string(bare.W) == "1");
  CHECK(bare.V->kind == FunctorKind::Id);
}

TEST_CASE("arrow-valued codomains are outside the curried normal form") {
  auto x = ty::var("X");
  auto body = ty::arrow(ty::nat(), ty::prod(ty::arrow(x, x), ty::arrow(x, x)));
  CHECK_THROWS_AS(decompose_polytype(body, "X"), DecompositionError);
}
