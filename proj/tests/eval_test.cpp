#include "doctest.h"

#include <numeric>

#include "fusec/eval.hpp"
#include "fusec/syntax.hpp"
#include "support.hpp"

using namespace fusec;
using namespace fusec::testing;

namespace {

const Program& lists() {
  static Program p = corpus("lists.fuse");
  return p;
}

FunctorExpr nl() { return lists().find_functor("NL")->functor; }

Value run(const Program& p, const std::string& main, const Value& in, std::uint64_t fuel = kDefaultFuel) {
  return run_with_profile(p, main, in, fuel).value;
}

std::uint64_t nat_of(const Value& v) {
  REQUIRE(v->kind == ValueKind::Nat);
  return v->nat;
}

}  // namespace

TEST_CASE("folds agree with a host-side sum") {
  for (std::size_t len : {0u, 1u, 5u, 40u}) {
    auto xs = list_of(len, len);
    std::uint64_t expect = std::accumulate(xs.begin(), xs.end(), std::uint64_t{0});
    CHECK(nat_of(run(lists(), "sum", nat_list(nl(), xs))) == expect);
    CHECK(nat_of(run(lists(), "total_dup", nat_list(nl(), xs))) == 2 * expect);
    CHECK(nat_of(run(lists(), "sum_stream", nat_list(nl(), xs))) == expect);
  }
}

TEST_CASE("producers build the expected lists") {
  CHECK(print_value(run(lists(), "singleton", val::nat(7))) == "[7]");
  CHECK(print_value(run(lists(), "dup", nat_list(nl(), {1, 2}))) == "[1, 1, 2, 2]");
  Value cat_in = val::pair(nat_list(nl(), {1}), nat_list(nl(), {2, 3}));
  CHECK(print_value(run(lists(), "cat", cat_in)) == "[1, 2, 3]");
  CHECK(print_value(run(lists(), "nil", val::unit())) == "[]");
}

TEST_CASE("allocation counting") {
  auto r = run_with_profile(lists(), "dup", nat_list(nl(), {1, 2, 3}));
  // two cells per element plus the final nil
  CHECK(r.profile.mu_count(nl()) == 7);
  CHECK(r.profile.steps > 0);

  auto s = run_with_profile(lists(), "sum_stream", nat_list(nl(), {4, 5}));
  // one observation per element and one for the end
  CHECK(s.profile.nu_count(nl()) == 3);
  CHECK(s.profile.mu_count(nl()) == 0);
}

TEST_CASE("profiles are deterministic") {
  auto a = run_with_profile(lists(), "total_dup", nat_list(nl(), list_of(20, 3)));
  auto b = run_with_profile(lists(), "total_dup", nat_list(nl(), list_of(20, 3)));
  CHECK(a.profile == b.profile);
}

TEST_CASE("fuel runs out") {
  CHECK_THROWS_AS(run(lists(), "sum", nat_list(nl(), {1, 2, 3}), 1), FuelExhausted);
  std::uint64_t spent = 0;
  try {
    run(lists(), "sum", nat_list(nl(), list_of(50, 1)), 10);
  } catch (const FuelExhausted& e) {
    spent = e.profile().steps;
  }
  CHECK(spent == 10);
}

TEST_CASE("deep inputs do not overflow the native stack") {
  auto xs = list_of(20000, 2);
  std::uint64_t expect = std::accumulate(xs.begin(), xs.end(), std::uint64_t{0});
  CHECK(nat_of(run(lists(), "sum", nat_list(nl(), xs))) == expect);
}

TEST_CASE("let, case and type application") {
  Program p = parse_program(
      "def k : forall X. X -> Nat -> X =\n  /\\X. \\x : X. \\n : Nat. x\n"
      "def main : Nat -> Nat =\n"
      "  \\n : Nat. let y = n + 1 in case inr[1 + Nat] y of inl u => 0 | inr m => k @[Nat] m y + 1\n");
  CHECK(nat_of(run(p, "main", val::nat(4))) == 6);
}

TEST_CASE("first-order equality rejects functions") {
  Interpreter in(lists());
  Value f = in.global("sum");
  CHECK_THROWS_AS(values_equal(f, f), UnsupportedError);
  CHECK(values_equal(val::pair(val::nat(1), val::unit()), val::pair(val::nat(1), val::unit())));
  CHECK_FALSE(values_equal(val::inl(val::nat(1)), val::inr(val::nat(1))));
}

TEST_CASE("default fuel reads the environment") {
  CHECK(default_fuel() >= 1);
}

TEST_CASE("functor action on the pair-list functor") {
  Program p = corpus("sumzip.fuse");
  auto l = p.find_functor("L")->functor;
  Interpreter in(p);
  Value v = val::inr(val::pair(val::nat(2), val::pair(val::nat(3), val::nat(10))));
  Value out = in.fmap(l, [](const Value& x) { return val::nat(x->nat + 1); }, v);
  CHECK(print_value(out) == "inr (2, 3, 11)");
  Value none = in.fmap(l, [](const Value&) -> Value { throw Error("not reached"); }, val::inl(val::unit()));
  CHECK(print_value(none) == "inl ()");
}

TEST_CASE("zipping and summing two lists") {
  Program p = corpus("sumzip.fuse");
  auto nl = p.find_functor("NL")->functor;
  auto l = p.find_functor("L")->functor;
  Value q = val::pair(nat_list(nl, {1, 2}), nat_list(nl, {3, 4}));
  CHECK(nat_of(run(p, "composite_direct", q)) == 10);
  CHECK(nat_of(run(p, "sumzip", q)) == 10);
  CHECK(print_value(run(p, "zipW", q)) == "[(1, 3), (2, 4)]");
  CHECK(nat_of(run(p, "ssum", val::mu(l, val::inl(val::unit())))) == 0);
  for (std::size_t n : {0u, 1u, 5u}) {
    Value in = val::pair(nat_list(nl, list_of(n, 1)), nat_list(nl, list_of(n, 2)));
    auto a = run_with_profile(p, "composite_direct", in);
    auto b = run_with_profile(p, "sumzip", in);
    CHECK(a.profile.mu_count(l) == n + 1);
    CHECK(b.profile.mu_count(l) == 0);
    CHECK(values_equal(a.value, b.value));
  }
}

TEST_CASE("a stream of empty lists ends at once") {
  Program p = corpus("sumzip_co.fuse");
  auto nl = p.find_functor("NL")->functor;
  auto l = p.find_functor("L")->functor;
  Interpreter in(p);
  Value s = in.apply(in.global("zipS"), val::pair(nat_list(nl, {}), nat_list(nl, {})));
  CHECK(print_value(in.observe(s)) == "inl ()");
  CHECK(in.profile().nu_count(l) == 1);
}
