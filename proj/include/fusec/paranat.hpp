#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusec/eval.hpp"
#include "fusec/program.hpp"
#include "fusec/type.hpp"

namespace fusec {

inline constexpr std::size_t kFiniteCap = 100000;

// Elements of an interpreted set are the indices 0 .. size-1. Products are
// encoded as a * |B| + b, sums place inl before inr, and a function A -> B
// is the base-|B| number whose i-th digit is the image of i.
struct FiniteModel {
  std::map<std::string, std::size_t> carriers;
};

struct FiniteSet {
  TypeExpr type;
  std::size_t size = 0;
};

// Throws UnsupportedError for Nat, Mu, Nu or quantifiers and SizeCapError
// for sets larger than kFiniteCap.
FiniteSet interpret_type_finite(const TypeExpr& t, const FiniteModel& model);
std::string render_element(const TypeExpr& t, const FiniteModel& model, std::size_t element);

using Table = std::vector<std::size_t>;

// |W| with contravariant holes read at `neg` and covariant ones at `pos`.
std::size_t bifunctor_size(const BifunctorExpr& w, std::size_t neg, std::size_t pos);
std::string render_bifunctor_element(const BifunctorExpr& w, std::size_t neg, std::size_t pos, std::size_t element,
                                     const std::string& neg_name, const std::string& pos_name);

// W(N1, P1) -> W(N2, P2) from p : P1 -> P2 and n : N2 -> N1.
Table bifunctor_transport(const BifunctorExpr& w, std::size_t n1, std::size_t p1, std::size_t n2, std::size_t p2,
                          const Table& p, const Table& n);

struct BifunctorAction {
  Table WXu;  // W(X,X) -> W(X,Y)
  Table WuY;  // W(Y,Y) -> W(X,Y)
};

BifunctorAction bifunctor_action(const BifunctorExpr& w, const Table& u, std::size_t x, std::size_t y);
// V(u) : V(X) -> V(Y)
Table functor_action(const FunctorExpr& v, const Table& u, std::size_t x, std::size_t y);

// theta_X : W(X,X) -> V(X), keyed by |X|.
struct SemanticFamily {
  std::map<std::size_t, Table> tables;
  std::string provenance;  // "from-term" or "hand-given"
};

struct CounterExample {
  std::size_t x = 0;
  std::size_t y = 0;
  Table u;
  std::size_t w = 0;        // in W(X,X)
  std::size_t w_prime = 0;  // in W(Y,Y)
  std::size_t lhs = 0;      // V(u)(theta_X(w))
  std::size_t rhs = 0;      // theta_Y(w')
  std::string u_text;
  std::string w_text;
  std::string w_prime_text;
  std::string lhs_text;
  std::string rhs_text;
};

struct ParanatResult {
  bool ok = true;
  std::optional<CounterExample> counterexample;
  std::size_t maps_checked = 0;
  std::size_t pairs_checked = 0;
};

// For all carriers X, Y in [min_carrier, max_carrier], all u : X -> Y and all
// w, w' with WXu(w) = WuY(w'), requires V(u)(theta_X(w)) = theta_Y(w').
// Returns the first violation in the order (X, Y, u, w, w').
ParanatResult check_paranatural(const SemanticFamily& theta, const BifunctorExpr& w, const FunctorExpr& v,
                                std::size_t max_carrier, std::size_t min_carrier = 1);

// The same condition quantified over spans Z -> W(X,X), Z -> W(Y,Y) with
// |Z| <= max_z.
bool check_paranatural_triangle(const SemanticFamily& theta, const BifunctorExpr& w, const FunctorExpr& v,
                                std::size_t max_carrier, std::size_t max_z = 2);

// Recomputes the premise and conclusion independently of the search.
bool verify_witness(const SemanticFamily& theta, const BifunctorExpr& w, const FunctorExpr& v,
                    const CounterExample& cex);

// Tabulates a closed term of type forall X. T1 -> ... -> Tn -> V(X).
SemanticFamily tabulate_family(const Program& program, const Term& term, const PolytypeDecomposition& shape,
                               std::size_t max_carrier, std::uint64_t fuel = default_fuel());

// theta_X(f) = x0 over W(Y,X) = Y -> X, V = Id.
BifunctorExpr bad_const_shape();
SemanticFamily bad_const_family(std::size_t max_carrier);

// ---------------------------------------------------------------------------
// Sampled build/cobuild lemma

struct Lemma1Case {
  std::string label;
  TypeExpr carrier;     // X for a build body, Y for a cobuild body
  Term structure;       // algebra F X -> X, or coalgebra Y -> F Y
  std::vector<Value> inputs;
};

struct Lemma1Outcome {
  std::string label;
  std::size_t total = 0;
  std::size_t equal = 0;
  std::size_t fuel_errors = 0;
  std::vector<std::string> failures;

  bool passed() const { return total > 0 && equal == total; }
};

struct Lemma1Report {
  std::vector<Lemma1Outcome> cases;
  bool all_passed() const;
};

// Build body p: p @[X] x  against  fold[F] x . p @[Mu F] in[F].
// Cobuild body q: q @[Y] y  against  q @[Nu F] out[F] . unfold[F] y.
Lemma1Report check_lemma1_sampled(const Program& program, const Term& body, const FunctorExpr& f, bool inductive,
                                  const std::vector<Lemma1Case>& cases, std::uint64_t fuel = default_fuel());

}  // namespace fusec
