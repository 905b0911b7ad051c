#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fusec/error.hpp"

namespace fusec {

struct TypeNode;
struct FunctorNode;
struct BifunctorNode;

using TypeExpr = std::shared_ptr<const TypeNode>;
using FunctorExpr = std::shared_ptr<const FunctorNode>;
using BifunctorExpr = std::shared_ptr<const BifunctorNode>;

enum class TypeKind { Unit, Nat, Var, Prod, Sum, Arrow, Mu, Nu, Forall };

struct TypeNode {
  TypeKind kind;
  std::string name;     // Var; binder of Forall
  FunctorExpr functor;  // Mu, Nu
  TypeExpr left;        // Prod, Sum, Arrow; body of Forall
  TypeExpr right;       // Prod, Sum, Arrow
};

// Polynomial functor in one hole. Nodes are kept in canonical form: a
// Sum/Prod with no hole below it is always collapsed into a single Const,
// so structural equality coincides with equality of the functor action.
enum class FunctorKind { Const, Id, Sum, Prod };

struct FunctorNode {
  FunctorKind kind;
  TypeExpr constant;  // Const
  FunctorExpr left;
  FunctorExpr right;
  std::string key;    // canonical rendering, used for allocation accounting
};

// Mixed-variance type former over one hole. Whether a given hole is read
// contravariantly or covariantly is fixed by the parity of Arrow-left edges
// on the path from the root.
enum class BifunctorKind { Const, Hole, Sum, Prod, Arrow };

struct BifunctorNode {
  BifunctorKind kind;
  TypeExpr constant;
  BifunctorExpr left;
  BifunctorExpr right;
};

namespace ty {
TypeExpr unit();
TypeExpr nat();
TypeExpr var(std::string name);
TypeExpr prod(TypeExpr a, TypeExpr b);
TypeExpr sum(TypeExpr a, TypeExpr b);
TypeExpr arrow(TypeExpr a, TypeExpr b);
TypeExpr mu(FunctorExpr f);
TypeExpr nu(FunctorExpr f);
TypeExpr forall(std::string name, TypeExpr body);
}  // namespace ty

namespace fn {
FunctorExpr constant(TypeExpr t);
FunctorExpr id();
FunctorExpr sum(FunctorExpr a, FunctorExpr b);
FunctorExpr prod(FunctorExpr a, FunctorExpr b);
}  // namespace fn

namespace bf {
BifunctorExpr constant(TypeExpr t);
BifunctorExpr hole();
BifunctorExpr sum(BifunctorExpr a, BifunctorExpr b);
BifunctorExpr prod(BifunctorExpr a, BifunctorExpr b);
BifunctorExpr arrow(BifunctorExpr a, BifunctorExpr b);
}  // namespace bf

// Alpha-equivalence (Forall binders); Mu/Nu compare their functors.
bool type_equal(const TypeExpr& a, const TypeExpr& b);
bool functor_equal(const FunctorExpr& a, const FunctorExpr& b);
bool bifunctor_equal(const BifunctorExpr& a, const BifunctorExpr& b);

// Canonical inline rendering. Functors print with `X` as the hole.
std::string to_string(const TypeExpr& t);
std::string to_string(const FunctorExpr& f);
std::string to_string(const BifunctorExpr& w);

std::set<std::string> free_type_vars(const TypeExpr& t);
std::set<std::string> free_type_vars(const FunctorExpr& f);
bool occurs_free(const TypeExpr& t, const std::string& var);

bool functor_has_hole(const FunctorExpr& f);
bool contains_fixpoint(const TypeExpr& t);
bool contains_nat(const TypeExpr& t);
bool is_monotype(const TypeExpr& t);
// No Arrow and no Forall anywhere, including inside functor constants.
bool is_first_order(const TypeExpr& t);

std::string fresh_type_var(const std::set<std::string>& avoid, const std::string& base = "X");

// Capture-avoiding substitution of `replacement` for free occurrences of `var`.
TypeExpr subst_type(const TypeExpr& t, const std::string& var, const TypeExpr& replacement);
FunctorExpr subst_functor(const FunctorExpr& f, const std::string& var, const TypeExpr& replacement);

// Replace every subterm alpha-equal to `target` by `replacement`.
TypeExpr replace_type(const TypeExpr& t, const TypeExpr& target, const TypeExpr& replacement);

// F applied to t: the hole is filled with t.
TypeExpr functor_apply(const FunctorExpr& f, const TypeExpr& t);

struct PositivityResult {
  bool ok = true;
  std::string path;     // e.g. "Arrow-left" or "Sum-right/Arrow-left"
  std::string message;
};

// Every FunctorExpr is polynomial by construction, so this always succeeds.
PositivityResult check_positivity(const FunctorExpr& f);
// Front-end check on a type body that is about to be read as a functor in
// the variable `hole`. Reports the first occurrence of the hole that is not
// reachable through Sum/Prod alone.
PositivityResult check_positivity(const TypeExpr& body, const std::string& hole);

class PositivityError : public Error {
 public:
  PositivityError(std::string path, const std::string& message)
      : Error(message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Reads a type with a designated hole variable back as a functor; the
// inverse of functor_apply(F, var(hole)). Throws PositivityError.
FunctorExpr functor_from_type(const TypeExpr& body, const std::string& hole);

// If t == F(s) for some s, returns s. F must contain the hole.
std::optional<TypeExpr> functor_match(const FunctorExpr& f, const TypeExpr& t);

// For a list-shaped functor 1 + E1 * (E2 * (... * X)) returns E1 .. Ek.
std::optional<std::vector<TypeExpr>> list_fields(const FunctorExpr& f);

BifunctorExpr bifunctor_from_functor(const FunctorExpr& f);
// Throws UnsupportedError for Forall, or for the hole inside Mu/Nu.
BifunctorExpr bifunctor_from_type(const TypeExpr& body, const std::string& hole);
// Interprets contravariant holes as `negative` and covariant ones as `positive`.
TypeExpr bifunctor_to_type(const BifunctorExpr& w, const TypeExpr& negative, const TypeExpr& positive);

class DecompositionError : public Error {
 public:
  using Error::Error;
};

// body == T1 -> ... -> Tn -> V, split into W = T1 * ... * Tn and covariant V.
struct PolytypeDecomposition {
  std::vector<TypeExpr> components;   // T1 .. Tn
  std::vector<BifunctorExpr> component_bifunctors;
  BifunctorExpr W;                    // product of components, Const(Unit) if n = 0
  FunctorExpr V;
};

// Throws DecompositionError (NotCurriedNormalForm) when the final codomain
// is not covariant polynomial in `var` or a component nests a quantifier.
PolytypeDecomposition decompose_polytype(const TypeExpr& body, const std::string& var);

}  // namespace fusec
