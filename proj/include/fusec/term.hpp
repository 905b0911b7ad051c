#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fusec/type.hpp"

namespace fusec {

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

enum class TermKind {
  Var,
  Lam,      // name: binder, type: annotation, kids: {body}
  App,      // kids: {fn, arg}
  TyLam,    // name: type binder, kids: {body}
  TyApp,    // type: argument, kids: {fn}
  Unit,
  NatLit,   // nat
  Add,      // kids: {a, b}
  Pair,     // kids: {a, b}
  Proj1,    // kids: {e}
  Proj2,    // kids: {e}
  Inl,      // type: the whole sum type, kids: {e}
  Inr,      // type: the whole sum type, kids: {e}
  Case,     // name: left binder, name2: right binder, kids: {scrutinee, left, right}
  InMu,     // functor, kids: {e}
  Unroll,   // functor, kids: {e}   (inverse of InMu)
  Cata,     // functor, kids: {algebra}
  OutNu,    // functor, kids: {e}
  Ana,      // functor, kids: {coalgebra}
  Build,    // functor, kids: {producer body}
  Cobuild,  // functor, kids: {consumer body}
  Compose,  // kids: {h, f}  meaning h . f
  Let,      // name: binder, kids: {bound, body}
};

struct TermNode {
  TermKind kind;
  std::string name;
  std::string name2;
  TypeExpr type;
  FunctorExpr functor;
  std::uint64_t nat = 0;
  std::vector<Term> kids;
  SourcePos pos;
};

namespace tm {
Term var(std::string name);
Term lam(std::string var, TypeExpr type, Term body);
Term app(Term fn, Term arg);
Term apps(Term fn, std::initializer_list<Term> args);
Term tylam(std::string tyvar, Term body);
Term tyapp(Term fn, TypeExpr type);
Term unit();
Term nat(std::uint64_t n);
Term add(Term a, Term b);
Term pair(Term a, Term b);
Term fst(Term e);
Term snd(Term e);
Term inl(TypeExpr sum_type, Term e);
Term inr(TypeExpr sum_type, Term e);
Term case_of(Term scrutinee, std::string left_var, Term left, std::string right_var, Term right);
Term in(FunctorExpr f, Term e);
Term unroll(FunctorExpr f, Term e);
Term cata(FunctorExpr f, Term algebra);
Term out(FunctorExpr f, Term e);
Term ana(FunctorExpr f, Term coalgebra);
Term build(FunctorExpr f, Term producer);
Term cobuild(FunctorExpr f, Term consumer);
Term compose(Term h, Term f);
Term let(std::string var, Term bound, Term body);
}  // namespace tm

// Copy of `node` with different children (all other fields kept).
Term with_kids(const Term& node, std::vector<Term> kids);
Term with_pos(const Term& node, SourcePos pos);

// Exact structural equality, ignoring source positions.
bool term_equal(const Term& a, const Term& b);
// Equality up to renaming of bound term variables; types compare up to alpha.
bool alpha_equal(const Term& a, const Term& b);

std::set<std::string> free_vars(const Term& t);
bool is_binder_kid(const Term& node, std::size_t kid);
// Names bound by `node` for its child `kid` (empty when none).
std::vector<std::string> binders_for_kid(const Term& node, std::size_t kid);

std::string fresh_name(const std::set<std::string>& avoid, const std::string& base);

// Capture-avoiding substitution of `replacement` for free `var`.
Term subst_term(const Term& t, const std::string& var, const Term& replacement);

// Renames bound variables so that every binder in the term is distinct and
// none collides with a name in `reserved` (typically the global names).
// Deterministic and idempotent.
Term alpha_normalize(const Term& t, const std::set<std::string>& reserved = {});

// Applies `f` to every type annotation in the term.
template <typename F>
Term map_annotations(const Term& t, F&& f);

using TermPath = std::vector<int>;
Term subterm_at(const Term& t, const TermPath& path);
Term replace_at(const Term& t, const TermPath& path, const Term& replacement);
std::string path_to_string(const TermPath& path);

std::size_t term_size(const Term& t);

// A term of type F(src) -> F(dst) that maps `h : src -> dst` over the holes.
Term fmap_term(const FunctorExpr& f, const Term& h, const TypeExpr& src, const TypeExpr& dst);

// ---------------------------------------------------------------------------

template <typename F>
Term map_annotations(const Term& t, F&& f) {
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(map_annotations(k, f));
  auto node = std::make_shared<TermNode>(*t);
  node->kids = std::move(kids);
  if (node->type) node->type = f(node->type);
  return node;
}

}  // namespace fusec
