#include "fusec/type.hpp"

#include <map>
#include <utility>

namespace fusec {

namespace {

TypeExpr make_type(TypeKind kind, std::string name = {}, FunctorExpr functor = nullptr,
                   TypeExpr left = nullptr, TypeExpr right = nullptr) {
  return std::make_shared<const TypeNode>(
      TypeNode{kind, std::move(name), std::move(functor), std::move(left), std::move(right)});
}

FunctorExpr make_functor(FunctorKind kind, TypeExpr constant, FunctorExpr left, FunctorExpr right) {
  FunctorNode node{kind, std::move(constant), std::move(left), std::move(right), {}};
  auto shared = std::make_shared<FunctorNode>(std::move(node));
  shared->key = to_string(FunctorExpr(shared));
  return shared;
}

BifunctorExpr make_bifunctor(BifunctorKind kind, TypeExpr constant, BifunctorExpr left,
                             BifunctorExpr right) {
  return std::make_shared<const BifunctorNode>(
      BifunctorNode{kind, std::move(constant), std::move(left), std::move(right)});
}

}  // namespace

namespace ty {
TypeExpr unit() {
  static const TypeExpr u = make_type(TypeKind::Unit);
  return u;
}
TypeExpr nat() {
  static const TypeExpr n = make_type(TypeKind::Nat);
  return n;
}
TypeExpr var(std::string name) { return make_type(TypeKind::Var, std::move(name)); }
TypeExpr prod(TypeExpr a, TypeExpr b) {
  return make_type(TypeKind::Prod, {}, nullptr, std::move(a), std::move(b));
}
TypeExpr sum(TypeExpr a, TypeExpr b) {
  return make_type(TypeKind::Sum, {}, nullptr, std::move(a), std::move(b));
}
TypeExpr arrow(TypeExpr a, TypeExpr b) {
  return make_type(TypeKind::Arrow, {}, nullptr, std::move(a), std::move(b));
}
TypeExpr mu(FunctorExpr f) { return make_type(TypeKind::Mu, {}, std::move(f)); }
TypeExpr nu(FunctorExpr f) { return make_type(TypeKind::Nu, {}, std::move(f)); }
TypeExpr forall(std::string name, TypeExpr body) {
  return make_type(TypeKind::Forall, std::move(name), nullptr, std::move(body));
}
}  // namespace ty

namespace fn {
FunctorExpr constant(TypeExpr t) {
  return make_functor(FunctorKind::Const, std::move(t), nullptr, nullptr);
}
FunctorExpr id() {
  static const FunctorExpr i = make_functor(FunctorKind::Id, nullptr, nullptr, nullptr);
  return i;
}
FunctorExpr sum(FunctorExpr a, FunctorExpr b) {
  if (a->kind == FunctorKind::Const && b->kind == FunctorKind::Const)
    return constant(ty::sum(a->constant, b->constant));
  return make_functor(FunctorKind::Sum, nullptr, std::move(a), std::move(b));
}
FunctorExpr prod(FunctorExpr a, FunctorExpr b) {
  if (a->kind == FunctorKind::Const && b->kind == FunctorKind::Const)
    return constant(ty::prod(a->constant, b->constant));
  return make_functor(FunctorKind::Prod, nullptr, std::move(a), std::move(b));
}
}  // namespace fn

namespace bf {
BifunctorExpr constant(TypeExpr t) {
  return make_bifunctor(BifunctorKind::Const, std::move(t), nullptr, nullptr);
}
BifunctorExpr hole() {
  static const BifunctorExpr h = make_bifunctor(BifunctorKind::Hole, nullptr, nullptr, nullptr);
  return h;
}
BifunctorExpr sum(BifunctorExpr a, BifunctorExpr b) {
  return make_bifunctor(BifunctorKind::Sum, nullptr, std::move(a), std::move(b));
}
BifunctorExpr prod(BifunctorExpr a, BifunctorExpr b) {
  return make_bifunctor(BifunctorKind::Prod, nullptr, std::move(a), std::move(b));
}
BifunctorExpr arrow(BifunctorExpr a, BifunctorExpr b) {
  return make_bifunctor(BifunctorKind::Arrow, nullptr, std::move(a), std::move(b));
}
}  // namespace bf

// ---------------------------------------------------------------------------
// Equality

namespace {

using BinderMap = std::vector<std::pair<std::string, std::string>>;

bool type_equal_in(const TypeExpr& a, const TypeExpr& b, BinderMap& binders);

bool functor_equal_in(const FunctorExpr& a, const FunctorExpr& b, BinderMap& binders) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FunctorKind::Id:
      return true;
    case FunctorKind::Const:
      return type_equal_in(a->constant, b->constant, binders);
    case FunctorKind::Sum:
    case FunctorKind::Prod:
      return functor_equal_in(a->left, b->left, binders) &&
             functor_equal_in(a->right, b->right, binders);
  }
  return false;
}

bool type_equal_in(const TypeExpr& a, const TypeExpr& b, BinderMap& binders) {
  if (a == b && binders.empty()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat:
      return true;
    case TypeKind::Var:
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        bool left_hit = it->first == a->name;
        bool right_hit = it->second == b->name;
        if (left_hit || right_hit) return left_hit && right_hit;
      }
      return a->name == b->name;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      return type_equal_in(a->left, b->left, binders) && type_equal_in(a->right, b->right, binders);
    case TypeKind::Mu:
    case TypeKind::Nu:
      return functor_equal_in(a->functor, b->functor, binders);
    case TypeKind::Forall: {
      binders.emplace_back(a->name, b->name);
      bool eq = type_equal_in(a->left, b->left, binders);
      binders.pop_back();
      return eq;
    }
  }
  return false;
}

}  // namespace

bool type_equal(const TypeExpr& a, const TypeExpr& b) {
  BinderMap binders;
  return type_equal_in(a, b, binders);
}

bool functor_equal(const FunctorExpr& a, const FunctorExpr& b) {
  BinderMap binders;
  return functor_equal_in(a, b, binders);
}

bool bifunctor_equal(const BifunctorExpr& a, const BifunctorExpr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BifunctorKind::Hole:
      return true;
    case BifunctorKind::Const:
      return type_equal(a->constant, b->constant);
    default:
      return bifunctor_equal(a->left, b->left) && bifunctor_equal(a->right, b->right);
  }
}

// ---------------------------------------------------------------------------
// Free variables and predicates

namespace {

void collect_ftv(const TypeExpr& t, std::set<std::string>& bound, std::set<std::string>& out);

void collect_ftv(const FunctorExpr& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f->kind) {
    case FunctorKind::Id:
      return;
    case FunctorKind::Const:
      collect_ftv(f->constant, bound, out);
      return;
    default:
      collect_ftv(f->left, bound, out);
      collect_ftv(f->right, bound, out);
  }
}

void collect_ftv(const TypeExpr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat:
      return;
    case TypeKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      collect_ftv(t->left, bound, out);
      collect_ftv(t->right, bound, out);
      return;
    case TypeKind::Mu:
    case TypeKind::Nu:
      collect_ftv(t->functor, bound, out);
      return;
    case TypeKind::Forall: {
      bool fresh = bound.insert(t->name).second;
      collect_ftv(t->left, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
  }
}

template <typename Pred>
bool any_type_node(const TypeExpr& t, Pred pred);

template <typename Pred>
bool any_functor_node(const FunctorExpr& f, Pred pred) {
  switch (f->kind) {
    case FunctorKind::Id:
      return false;
    case FunctorKind::Const:
      return any_type_node(f->constant, pred);
    default:
      return any_functor_node(f->left, pred) || any_functor_node(f->right, pred);
  }
}

template <typename Pred>
bool any_type_node(const TypeExpr& t, Pred pred) {
  if (pred(*t)) return true;
  switch (t->kind) {
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::Arrow:
      return any_type_node(t->left, pred) || any_type_node(t->right, pred);
    case TypeKind::Mu:
    case TypeKind::Nu:
      return any_functor_node(t->functor, pred);
    case TypeKind::Forall:
      return any_type_node(t->left, pred);
    default:
      return false;
  }
}

}  // namespace

std::set<std::string> free_type_vars(const TypeExpr& t) {
  std::set<std::string> bound, out;
  collect_ftv(t, bound, out);
  return out;
}

std::set<std::string> free_type_vars(const FunctorExpr& f) {
  std::set<std::string> bound, out;
  collect_ftv(f, bound, out);
  return out;
}

bool occurs_free(const TypeExpr& t, const std::string& var) { return free_type_vars(t).count(var) > 0; }

bool functor_has_hole(const FunctorExpr& f) { return f->kind != FunctorKind::Const; }

bool contains_fixpoint(const TypeExpr& t) {
  return any_type_node(t, [](const TypeNode& n) {
    return n.kind == TypeKind::Mu || n.kind == TypeKind::Nu;
  });
}

bool contains_nat(const TypeExpr& t) {
  return any_type_node(t, [](const TypeNode& n) { return n.kind == TypeKind::Nat; });
}

bool is_monotype(const TypeExpr& t) {
  return !any_type_node(t, [](const TypeNode& n) { return n.kind == TypeKind::Forall; });
}

bool is_first_order(const TypeExpr& t) {
  return !any_type_node(t, [](const TypeNode& n) {
    return n.kind == TypeKind::Arrow || n.kind == TypeKind::Forall;
  });
}

std::string fresh_type_var(const std::set<std::string>& avoid, const std::string& base) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution

TypeExpr subst_type(const TypeExpr& t, const std::string& var, const TypeExpr& replacement) {
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat:
      return t;
    case TypeKind::Var:
      return t->name == var ? replacement : t;
    case TypeKind::Prod:
      return ty::prod(subst_type(t->left, var, replacement), subst_type(t->right, var, replacement));
    case TypeKind::Sum:
      return ty::sum(subst_type(t->left, var, replacement), subst_type(t->right, var, replacement));
    case TypeKind::Arrow:
      return ty::arrow(subst_type(t->left, var, replacement), subst_type(t->right, var, replacement));
    case TypeKind::Mu:
      return ty::mu(subst_functor(t->functor, var, replacement));
    case TypeKind::Nu:
      return ty::nu(subst_functor(t->functor, var, replacement));
    case TypeKind::Forall: {
      if (t->name == var) return t;
      auto repl_fv = free_type_vars(replacement);
      if (!repl_fv.count(t->name)) return ty::forall(t->name, subst_type(t->left, var, replacement));
      auto avoid = repl_fv;
      auto body_fv = free_type_vars(t->left);
      avoid.insert(body_fv.begin(), body_fv.end());
      avoid.insert(var);
      std::string renamed = fresh_type_var(avoid, t->name);
      TypeExpr body = subst_type(t->left, t->name, ty::var(renamed));
      return ty::forall(renamed, subst_type(body, var, replacement));
    }
  }
  return t;
}

FunctorExpr subst_functor(const FunctorExpr& f, const std::string& var, const TypeExpr& replacement) {
  switch (f->kind) {
    case FunctorKind::Id:
      return f;
    case FunctorKind::Const:
      return fn::constant(subst_type(f->constant, var, replacement));
    case FunctorKind::Sum:
      return fn::sum(subst_functor(f->left, var, replacement), subst_functor(f->right, var, replacement));
    case FunctorKind::Prod:
      return fn::prod(subst_functor(f->left, var, replacement), subst_functor(f->right, var, replacement));
  }
  return f;
}

namespace {
FunctorExpr replace_in_functor(const FunctorExpr& f, const TypeExpr& target, const TypeExpr& replacement) {
  switch (f->kind) {
    case FunctorKind::Id:
      return f;
    case FunctorKind::Const:
      return fn::constant(replace_type(f->constant, target, replacement));
    case FunctorKind::Sum:
      return fn::sum(replace_in_functor(f->left, target, replacement),
                     replace_in_functor(f->right, target, replacement));
    case FunctorKind::Prod:
      return fn::prod(replace_in_functor(f->left, target, replacement),
                      replace_in_functor(f->right, target, replacement));
  }
  return f;
}
}  // namespace

TypeExpr replace_type(const TypeExpr& t, const TypeExpr& target, const TypeExpr& replacement) {
  if (type_equal(t, target)) return replacement;
  switch (t->kind) {
    case TypeKind::Prod:
      return ty::prod(replace_type(t->left, target, replacement), replace_type(t->right, target, replacement));
    case TypeKind::Sum:
      return ty::sum(replace_type(t->left, target, replacement), replace_type(t->right, target, replacement));
    case TypeKind::Arrow:
      return ty::arrow(replace_type(t->left, target, replacement),
                       replace_type(t->right, target, replacement));
    case TypeKind::Mu:
      return ty::mu(replace_in_functor(t->functor, target, replacement));
    case TypeKind::Nu:
      return ty::nu(replace_in_functor(t->functor, target, replacement));
    case TypeKind::Forall:
      return ty::forall(t->name, replace_type(t->left, target, replacement));
    default:
      return t;
  }
}

// ---------------------------------------------------------------------------
// Functors

TypeExpr functor_apply(const FunctorExpr& f, const TypeExpr& t) {
  switch (f->kind) {
    case FunctorKind::Id:
      return t;
    case FunctorKind::Const:
      return f->constant;
    case FunctorKind::Sum:
      return ty::sum(functor_apply(f->left, t), functor_apply(f->right, t));
    case FunctorKind::Prod:
      return ty::prod(functor_apply(f->left, t), functor_apply(f->right, t));
  }
  return t;
}

PositivityResult check_positivity(const FunctorExpr&) { return {}; }

namespace {

PositivityResult positivity_walk(const TypeExpr& t, const std::string& hole, const std::string& path) {
  auto extend = [&](const char* step) { return path.empty() ? std::string(step) : path + "/" + step; };
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat:
    case TypeKind::Var:
      return {};
    case TypeKind::Prod:
    case TypeKind::Sum: {
      const char* tag = t->kind == TypeKind::Prod ? "Prod" : "Sum";
      auto l = positivity_walk(t->left, hole, extend((std::string(tag) + "-left").c_str()));
      if (!l.ok) return l;
      return positivity_walk(t->right, hole, extend((std::string(tag) + "-right").c_str()));
    }
    case TypeKind::Arrow:
      if (occurs_free(t->left, hole)) {
        std::string p = extend("Arrow-left");
        return {false, p, "negative occurrence of " + hole + " at " + p};
      }
      if (occurs_free(t->right, hole)) {
        std::string p = extend("Arrow-right");
        return {false, p, "non-polynomial occurrence of " + hole + " under an arrow at " + p};
      }
      return {};
    case TypeKind::Mu:
    case TypeKind::Nu:
    case TypeKind::Forall:
      if (occurs_free(t, hole)) {
        std::string p = extend(t->kind == TypeKind::Forall ? "Forall" : "Fixpoint");
        return {false, p, "occurrence of " + hole + " inside a binder at " + p};
      }
      return {};
  }
  return {};
}

}  // namespace

PositivityResult check_positivity(const TypeExpr& body, const std::string& hole) {
  return positivity_walk(body, hole, "");
}

FunctorExpr functor_from_type(const TypeExpr& body, const std::string& hole) {
  auto check = check_positivity(body, hole);
  if (!check.ok) throw PositivityError(check.path, check.message);
  if (!occurs_free(body, hole)) return fn::constant(body);
  switch (body->kind) {
    case TypeKind::Var:
      return fn::id();
    case TypeKind::Sum:
      return fn::sum(functor_from_type(body->left, hole), functor_from_type(body->right, hole));
    case TypeKind::Prod:
      return fn::prod(functor_from_type(body->left, hole), functor_from_type(body->right, hole));
    default:
      throw PositivityError("", "unexpected occurrence of " + hole);
  }
}

namespace {
bool match_into(const FunctorExpr& f, const TypeExpr& t, std::optional<TypeExpr>& found) {
  switch (f->kind) {
    case FunctorKind::Id:
      if (found) return type_equal(*found, t);
      found = t;
      return true;
    case FunctorKind::Const:
      return type_equal(f->constant, t);
    case FunctorKind::Sum:
      return t->kind == TypeKind::Sum && match_into(f->left, t->left, found) &&
             match_into(f->right, t->right, found);
    case FunctorKind::Prod:
      return t->kind == TypeKind::Prod && match_into(f->left, t->left, found) &&
             match_into(f->right, t->right, found);
  }
  return false;
}
}  // namespace

std::optional<TypeExpr> functor_match(const FunctorExpr& f, const TypeExpr& t) {
  if (!functor_has_hole(f)) return std::nullopt;
  std::optional<TypeExpr> found;
  if (!match_into(f, t, found)) return std::nullopt;
  return found;
}

std::optional<std::vector<TypeExpr>> list_fields(const FunctorExpr& f) {
  if (f->kind != FunctorKind::Sum || f->left->kind != FunctorKind::Const ||
      f->left->constant->kind != TypeKind::Unit)
    return std::nullopt;
  std::vector<TypeExpr> fields;
  FunctorExpr cur = f->right;
  while (cur->kind == FunctorKind::Prod && cur->left->kind == FunctorKind::Const) {
    fields.push_back(cur->left->constant);
    cur = cur->right;
  }
  if (cur->kind != FunctorKind::Id || fields.empty()) return std::nullopt;
  return fields;
}

// ---------------------------------------------------------------------------
// Bifunctors and polytype decomposition

BifunctorExpr bifunctor_from_functor(const FunctorExpr& f) {
  switch (f->kind) {
    case FunctorKind::Id:
      return bf::hole();
    case FunctorKind::Const:
      return bf::constant(f->constant);
    case FunctorKind::Sum:
      return bf::sum(bifunctor_from_functor(f->left), bifunctor_from_functor(f->right));
    case FunctorKind::Prod:
      return bf::prod(bifunctor_from_functor(f->left), bifunctor_from_functor(f->right));
  }
  return bf::hole();
}

BifunctorExpr bifunctor_from_type(const TypeExpr& body, const std::string& hole) {
  if (!occurs_free(body, hole)) {
    if (!is_monotype(body)) throw UnsupportedError("quantified type inside a polytype component");
    return bf::constant(body);
  }
  switch (body->kind) {
    case TypeKind::Var:
      return bf::hole();
    case TypeKind::Sum:
      return bf::sum(bifunctor_from_type(body->left, hole), bifunctor_from_type(body->right, hole));
    case TypeKind::Prod:
      return bf::prod(bifunctor_from_type(body->left, hole), bifunctor_from_type(body->right, hole));
    case TypeKind::Arrow:
      return bf::arrow(bifunctor_from_type(body->left, hole), bifunctor_from_type(body->right, hole));
    case TypeKind::Forall:
      throw UnsupportedError("nested quantifier over " + hole);
    default:
      throw UnsupportedError("type variable " + hole + " occurs inside a fixpoint");
  }
}

namespace {
TypeExpr bifunctor_to_type_at(const BifunctorExpr& w, const TypeExpr& negative, const TypeExpr& positive,
                              bool covariant) {
  switch (w->kind) {
    case BifunctorKind::Const:
      return w->constant;
    case BifunctorKind::Hole:
      return covariant ? positive : negative;
    case BifunctorKind::Sum:
      return ty::sum(bifunctor_to_type_at(w->left, negative, positive, covariant),
                     bifunctor_to_type_at(w->right, negative, positive, covariant));
    case BifunctorKind::Prod:
      return ty::prod(bifunctor_to_type_at(w->left, negative, positive, covariant),
                      bifunctor_to_type_at(w->right, negative, positive, covariant));
    case BifunctorKind::Arrow:
      return ty::arrow(bifunctor_to_type_at(w->left, negative, positive, !covariant),
                       bifunctor_to_type_at(w->right, negative, positive, covariant));
  }
  return w->constant;
}
}  // namespace

TypeExpr bifunctor_to_type(const BifunctorExpr& w, const TypeExpr& negative, const TypeExpr& positive) {
  return bifunctor_to_type_at(w, negative, positive, true);
}

PolytypeDecomposition decompose_polytype(const TypeExpr& body, const std::string& var) {
  PolytypeDecomposition out;
  TypeExpr cursor = body;
  while (cursor->kind == TypeKind::Arrow) {
    out.components.push_back(cursor->left);
    cursor = cursor->right;
  }
  auto positivity = check_positivity(cursor, var);
  if (!positivity.ok)
    throw DecompositionError("NotCurriedNormalForm: final codomain is not covariant in " + var + " (" +
                             positivity.message + ")");
  if (!is_monotype(cursor)) throw DecompositionError("NotCurriedNormalForm: quantifier in codomain");
  out.V = functor_from_type(cursor, var);
  for (const auto& c : out.components) {
    try {
      out.component_bifunctors.push_back(bifunctor_from_type(c, var));
    } catch (const UnsupportedError& e) {
      throw DecompositionError(std::string("NotCurriedNormalForm: ") + e.what());
    }
  }
  if (out.component_bifunctors.empty()) {
    out.W = bf::constant(ty::unit());
  } else {
    out.W = out.component_bifunctors.back();
    for (std::size_t i = out.component_bifunctors.size() - 1; i-- > 0;)
      out.W = bf::prod(out.component_bifunctors[i], out.W);
  }
  return out;
}

}  // namespace fusec
