#include "fusec/typecheck.hpp"

#include <algorithm>
#include <utility>

namespace fusec {

TypingContext TypingContext::with_var(const std::string& name, TypeExpr type) const {
  TypingContext c = *this;
  c.vars.emplace_back(name, std::move(type));
  return c;
}

TypingContext TypingContext::with_tyvar(const std::string& name) const {
  TypingContext c = *this;
  c.tyvars.push_back(name);
  return c;
}

const TypeExpr* TypingContext::lookup(const std::string& name) const {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

bool TypingContext::has_tyvar(const std::string& name) const {
  return std::find(tyvars.begin(), tyvars.end(), name) != tyvars.end();
}

const char* to_string(TypeError::Kind kind) {
  switch (kind) {
    case TypeError::Kind::TypeMismatch:
      return "TypeMismatch";
    case TypeError::Kind::EscapedTypeVariable:
      return "EscapedTypeVariable";
    case TypeError::Kind::UnboundVariable:
      return "UnboundVariable";
    case TypeError::Kind::UnboundTypeVariable:
      return "UnboundTypeVariable";
    case TypeError::Kind::NotAFunction:
      return "NotAFunction";
    case TypeError::Kind::NotPolymorphic:
      return "NotPolymorphic";
    case TypeError::Kind::ImpredicativeAnnotation:
      return "ImpredicativeAnnotation";
  }
  return "TypeError";
}

namespace {
std::string render(TypeError::Kind kind, const std::string& detail, const TermPath& path, SourcePos pos,
                   const std::string& decl) {
  std::string msg = to_string(kind);
  if (!decl.empty()) msg += " in " + decl;
  msg += " at " + path_to_string(path);
  if (pos.line > 0) msg += " (line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ")";
  msg += ": " + detail;
  return msg;
}
}  // namespace

TypeError::TypeError(Kind kind, std::string detail, TermPath path, SourcePos pos, std::string decl)
    : Error(render(kind, detail, path, pos, decl)),
      kind_(kind),
      detail_(std::move(detail)),
      path_(std::move(path)),
      pos_(pos),
      decl_(std::move(decl)) {}

TypeChecker::TypeChecker(const Program& program, std::size_t visible) : program_(program), visible_(visible) {}

void TypeChecker::check_type_wf(const TypingContext& ctx, const TypeExpr& t, bool allow_forall,
                                const TermPath& path, SourcePos pos) const {
  if (!allow_forall && !is_monotype(t))
    throw TypeError(TypeError::Kind::ImpredicativeAnnotation,
                    "quantified type " + to_string(t) + " is not allowed here", path, pos);
  for (const auto& v : free_type_vars(t))
    if (!ctx.has_tyvar(v))
      throw TypeError(TypeError::Kind::UnboundTypeVariable, "type variable " + v + " is not in scope", path, pos);
}

namespace {

TermPath child(const TermPath& p, int k) {
  TermPath c = p;
  c.push_back(k);
  return c;
}

void expect(const TypeExpr& expected, const TypeExpr& actual, const TermPath& path, SourcePos pos,
            const std::string& what) {
  if (!type_equal(expected, actual))
    throw TypeError(TypeError::Kind::TypeMismatch,
                    what + ": expected " + to_string(expected) + ", found " + to_string(actual), path, pos);
}

const TypeExpr& expect_arrow(const TypeExpr& t, const TermPath& path, SourcePos pos, const std::string& what) {
  if (t->kind != TypeKind::Arrow)
    throw TypeError(TypeError::Kind::NotAFunction, what + ": expected a function type, found " + to_string(t),
                    path, pos);
  return t;
}

}  // namespace

TypingContext TypeChecker::child_context(const TypingContext& ctx, const Term& node, std::size_t kid) const {
  switch (node->kind) {
    case TermKind::Lam:
      return ctx.with_var(node->name, node->type);
    case TermKind::TyLam:
      return ctx.with_tyvar(node->name);
    case TermKind::Case: {
      if (kid == 0) return ctx;
      TypeExpr s = check(ctx, node->kids[0]);
      if (s->kind != TypeKind::Sum) return ctx;
      return kid == 1 ? ctx.with_var(node->name, s->left) : ctx.with_var(node->name2, s->right);
    }
    case TermKind::Let:
      if (kid == 0) return ctx;
      return ctx.with_var(node->name, check(ctx, node->kids[0]));
    default:
      return ctx;
  }
}

TypingContext TypeChecker::context_at(const TypingContext& ctx, const Term& root, const TermPath& path) const {
  TypingContext c = ctx;
  Term cur = root;
  for (int step : path) {
    c = child_context(c, cur, static_cast<std::size_t>(step));
    cur = cur->kids[static_cast<std::size_t>(step)];
  }
  return c;
}

TypeExpr TypeChecker::check(const TypingContext& ctx, const Term& t, TermPath path) const {
  const SourcePos pos = t->pos;
  auto sub = [&](std::size_t k, const TypingContext& c) {
    return check(c, t->kids[k], child(path, static_cast<int>(k)));
  };
  switch (t->kind) {
    case TermKind::Var: {
      if (const TypeExpr* local = ctx.lookup(t->name)) return *local;
      if (const Decl* d = program_.find_term(t->name, visible_)) return d->type;
      throw TypeError(TypeError::Kind::UnboundVariable, "unbound variable " + t->name, path, pos);
    }
    case TermKind::Lam: {
      check_type_wf(ctx, t->type, false, path, pos);
      TypeExpr body = sub(0, ctx.with_var(t->name, t->type));
      return ty::arrow(t->type, body);
    }
    case TermKind::App: {
      TypeExpr f = expect_arrow(sub(0, ctx), child(path, 0), t->kids[0]->pos, "application");
      TypeExpr a = sub(1, ctx);
      expect(f->left, a, child(path, 1), t->kids[1]->pos, "argument");
      return f->right;
    }
    case TermKind::TyLam: {
      TypeExpr body = sub(0, ctx.with_tyvar(t->name));
      return ty::forall(t->name, body);
    }
    case TermKind::TyApp: {
      check_type_wf(ctx, t->type, false, path, pos);
      TypeExpr f = sub(0, ctx);
      if (f->kind != TypeKind::Forall)
        throw TypeError(TypeError::Kind::NotPolymorphic, "type application to " + to_string(f), path, pos);
      return subst_type(f->left, f->name, t->type);
    }
    case TermKind::Unit:
      return ty::unit();
    case TermKind::NatLit:
      return ty::nat();
    case TermKind::Add:
      expect(ty::nat(), sub(0, ctx), child(path, 0), t->kids[0]->pos, "addition operand");
      expect(ty::nat(), sub(1, ctx), child(path, 1), t->kids[1]->pos, "addition operand");
      return ty::nat();
    case TermKind::Pair:
      return ty::prod(sub(0, ctx), sub(1, ctx));
    case TermKind::Proj1:
    case TermKind::Proj2: {
      TypeExpr p = sub(0, ctx);
      if (p->kind != TypeKind::Prod)
        throw TypeError(TypeError::Kind::TypeMismatch, "projection from non-product " + to_string(p), path, pos);
      return t->kind == TermKind::Proj1 ? p->left : p->right;
    }
    case TermKind::Inl:
    case TermKind::Inr: {
      check_type_wf(ctx, t->type, false, path, pos);
      if (t->type->kind != TypeKind::Sum)
        throw TypeError(TypeError::Kind::TypeMismatch, "injection annotated with non-sum " + to_string(t->type),
                        path, pos);
      TypeExpr e = sub(0, ctx);
      expect(t->kind == TermKind::Inl ? t->type->left : t->type->right, e, child(path, 0), t->kids[0]->pos,
             "injection payload");
      return t->type;
    }
    case TermKind::Case: {
      TypeExpr s = sub(0, ctx);
      if (s->kind != TypeKind::Sum)
        throw TypeError(TypeError::Kind::TypeMismatch, "case on non-sum " + to_string(s), child(path, 0),
                        t->kids[0]->pos);
      TypeExpr l = sub(1, ctx.with_var(t->name, s->left));
      TypeExpr r = sub(2, ctx.with_var(t->name2, s->right));
      expect(l, r, child(path, 2), t->kids[2]->pos, "case branches");
      return l;
    }
    case TermKind::InMu: {
      TypeExpr m = ty::mu(t->functor);
      expect(functor_apply(t->functor, m), sub(0, ctx), child(path, 0), t->kids[0]->pos, "in payload");
      return m;
    }
    case TermKind::Unroll: {
      TypeExpr m = ty::mu(t->functor);
      expect(m, sub(0, ctx), child(path, 0), t->kids[0]->pos, "unroll argument");
      return functor_apply(t->functor, m);
    }
    case TermKind::OutNu: {
      TypeExpr n = ty::nu(t->functor);
      expect(n, sub(0, ctx), child(path, 0), t->kids[0]->pos, "out argument");
      return functor_apply(t->functor, n);
    }
    case TermKind::Cata: {
      TypeExpr c = expect_arrow(sub(0, ctx), child(path, 0), t->kids[0]->pos, "fold algebra");
      expect(functor_apply(t->functor, c->right), c->left, child(path, 0), t->kids[0]->pos, "fold algebra domain");
      return ty::arrow(ty::mu(t->functor), c->right);
    }
    case TermKind::Ana: {
      TypeExpr a = expect_arrow(sub(0, ctx), child(path, 0), t->kids[0]->pos, "unfold coalgebra");
      expect(functor_apply(t->functor, a->left), a->right, child(path, 0), t->kids[0]->pos,
             "unfold coalgebra codomain");
      return ty::arrow(a->left, ty::nu(t->functor));
    }
    case TermKind::Build:
    case TermKind::Cobuild: {
      const bool inductive = t->kind == TermKind::Build;
      const char* what = inductive ? "build body" : "cobuild body";
      TypeExpr p = sub(0, ctx);
      if (p->kind != TypeKind::Forall)
        throw TypeError(TypeError::Kind::NotPolymorphic,
                        std::string(what) + " must be polymorphic, found " + to_string(p), child(path, 0),
                        t->kids[0]->pos);
      const std::string& x = p->name;
      TypeExpr hole = ty::var(x);
      TypeExpr structure = inductive ? ty::arrow(functor_apply(t->functor, hole), hole)
                                     : ty::arrow(hole, functor_apply(t->functor, hole));
      const TypeExpr& body = p->left;
      if (body->kind != TypeKind::Arrow || body->right->kind != TypeKind::Arrow)
        throw TypeError(TypeError::Kind::TypeMismatch,
                        std::string(what) + ": expected a curried function of two arguments, found " + to_string(p),
                        child(path, 0), t->kids[0]->pos);
      if (occurs_free(ty::mu(t->functor), x))
        throw TypeError(TypeError::Kind::EscapedTypeVariable,
                        "type variable " + x + " occurs in the functor " + to_string(t->functor), path, pos);
      expect(structure, body->left, child(path, 0), t->kids[0]->pos,
             std::string(what) + (inductive ? " algebra argument" : " coalgebra argument"));
      const TypeExpr& rest = body->right;
      if (inductive) {
        expect(hole, rest->right, child(path, 0), t->kids[0]->pos, "build body result");
        if (occurs_free(rest->left, x))
          throw TypeError(TypeError::Kind::EscapedTypeVariable,
                          "type variable " + x + " escapes into the input type " + to_string(rest->left), path, pos);
        return ty::arrow(rest->left, ty::mu(t->functor));
      }
      expect(hole, rest->left, child(path, 0), t->kids[0]->pos, "cobuild body input");
      if (occurs_free(rest->right, x))
        throw TypeError(TypeError::Kind::EscapedTypeVariable,
                        "type variable " + x + " escapes into the result type " + to_string(rest->right), path, pos);
      return ty::arrow(ty::nu(t->functor), rest->right);
    }
    case TermKind::Compose: {
      TypeExpr h = expect_arrow(sub(0, ctx), child(path, 0), t->kids[0]->pos, "composition left");
      TypeExpr f = expect_arrow(sub(1, ctx), child(path, 1), t->kids[1]->pos, "composition right");
      expect(h->left, f->right, path, pos, "composition middle type");
      return ty::arrow(f->left, h->right);
    }
    case TermKind::Let: {
      TypeExpr bound = sub(0, ctx);
      return sub(1, ctx.with_var(t->name, bound));
    }
  }
  throw TypeError(TypeError::Kind::TypeMismatch, "unknown term", path, pos);
}

TypeExpr typecheck_term(const Program& program, const TypingContext& ctx, const Term& t) {
  return TypeChecker(program).check(ctx, t);
}

std::vector<DeclType> typecheck_program(const Program& program) {
  std::vector<DeclType> out;
  for (std::size_t i = 0; i < program.decls.size(); ++i) {
    const Decl& d = program.decls[i];
    if (d.kind != DeclKind::Term) continue;
    TypeChecker checker(program, i + 1);
    try {
      TypingContext top;
      TypeExpr declared = d.type;
      while (declared->kind == TypeKind::Forall) declared = declared->left;
      if (!is_monotype(declared))
        throw TypeError(TypeError::Kind::ImpredicativeAnnotation,
                        "declared type must be a prefix of quantifiers over a monotype", {}, d.pos);
      if (!free_type_vars(d.type).empty())
        throw TypeError(TypeError::Kind::UnboundTypeVariable,
                        "declared type " + to_string(d.type) + " has free type variables", {}, d.pos);
      TypeExpr actual = checker.check(top, d.body);
      expect(d.type, actual, {}, d.body->pos, "declaration " + d.name);
    } catch (const TypeError& e) {
      throw TypeError(e.kind(), e.detail(), e.path(), e.pos(), d.name);
    }
    out.push_back({d.name, d.type});
  }
  return out;
}

}  // namespace fusec
