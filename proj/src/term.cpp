#include "fusec/term.hpp"

#include <functional>
#include <map>
#include <utility>

namespace fusec {

namespace {

Term make(TermKind kind, std::vector<Term> kids = {}) {
  auto node = std::make_shared<TermNode>();
  node->kind = kind;
  node->kids = std::move(kids);
  return node;
}

Term make_f(TermKind kind, FunctorExpr f, Term kid) {
  auto node = std::make_shared<TermNode>();
  node->kind = kind;
  node->functor = std::move(f);
  node->kids = {std::move(kid)};
  return node;
}

}  // namespace

namespace tm {
Term var(std::string name) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Var;
  node->name = std::move(name);
  return node;
}
Term lam(std::string var, TypeExpr type, Term body) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Lam;
  node->name = std::move(var);
  node->type = std::move(type);
  node->kids = {std::move(body)};
  return node;
}
Term app(Term fn, Term arg) { return make(TermKind::App, {std::move(fn), std::move(arg)}); }
Term apps(Term fn, std::initializer_list<Term> args) {
  for (const auto& a : args) fn = app(fn, a);
  return fn;
}
Term tylam(std::string tyvar, Term body) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::TyLam;
  node->name = std::move(tyvar);
  node->kids = {std::move(body)};
  return node;
}
Term tyapp(Term fn, TypeExpr type) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::TyApp;
  node->type = std::move(type);
  node->kids = {std::move(fn)};
  return node;
}
Term unit() { return make(TermKind::Unit); }
Term nat(std::uint64_t n) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::NatLit;
  node->nat = n;
  return node;
}
Term add(Term a, Term b) { return make(TermKind::Add, {std::move(a), std::move(b)}); }
Term pair(Term a, Term b) { return make(TermKind::Pair, {std::move(a), std::move(b)}); }
Term fst(Term e) { return make(TermKind::Proj1, {std::move(e)}); }
Term snd(Term e) { return make(TermKind::Proj2, {std::move(e)}); }
Term inl(TypeExpr sum_type, Term e) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Inl;
  node->type = std::move(sum_type);
  node->kids = {std::move(e)};
  return node;
}
Term inr(TypeExpr sum_type, Term e) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Inr;
  node->type = std::move(sum_type);
  node->kids = {std::move(e)};
  return node;
}
Term case_of(Term scrutinee, std::string left_var, Term left, std::string right_var, Term right) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Case;
  node->name = std::move(left_var);
  node->name2 = std::move(right_var);
  node->kids = {std::move(scrutinee), std::move(left), std::move(right)};
  return node;
}
Term in(FunctorExpr f, Term e) { return make_f(TermKind::InMu, std::move(f), std::move(e)); }
Term unroll(FunctorExpr f, Term e) { return make_f(TermKind::Unroll, std::move(f), std::move(e)); }
Term cata(FunctorExpr f, Term algebra) { return make_f(TermKind::Cata, std::move(f), std::move(algebra)); }
Term out(FunctorExpr f, Term e) { return make_f(TermKind::OutNu, std::move(f), std::move(e)); }
Term ana(FunctorExpr f, Term coalgebra) { return make_f(TermKind::Ana, std::move(f), std::move(coalgebra)); }
Term build(FunctorExpr f, Term producer) { return make_f(TermKind::Build, std::move(f), std::move(producer)); }
Term cobuild(FunctorExpr f, Term consumer) {
  return make_f(TermKind::Cobuild, std::move(f), std::move(consumer));
}
Term compose(Term h, Term f) { return make(TermKind::Compose, {std::move(h), std::move(f)}); }
Term let(std::string var, Term bound, Term body) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Let;
  node->name = std::move(var);
  node->kids = {std::move(bound), std::move(body)};
  return node;
}
}  // namespace tm

Term with_kids(const Term& node, std::vector<Term> kids) {
  auto copy = std::make_shared<TermNode>(*node);
  copy->kids = std::move(kids);
  return copy;
}

Term with_pos(const Term& node, SourcePos pos) {
  auto copy = std::make_shared<TermNode>(*node);
  copy->pos = pos;
  return copy;
}

std::vector<std::string> binders_for_kid(const Term& node, std::size_t kid) {
  switch (node->kind) {
    case TermKind::Lam:
      return {node->name};
    case TermKind::Case:
      if (kid == 1) return {node->name};
      if (kid == 2) return {node->name2};
      return {};
    case TermKind::Let:
      if (kid == 1) return {node->name};
      return {};
    default:
      return {};
  }
}

bool is_binder_kid(const Term& node, std::size_t kid) { return !binders_for_kid(node, kid).empty(); }

// ---------------------------------------------------------------------------
// Equality

namespace {

bool same_payload(const TermNode& a, const TermNode& b, bool compare_names) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  if (a.nat != b.nat) return false;
  if ((a.type == nullptr) != (b.type == nullptr)) return false;
  if (a.type && !type_equal(a.type, b.type)) return false;
  if ((a.functor == nullptr) != (b.functor == nullptr)) return false;
  if (a.functor && !functor_equal(a.functor, b.functor)) return false;
  if (a.kind == TermKind::Var && a.name != b.name && compare_names) return false;
  if (a.kind == TermKind::TyLam && a.name != b.name) return false;
  if (compare_names && (a.name != b.name || a.name2 != b.name2)) return false;
  return true;
}

bool alpha_equal_in(const Term& a, const Term& b, std::vector<std::pair<std::string, std::string>>& env) {
  if (!same_payload(*a, *b, false)) return false;
  if (a->kind == TermKind::Var) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      bool l = it->first == a->name;
      bool r = it->second == b->name;
      if (l || r) return l && r;
    }
    return a->name == b->name;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    auto la = binders_for_kid(a, i);
    auto lb = binders_for_kid(b, i);
    for (std::size_t j = 0; j < la.size(); ++j) env.emplace_back(la[j], lb[j]);
    bool eq = alpha_equal_in(a->kids[i], b->kids[i], env);
    for (std::size_t j = 0; j < la.size(); ++j) env.pop_back();
    if (!eq) return false;
  }
  return true;
}

}  // namespace

bool term_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!same_payload(*a, *b, true)) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!term_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool alpha_equal(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_equal_in(a, b, env);
}

// ---------------------------------------------------------------------------
// Variables

namespace {
void collect_fv(const Term& t, std::multiset<std::string>& bound, std::set<std::string>& out) {
  if (t->kind == TermKind::Var) {
    if (!bound.count(t->name)) out.insert(t->name);
    return;
  }
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    auto names = binders_for_kid(t, i);
    for (const auto& n : names) bound.insert(n);
    collect_fv(t->kids[i], bound, out);
    for (const auto& n : names) bound.erase(bound.find(n));
  }
}

void collect_all_names(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermKind::Var) out.insert(t->name);
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    for (const auto& n : binders_for_kid(t, i)) out.insert(n);
    collect_all_names(t->kids[i], out);
  }
}
}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_fv(t, bound, out);
  return out;
}

std::string fresh_name(const std::set<std::string>& avoid, const std::string& base) {
  std::string stem = base;
  auto underscore = stem.rfind('_');
  if (underscore != std::string::npos && underscore + 1 < stem.size() &&
      stem.find_first_not_of("0123456789", underscore + 1) == std::string::npos)
    stem = stem.substr(0, underscore);
  if (!avoid.count(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string candidate = stem + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

namespace {

Term rename_binder(const Term& node, std::size_t kid, const std::string& fresh) {
  auto copy = std::make_shared<TermNode>(*node);
  const std::string old = binders_for_kid(node, kid).front();
  if (node->kind == TermKind::Case && kid == 2)
    copy->name2 = fresh;
  else
    copy->name = fresh;
  copy->kids[kid] = subst_term(node->kids[kid], old, tm::var(fresh));
  return copy;
}

}  // namespace

Term subst_term(const Term& t, const std::string& var, const Term& replacement) {
  if (t->kind == TermKind::Var) return t->name == var ? replacement : t;
  if (!free_vars(t).count(var)) return t;
  auto repl_fv = free_vars(replacement);
  Term current = t;
  std::vector<Term> kids = current->kids;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto names = binders_for_kid(current, i);
    if (!names.empty() && names.front() == var) continue;  // shadowed
    if (!names.empty() && repl_fv.count(names.front()) && free_vars(kids[i]).count(var)) {
      std::set<std::string> avoid = repl_fv;
      collect_all_names(kids[i], avoid);
      avoid.insert(var);
      std::string fresh = fresh_name(avoid, names.front());
      current = rename_binder(current, i, fresh);
      kids = current->kids;
    }
    kids[i] = subst_term(kids[i], var, replacement);
  }
  return with_kids(current, std::move(kids));
}

namespace {

struct Normalizer {
  std::set<std::string> used;

  Term run(const Term& t, const std::map<std::string, std::string>& renames) {
    if (t->kind == TermKind::Var) {
      auto it = renames.find(t->name);
      if (it == renames.end() || it->second == t->name) return t;
      auto copy = std::make_shared<TermNode>(*t);
      copy->name = it->second;
      return copy;
    }
    auto copy = std::make_shared<TermNode>(*t);
    for (std::size_t i = 0; i < t->kids.size(); ++i) {
      auto names = binders_for_kid(t, i);
      if (names.empty()) {
        copy->kids[i] = run(t->kids[i], renames);
        continue;
      }
      std::string fresh = fresh_name(used, names.front());
      if (!used.count(names.front())) fresh = names.front();
      used.insert(fresh);
      auto inner = renames;
      inner[names.front()] = fresh;
      if (t->kind == TermKind::Case && i == 2)
        copy->name2 = fresh;
      else
        copy->name = fresh;
      copy->kids[i] = run(t->kids[i], inner);
    }
    return copy;
  }
};

}  // namespace

Term alpha_normalize(const Term& t, const std::set<std::string>& reserved) {
  Normalizer n;
  n.used = reserved;
  auto fv = free_vars(t);
  n.used.insert(fv.begin(), fv.end());
  return n.run(t, {});
}

// ---------------------------------------------------------------------------
// Paths

Term subterm_at(const Term& t, const TermPath& path) {
  Term cur = t;
  for (int step : path) {
    if (step < 0 || static_cast<std::size_t>(step) >= cur->kids.size())
      throw Error("invalid term path " + path_to_string(path));
    cur = cur->kids[static_cast<std::size_t>(step)];
  }
  return cur;
}

namespace {
Term replace_from(const Term& t, const TermPath& path, std::size_t depth, const Term& replacement) {
  if (depth == path.size()) return replacement;
  auto idx = static_cast<std::size_t>(path[depth]);
  if (idx >= t->kids.size()) throw Error("invalid term path " + path_to_string(path));
  auto kids = t->kids;
  kids[idx] = replace_from(kids[idx], path, depth + 1, replacement);
  return with_kids(t, std::move(kids));
}
}  // namespace

Term replace_at(const Term& t, const TermPath& path, const Term& replacement) {
  return replace_from(t, path, 0, replacement);
}

std::string path_to_string(const TermPath& path) {
  if (path.empty()) return "/";
  std::string s;
  for (int step : path) s += "/" + std::to_string(step);
  return s;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& k : t->kids) n += term_size(k);
  return n;
}

// ---------------------------------------------------------------------------
// fmap

namespace {

struct FmapBuilder {
  const Term& h;
  const TypeExpr& src;
  const TypeExpr& dst;
  std::set<std::string> avoid;

  std::string fresh(const std::string& base) {
    std::string n = fresh_name(avoid, base);
    avoid.insert(n);
    return n;
  }

  Term body(const FunctorExpr& f, const Term& e) {
    switch (f->kind) {
      case FunctorKind::Const:
        return e;
      case FunctorKind::Id:
        return tm::app(h, e);
      case FunctorKind::Prod:
        return tm::pair(body(f->left, tm::fst(e)), body(f->right, tm::snd(e)));
      case FunctorKind::Sum: {
        TypeExpr target = functor_apply(f, dst);
        std::string l = fresh("l");
        std::string r = fresh("r");
        return tm::case_of(e, l, tm::inl(target, body(f->left, tm::var(l))), r,
                           tm::inr(target, body(f->right, tm::var(r))));
      }
    }
    return e;
  }
};

}  // namespace

Term fmap_term(const FunctorExpr& f, const Term& h, const TypeExpr& src, const TypeExpr& dst) {
  FmapBuilder b{h, src, dst, free_vars(h)};
  std::string z = b.fresh("z");
  return tm::lam(z, functor_apply(f, src), b.body(f, tm::var(z)));
}

}  // namespace fusec
