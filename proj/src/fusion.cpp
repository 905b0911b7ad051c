#include "fusec/fusion.hpp"

#include <algorithm>
#include <set>

#include "fusec/syntax.hpp"

namespace fusec {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::R1:
      return "R1";
    case Rule::R2:
      return "R2";
    case Rule::R3:
      return "R3";
  }
  return "?";
}

std::size_t RewriteReport::count(Rule r) const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [r](const RewriteStep& s) { return s.rule == r; }));
}

namespace {

bool is(const Term& t, TermKind k) { return t->kind == k; }

std::set<std::string> global_names(const Program& program) {
  std::set<std::string> out;
  for (const auto& n : program.term_names()) out.insert(n);
  return out;
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermKind::Var) out.insert(t->name);
  if (!t->name.empty()) out.insert(t->name);
  if (!t->name2.empty()) out.insert(t->name2);
  for (const auto& k : t->kids) collect_names(k, out);
}

void collect_tyvars(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermKind::TyLam) out.insert(t->name);
  if (t->type)
    for (const auto& v : free_type_vars(t->type)) out.insert(v);
  for (const auto& k : t->kids) collect_tyvars(k, out);
}

// Carrier C of an algebra c : F C -> C.
TypeExpr algebra_carrier(const RewriteScope& scope, const Term& c) {
  TypeExpr t = TypeChecker(scope.program, scope.visible).check(scope.ctx, c);
  if (t->kind != TypeKind::Arrow) throw Error("fold algebra is not a function");
  return t->right;
}

// Carrier A of a coalgebra a : A -> F A.
TypeExpr coalgebra_carrier(const RewriteScope& scope, const Term& a) {
  TypeExpr t = TypeChecker(scope.program, scope.visible).check(scope.ctx, a);
  if (t->kind != TypeKind::Arrow) throw Error("unfold coalgebra is not a function");
  return t->left;
}

// Shared shape of R1 and R2: outer . inner where `outer_kind` wraps the
// consumer structure and `inner_kind` the producer marker (or vice versa).
std::optional<Term> rewrite_pair(const RewriteScope& scope, const Term& t, TermKind outer_kind,
                                 TermKind inner_kind, bool inductive, std::vector<std::string>* warnings) {
  // fold[F] c against build[G] p (R1), cobuild[F] q against unfold[G] a (R2).
  auto fused = [&](const Term& outer, const Term& inner) -> std::optional<Term> {
    if (!functor_equal(outer->functor, inner->functor)) {
      if (warnings)
        warnings->push_back("FunctorMismatch: " + to_string(outer->functor) + " against " +
                            to_string(inner->functor));
      return std::nullopt;
    }
    if (inductive) {
      const Term& c = outer->kids[0];
      const Term& p = inner->kids[0];
      return tm::app(tm::tyapp(p, algebra_carrier(scope, c)), c);
    }
    const Term& q = outer->kids[0];
    const Term& a = inner->kids[0];
    return tm::app(tm::tyapp(q, coalgebra_carrier(scope, a)), a);
  };
  const auto& k = t->kids;
  if (is(t, TermKind::App) && is(k[0], outer_kind) && is(k[1], TermKind::App) && is(k[1]->kids[0], inner_kind)) {
    if (auto f = fused(k[0], k[1]->kids[0])) return tm::app(*f, k[1]->kids[1]);
    return std::nullopt;
  }
  if (!is(t, TermKind::Compose)) return std::nullopt;
  if (is(k[0], outer_kind) && is(k[1], inner_kind)) return fused(k[0], k[1]);
  if (is(k[0], outer_kind) && is(k[1], TermKind::Compose) && is(k[1]->kids[0], inner_kind)) {
    if (auto f = fused(k[0], k[1]->kids[0])) return tm::compose(*f, k[1]->kids[1]);
    return std::nullopt;
  }
  if (is(k[0], TermKind::Compose) && is(k[0]->kids[1], outer_kind) && is(k[1], inner_kind)) {
    if (auto f = fused(k[0]->kids[1], k[1])) return tm::compose(k[0]->kids[0], *f);
    return std::nullopt;
  }
  return std::nullopt;
}

// Renames `var` in `body` away from `avoid`.
std::pair<std::string, Term> freshen(const std::string& var, const Term& body, const std::set<std::string>& avoid) {
  if (!avoid.count(var)) return {var, body};
  std::set<std::string> all = avoid;
  collect_names(body, all);
  std::string fresh = fresh_name(all, var);
  return {fresh, subst_term(body, var, tm::var(fresh))};
}

Term push_into_case(const Term& h, const Term& c) {
  std::set<std::string> fv = free_vars(h);
  auto [x, l] = freshen(c->name, c->kids[1], fv);
  auto [y, r] = freshen(c->name2, c->kids[2], fv);
  return tm::case_of(c->kids[0], x, tm::app(h, l), y, tm::app(h, r));
}

std::size_t case_spine(const Term& t) {
  if (!is(t, TermKind::Case)) return 0;
  return 1 + case_spine(t->kids[1]) + case_spine(t->kids[2]);
}

bool pair_redex(const Term& t, TermKind outer, TermKind inner) {
  const auto& k = t->kids;
  if (is(t, TermKind::App)) return is(k[0], outer) && is(k[1], TermKind::App) && is(k[1]->kids[0], inner);
  if (!is(t, TermKind::Compose)) return false;
  return (is(k[0], outer) && is(k[1], inner)) ||
         (is(k[0], outer) && is(k[1], TermKind::Compose) && is(k[1]->kids[0], inner)) ||
         (is(k[0], TermKind::Compose) && is(k[0]->kids[1], outer) && is(k[1], inner));
}

}  // namespace

std::optional<Term> rewrite_case_compose(const Term& t) {
  const auto& k = t->kids;
  if (is(t, TermKind::App) && is(k[1], TermKind::Case)) return push_into_case(k[0], k[1]);
  if (is(t, TermKind::Compose) && is(k[1], TermKind::Lam) && is(k[1]->kids[0], TermKind::Case)) {
    const Term& lam = k[1];
    auto [z, body] = freshen(lam->name, lam->kids[0], free_vars(k[0]));
    return tm::lam(z, lam->type, push_into_case(k[0], body));
  }
  return std::nullopt;
}

std::optional<Term> rewrite_cata_build(const RewriteScope& scope, const Term& t, std::vector<std::string>* warnings) {
  return rewrite_pair(scope, t, TermKind::Cata, TermKind::Build, true, warnings);
}

std::optional<Term> rewrite_ana_cobuild(const RewriteScope& scope, const Term& t,
                                        std::vector<std::string>* warnings) {
  return rewrite_pair(scope, t, TermKind::Cobuild, TermKind::Ana, false, warnings);
}

std::size_t fusion_measure(const Term& t) {
  std::size_t m = 0;
  if (pair_redex(t, TermKind::Cata, TermKind::Build) || pair_redex(t, TermKind::Cobuild, TermKind::Ana)) ++m;
  if (is(t, TermKind::App)) m += case_spine(t->kids[1]);
  if (is(t, TermKind::Compose) && is(t->kids[1], TermKind::Lam)) {
    std::size_t s = case_spine(t->kids[1]->kids[0]);
    if (s) m += s + 1;
  }
  for (const auto& k : t->kids) m += fusion_measure(k);
  return m;
}

namespace {

std::optional<Term> try_rule(const RewriteScope& scope, const Term& t, Rule rule, std::vector<std::string>* warnings) {
  switch (rule) {
    case Rule::R1:
      return rewrite_cata_build(scope, t, warnings);
    case Rule::R2:
      return rewrite_ana_cobuild(scope, t, warnings);
    case Rule::R3:
      return rewrite_case_compose(t);
  }
  return std::nullopt;
}

struct Redex {
  TermPath path;
  Rule rule;
  Term replacement;
  TypingContext ctx;
};

bool find_redex(const RewriteScope& scope, const TypeChecker& checker, const TypingContext& ctx, const Term& t,
                TermPath& path, Redex& out, std::vector<std::string>& warnings) {
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    path.push_back(static_cast<int>(k));
    if (find_redex(scope, checker, checker.child_context(ctx, t, k), t->kids[k], path, out, warnings)) return true;
    path.pop_back();
  }
  RewriteScope here{scope.program, scope.visible, ctx};
  for (Rule r : {Rule::R1, Rule::R2, Rule::R3}) {
    if (auto rep = try_rule(here, t, r, &warnings)) {
      out = Redex{path, r, *rep, ctx};
      return true;
    }
  }
  return false;
}

std::string snippet(const Term& t, const RewriteScope& scope) {
  constexpr std::size_t kMax = 240;
  std::string s = print_term(t, scope.program, scope.visible);
  if (s.size() > kMax) s = s.substr(0, kMax - 3) + "...";
  return s;
}

}  // namespace

FuseResult fuse_fixpoint(const RewriteScope& scope, const Term& t, const FuseOptions& options) {
  TypeChecker checker(scope.program, scope.visible);
  FuseResult result{t, {}};
  RewriteReport& report = result.report;
  std::set<std::string> seen_warnings;
  while (true) {
    std::vector<std::string> warnings;
    Redex redex;
    TermPath path;
    bool found = find_redex(scope, checker, scope.ctx, result.term, path, redex, warnings);
    for (auto& w : warnings)
      if (seen_warnings.insert(w).second) report.warnings.push_back(w);
    if (!found) break;
    if (report.iterations >= options.max_iterations) {
      report.converged = false;
      report.warnings.push_back("IterationCap: stopped after " + std::to_string(report.iterations) + " rewrites");
      break;
    }
    Term before = subterm_at(result.term, redex.path);
    RewriteStep step;
    step.rule = redex.rule;
    step.path = redex.path;
    step.before = snippet(before, scope);
    step.after = snippet(redex.replacement, scope);
    try {
      step.type_preserved =
          type_equal(checker.check(redex.ctx, before), checker.check(redex.ctx, redex.replacement));
    } catch (const TypeError&) {
      step.type_preserved = false;
    }
    step.measure_before = fusion_measure(result.term);
    result.term = replace_at(result.term, redex.path, redex.replacement);
    step.measure_after = fusion_measure(result.term);
    report.steps.push_back(std::move(step));
    ++report.iterations;
  }
  result.term = alpha_normalize(result.term, global_names(scope.program));
  return result;
}

Term apply_rule_at(const RewriteScope& scope, const Term& t, Rule rule, const TermPath& path) {
  TypeChecker checker(scope.program, scope.visible);
  TypingContext ctx = checker.context_at(scope.ctx, t, path);
  RewriteScope here{scope.program, scope.visible, ctx};
  auto rep = try_rule(here, subterm_at(t, path), rule, nullptr);
  if (!rep) throw Error(std::string("no ") + to_string(rule) + " redex at " + path_to_string(path));
  return replace_at(t, path, *rep);
}

Term replay(const RewriteScope& scope, const Term& t, const RewriteReport& report) {
  Term cur = t;
  for (const auto& step : report.steps) cur = apply_rule_at(scope, cur, step.rule, step.path);
  return alpha_normalize(cur, global_names(scope.program));
}

// ---------------------------------------------------------------------------

TypeExpr build_body_type(const FunctorExpr& f, const TypeExpr& input, const std::string& var) {
  TypeExpr x = ty::var(var);
  return ty::forall(var, ty::arrow(ty::arrow(functor_apply(f, x), x), ty::arrow(input, x)));
}

TypeExpr cobuild_body_type(const FunctorExpr& f, const TypeExpr& output, const std::string& var) {
  TypeExpr x = ty::var(var);
  return ty::forall(var, ty::arrow(ty::arrow(x, functor_apply(f, x)), ty::arrow(x, output)));
}

Term reify_build(const Program& program, const Term& f) {
  TypeExpr t = typecheck_term(program, {}, f);
  if (t->kind != TypeKind::Arrow || t->right->kind != TypeKind::Mu)
    throw Error("reify_build expects a term of type A -> Mu F, found " + to_string(t));
  const FunctorExpr& functor = t->right->functor;
  std::set<std::string> avoid = free_vars(f);
  std::string x = fresh_type_var(free_type_vars(t), "X");
  std::string c = fresh_name(avoid, "c");
  avoid.insert(c);
  std::string a = fresh_name(avoid, "a");
  TypeExpr xt = ty::var(x);
  return tm::tylam(x, tm::lam(c, ty::arrow(functor_apply(functor, xt), xt),
                              tm::lam(a, t->left, tm::app(tm::cata(functor, tm::var(c)), tm::app(f, tm::var(a))))));
}

Term reify_cobuild(const Program& program, const Term& g) {
  TypeExpr t = typecheck_term(program, {}, g);
  if (t->kind != TypeKind::Arrow || t->left->kind != TypeKind::Nu)
    throw Error("reify_cobuild expects a term of type Nu F -> B, found " + to_string(t));
  const FunctorExpr& functor = t->left->functor;
  std::set<std::string> avoid = free_vars(g);
  std::string x = fresh_type_var(free_type_vars(t), "X");
  std::string d = fresh_name(avoid, "d");
  avoid.insert(d);
  std::string s = fresh_name(avoid, "x");
  TypeExpr xt = ty::var(x);
  return tm::tylam(x, tm::lam(d, ty::arrow(xt, functor_apply(functor, xt)),
                              tm::lam(s, xt, tm::app(g, tm::app(tm::ana(functor, tm::var(d)), tm::var(s))))));
}

namespace {

struct Abstraction {
  const Program& program;
  std::string self;       // the declaration being abstracted
  std::string self_name;  // its abstract form
  FunctorExpr functor;
  bool inductive;
  std::string structure;  // c or d
  TypeExpr carrier;       // X

  Term marked(const Term& body, const Term& arg) const {
    return tm::app(tm::app(tm::tyapp(body, carrier), tm::var(structure)), arg);
  }

  Term go(const Term& t, TermPath& path, std::set<std::string>& bound) const {
    const auto& k = t->kids;
    auto sub = [&](std::size_t i) {
      path.push_back(static_cast<int>(i));
      auto names = binders_for_kid(t, i);
      std::vector<std::string> added;
      for (const auto& n : names)
        if (bound.insert(n).second) added.push_back(n);
      Term r = go(k[i], path, bound);
      for (const auto& n : added) bound.erase(n);
      path.pop_back();
      return r;
    };
    const TermKind own = inductive ? TermKind::InMu : TermKind::OutNu;
    const TermKind marker = inductive ? TermKind::Build : TermKind::Cobuild;
    if (t->kind == own && functor_equal(t->functor, functor)) return tm::app(tm::var(structure), sub(0));
    if (inductive && (t->kind == TermKind::Unroll || t->kind == TermKind::Cata) && functor_equal(t->functor, functor))
      throw NotAbstractable(path, "the producer inspects a value of its own result type");
    if (t->kind == TermKind::App && is(k[0], TermKind::Var) && k[0]->name == self && !bound.count(self)) {
      Term arg = sub(1);
      return marked(tm::var(self_name), arg);
    }
    if (t->kind == TermKind::App && is(k[0], marker) && functor_equal(k[0]->functor, functor)) {
      path.push_back(0);
      path.push_back(0);
      Term inner = go(k[0]->kids[0], path, bound);
      path.pop_back();
      path.pop_back();
      Term arg = sub(1);
      return marked(inner, arg);
    }
    std::vector<Term> kids;
    for (std::size_t i = 0; i < k.size(); ++i) kids.push_back(sub(i));
    return with_kids(t, std::move(kids));
  }
};

Term abstract_decl(const Program& program, const std::string& name, const std::string& self_name, bool inductive) {
  const Decl* d = program.find_term(name);
  if (!d) throw Error("no term declaration named " + name);
  const TypeExpr& t = d->type;
  const char* want = inductive ? "A -> Mu F" : "Nu F -> B";
  if (t->kind != TypeKind::Arrow || (inductive ? t->right->kind != TypeKind::Mu : t->left->kind != TypeKind::Nu))
    throw NotAbstractable({}, name + " does not have a type of the form " + std::string(want));
  if (!is(d->body, TermKind::Lam)) throw NotAbstractable({}, name + " is not a lambda");
  const TypeExpr fixed = inductive ? t->right : t->left;
  const FunctorExpr& functor = fixed->functor;

  std::set<std::string> tyvars;
  collect_tyvars(d->body, tyvars);
  std::string x = fresh_type_var(tyvars, "X");
  TypeExpr xt = ty::var(x);

  std::set<std::string> names = global_names(program);
  collect_names(d->body, names);
  names.insert(self_name);
  std::string structure = fresh_name(names, inductive ? "c" : "d");

  Term body = map_annotations(d->body, [&](const TypeExpr& a) { return replace_type(a, fixed, xt); });
  Abstraction ab{program, name, self_name, functor, inductive, structure, xt};
  TermPath path{0, 0};
  std::set<std::string> bound;
  body = ab.go(body, path, bound);

  TypeExpr structure_type =
      inductive ? ty::arrow(functor_apply(functor, xt), xt) : ty::arrow(xt, functor_apply(functor, xt));
  Term result = tm::tylam(x, tm::lam(structure, structure_type, body));
  TypeExpr expected = inductive ? build_body_type(functor, t->left, x) : cobuild_body_type(functor, t->right, x);

  Program extended = program;
  Decl self;
  self.kind = DeclKind::Term;
  self.name = self_name;
  self.type = expected;
  self.body = result;
  extended.decls.push_back(self);
  try {
    TypeExpr actual = TypeChecker(extended).check({}, result);
    if (!type_equal(actual, expected))
      throw NotAbstractable({}, "abstracted body has type " + to_string(actual));
  } catch (const TypeError& e) {
    throw NotAbstractable(e.path(), e.what());
  }
  return alpha_normalize(result, global_names(extended));
}

}  // namespace

Term abstract_build(const Program& program, const std::string& name, const std::string& self_name) {
  return abstract_decl(program, name, self_name, true);
}

Term abstract_cobuild(const Program& program, const std::string& name, const std::string& self_name) {
  return abstract_decl(program, name, self_name, false);
}

Term alg_to_cata(const FunctorExpr& f, const TypeExpr& carrier) {
  return tm::lam("x", ty::arrow(functor_apply(f, carrier), carrier), tm::cata(f, tm::var("x")));
}

Term coalg_to_ana(const FunctorExpr& f, const TypeExpr& carrier) {
  return tm::lam("x", ty::arrow(carrier, functor_apply(f, carrier)), tm::ana(f, tm::var("x")));
}

// ---------------------------------------------------------------------------

std::size_t ProgramFusion::count(Rule r) const {
  std::size_t n = 0;
  for (const auto& d : decls) n += d.report.count(r);
  return n;
}

bool ProgramFusion::converged() const {
  return std::all_of(decls.begin(), decls.end(), [](const DeclFusion& d) { return d.report.converged; });
}

namespace {

std::string primed(const Program& program, const std::string& name) {
  std::string n = name + "'";
  while (program.index_of(n) != Program::npos) n += "'";
  return n;
}

void mark_producers(Program& program, ProgramFusion& out) {
  for (std::size_t i = 0; i < program.decls.size(); ++i) {
    Decl d = program.decls[i];
    if (d.kind != DeclKind::Term || d.type->kind != TypeKind::Arrow) continue;
    bool inductive = d.type->right->kind == TypeKind::Mu;
    bool coinductive = d.type->left->kind == TypeKind::Nu;
    if (inductive == coinductive) continue;
    if (is(d.body, inductive ? TermKind::Build : TermKind::Cobuild)) continue;
    const FunctorExpr& f = inductive ? d.type->right->functor : d.type->left->functor;

    std::string name = primed(program, d.name);
    Term body;
    bool reified = false;
    try {
      body = inductive ? abstract_build(program, d.name, name) : abstract_cobuild(program, d.name, name);
    } catch (const NotAbstractable& e) {
      out.warnings.push_back(d.name + ": " + e.what() + "; using the reified form");
      body = inductive ? reify_build(program, tm::var(d.name)) : reify_cobuild(program, tm::var(d.name));
      reified = true;
    }
    Decl abs;
    abs.kind = DeclKind::Term;
    abs.name = name;
    abs.type = inductive ? build_body_type(f, d.type->left) : cobuild_body_type(f, d.type->right);
    abs.body = body;
    abs.pos = d.pos;
    Term marker = inductive ? tm::build(f, tm::var(name)) : tm::cobuild(f, tm::var(name));

    // The reified form refers to the original, so it goes after it and the
    // original keeps its body.
    std::size_t at = reified ? i + 1 : i;
    if (!reified) program.decls[i].body = marker;
    program.decls.insert(program.decls.begin() + static_cast<std::ptrdiff_t>(at), abs);
    for (std::size_t j = at + 1; j < program.decls.size(); ++j) {
      Decl& other = program.decls[j];
      if (other.kind != DeclKind::Term || other.name == d.name) continue;
      other.body = subst_term(other.body, d.name, marker);
    }
    out.abstracted.push_back(d.name);
    ++i;
  }
}

}  // namespace

ProgramFusion fuse_program(const Program& program, const ProgramFuseOptions& options) {
  ProgramFusion out;
  out.program = program;
  if (options.abstract) mark_producers(out.program, out);
  Program& p = out.program;
  for (std::size_t i = 0; i < p.decls.size(); ++i) {
    Decl& d = p.decls[i];
    if (d.kind != DeclKind::Term) continue;
    RewriteScope scope{p, i + 1, {}};
    FuseResult r = fuse_fixpoint(scope, d.body, options.fuse);
    d.body = r.term;
    for (const auto& w : r.report.warnings) out.warnings.push_back(d.name + ": " + w);
    out.decls.push_back({d.name, std::move(r.report), true});
  }
  try {
    auto types = typecheck_program(p);
    for (auto& df : out.decls) {
      const Decl* orig = program.find_term(df.name);
      auto it = std::find_if(types.begin(), types.end(), [&](const DeclType& t) { return t.name == df.name; });
      df.types_match = !orig || (it != types.end() && type_equal(orig->type, it->type));
    }
  } catch (const TypeError& e) {
    out.warnings.push_back(std::string("fused program does not typecheck: ") + e.what());
    for (auto& df : out.decls) df.types_match = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void run_one(const Program& program, const Term& fn, const Value& input, std::uint64_t fuel, Value& out,
             std::string& error, AllocationProfile& profile) {
  Interpreter interp(program, fuel);
  try {
    Value f = interp.eval(fn);
    out = interp.apply(f, input);
    profile = interp.profile();
  } catch (const FuelExhausted& e) {
    error = "FuelExhausted";
    profile = e.profile();
  } catch (const Error& e) {
    error = e.what();
    profile = interp.profile();
  }
}

}  // namespace

EquivalenceReport verify_equivalence(const Program& program, const Term& orig, const Term& fused,
                                     const std::vector<Value>& inputs, std::uint64_t fuel) {
  EquivalenceReport report;
  with_large_stack([&] {
    for (const auto& input : inputs) {
      SampleOutcome s;
      s.input = input;
      run_one(program, orig, input, fuel, s.orig, s.orig_error, s.orig_profile);
      run_one(program, fused, input, fuel, s.fused, s.fused_error, s.fused_profile);
      if (s.orig && s.fused) {
        try {
          s.equal = values_equal(s.orig, s.fused);
        } catch (const UnsupportedError& e) {
          s.orig_error = e.what();
        }
      }
      if (s.equal) ++report.equal_count;
      else if (!report.first_mismatch) report.first_mismatch = report.samples.size();
      report.samples.push_back(std::move(s));
    }
  });
  return report;
}

}  // namespace fusec
