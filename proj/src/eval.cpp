#include "fusec/eval.hpp"

#include <pthread.h>

#include <cstdlib>
#include <exception>

namespace fusec {

std::uint64_t AllocationProfile::mu_count(const FunctorExpr& f) const {
  auto it = mu_cells.find(f->key);
  return it == mu_cells.end() ? 0 : it->second;
}

std::uint64_t AllocationProfile::nu_count(const FunctorExpr& f) const {
  auto it = nu_observations.find(f->key);
  return it == nu_observations.end() ? 0 : it->second;
}

bool operator==(const AllocationProfile& a, const AllocationProfile& b) {
  return a.mu_cells == b.mu_cells && a.nu_observations == b.nu_observations && a.steps == b.steps;
}

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("FUSEC_FUEL")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && n > 0) return n;
  }
  return kDefaultFuel;
}

Interpreter::Interpreter(const Program& program, std::uint64_t fuel) : program_(program), fuel_(fuel) {}

void Interpreter::tick() {
  if (profile_.steps >= fuel_) throw FuelExhausted(profile_);
  ++profile_.steps;
}

Value Interpreter::make_mu(const FunctorExpr& f, Value payload) {
  ++profile_.mu_cells[f->key];
  return val::mu(f, std::move(payload));
}

Value Interpreter::global(const std::string& name) {
  const Decl* d = program_.find_term(name);
  if (!d) throw Stuck("unbound variable " + name);
  return eval(d->body, nullptr);
}

Value Interpreter::fmap(const FunctorExpr& f, const std::function<Value(const Value&)>& h, const Value& v) {
  switch (f->kind) {
    case FunctorKind::Const:
      return v;
    case FunctorKind::Id:
      return h(v);
    case FunctorKind::Sum:
      if (v->kind == ValueKind::Inl) return val::inl(fmap(f->left, h, v->a));
      if (v->kind == ValueKind::Inr) return val::inr(fmap(f->right, h, v->a));
      throw Stuck("fmap over a sum expects inl or inr, got " + print_value(v));
    case FunctorKind::Prod:
      if (v->kind != ValueKind::Pair) throw Stuck("fmap over a product expects a pair, got " + print_value(v));
      return val::pair(fmap(f->left, h, v->a), fmap(f->right, h, v->b));
  }
  throw Stuck("bad functor");
}

Value Interpreter::instantiate(const Value& v) {
  tick();
  if (v->kind == ValueKind::TyClosure) return eval(v->body, v->env);
  return v;
}

Value Interpreter::observe(const Value& v) {
  if (v->kind != ValueKind::Nu) throw Stuck("out expects a coinductive value, got " + print_value(v));
  ++profile_.nu_observations[v->functor->key];
  Value step = apply(v->b, v->a);
  const FunctorExpr& f = v->functor;
  const Value& coalg = v->b;
  return fmap(f, [&](const Value& s) { return val::nu(f, s, coalg); }, step);
}

Value Interpreter::apply(const Value& fn, const Value& arg) {
  tick();
  switch (fn->kind) {
    case ValueKind::Closure:
      return eval(fn->body, env_bind(fn->env, fn->var, arg));
    case ValueKind::Host:
      return (*fn->host)(*this, arg);
    case ValueKind::Prim:
      break;
    default:
      throw Stuck("application of a non-function " + print_value(fn));
  }
  const FunctorExpr& f = fn->functor;
  switch (fn->prim) {
    case PrimKind::In:
      return make_mu(f, arg);
    case PrimKind::Unroll:
      if (arg->kind != ValueKind::Mu) throw Stuck("unroll expects an inductive value");
      return arg->a;
    case PrimKind::Out:
      return observe(arg);
    case PrimKind::Cata: {
      if (arg->kind != ValueKind::Mu) throw Stuck("fold expects an inductive value, got " + print_value(arg));
      Value mapped = fmap(f, [&](const Value& x) { return apply(fn, x); }, arg->a);
      return apply(fn->a, mapped);
    }
    case PrimKind::Ana:
      return val::nu(f, arg, fn->a);
    case PrimKind::Build: {
      Value p = instantiate(fn->a);
      return apply(apply(p, val::prim(PrimKind::In, f)), arg);
    }
    case PrimKind::Cobuild: {
      Value q = instantiate(fn->a);
      return apply(apply(q, val::prim(PrimKind::Out, f)), arg);
    }
    case PrimKind::Compose:
      return apply(fn->a, apply(fn->b, arg));
  }
  throw Stuck("bad primitive");
}

Value Interpreter::eval(const Term& t, const Env& env) {
  const auto& k = t->kids;
  switch (t->kind) {
    case TermKind::Var:
      if (const Value* v = env_lookup(env, t->name)) return *v;
      return global(t->name);
    case TermKind::Lam:
      return val::closure(env, t->name, k[0]);
    case TermKind::App: {
      Value fn = eval(k[0], env);
      Value arg = eval(k[1], env);
      return apply(fn, arg);
    }
    case TermKind::TyLam:
      return val::ty_closure(env, k[0]);
    case TermKind::TyApp:
      return instantiate(eval(k[0], env));
    case TermKind::Unit:
      return val::unit();
    case TermKind::NatLit:
      return val::nat(t->nat);
    case TermKind::Add: {
      Value a = eval(k[0], env);
      Value b = eval(k[1], env);
      if (a->kind != ValueKind::Nat || b->kind != ValueKind::Nat) throw Stuck("+ expects naturals");
      return val::nat(a->nat + b->nat);
    }
    case TermKind::Pair: {
      Value a = eval(k[0], env);
      Value b = eval(k[1], env);
      return val::pair(std::move(a), std::move(b));
    }
    case TermKind::Proj1:
    case TermKind::Proj2: {
      Value p = eval(k[0], env);
      if (p->kind != ValueKind::Pair) throw Stuck("projection expects a pair, got " + print_value(p));
      return t->kind == TermKind::Proj1 ? p->a : p->b;
    }
    case TermKind::Inl:
      return val::inl(eval(k[0], env));
    case TermKind::Inr:
      return val::inr(eval(k[0], env));
    case TermKind::Case: {
      Value s = eval(k[0], env);
      if (s->kind == ValueKind::Inl) return eval(k[1], env_bind(env, t->name, s->a));
      if (s->kind == ValueKind::Inr) return eval(k[2], env_bind(env, t->name2, s->a));
      throw Stuck("case expects inl or inr, got " + print_value(s));
    }
    case TermKind::InMu:
      return make_mu(t->functor, eval(k[0], env));
    case TermKind::Unroll: {
      Value v = eval(k[0], env);
      if (v->kind != ValueKind::Mu) throw Stuck("unroll expects an inductive value");
      return v->a;
    }
    case TermKind::OutNu:
      return observe(eval(k[0], env));
    case TermKind::Cata:
      return val::prim(PrimKind::Cata, t->functor, eval(k[0], env));
    case TermKind::Ana:
      return val::prim(PrimKind::Ana, t->functor, eval(k[0], env));
    case TermKind::Build:
      return val::prim(PrimKind::Build, t->functor, eval(k[0], env));
    case TermKind::Cobuild:
      return val::prim(PrimKind::Cobuild, t->functor, eval(k[0], env));
    case TermKind::Compose: {
      Value h = eval(k[0], env);
      Value f = eval(k[1], env);
      return val::prim(PrimKind::Compose, nullptr, std::move(h), std::move(f));
    }
    case TermKind::Let: {
      tick();
      Value bound = eval(k[0], env);
      return eval(k[1], env_bind(env, t->name, std::move(bound)));
    }
  }
  throw Stuck("bad term");
}

RunResult run_with_profile(const Program& program, const std::string& main, const Value& input,
                           std::uint64_t fuel) {
  if (!program.find_term(main)) throw Error("no term declaration named " + main);
  RunResult result;
  with_large_stack([&] {
    Interpreter interp(program, fuel);
    Value fn = interp.global(main);
    result.value = interp.apply(fn, input);
    result.profile = interp.profile();
  });
  return result;
}

namespace {

thread_local bool on_large_stack = false;

struct StackJob {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* run_job(void* arg) {
  auto* job = static_cast<StackJob*>(arg);
  on_large_stack = true;
  try {
    (*job->fn)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void with_large_stack(const std::function<void()>& fn) {
  if (on_large_stack) {
    fn();
    return;
  }
  constexpr std::size_t kStack = std::size_t{1} << 29;
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStack);
  StackJob job{&fn, nullptr};
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, run_job, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace fusec
