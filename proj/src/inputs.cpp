#include "fusec/inputs.hpp"

#include <algorithm>
#include <random>

namespace fusec {

namespace {

struct Enumerator {
  std::size_t budget;
  std::size_t limit;

  void check(std::size_t n) const {
    if (n > limit) throw SizeCapError("canonical enumeration exceeds " + std::to_string(limit) + " values");
  }

  std::vector<Value> product(const std::vector<Value>& as, const std::vector<Value>& bs) const {
    check(as.size() * bs.size());
    std::vector<Value> out;
    out.reserve(as.size() * bs.size());
    for (const auto& a : as)
      for (const auto& b : bs) out.push_back(val::pair(a, b));
    return out;
  }

  std::vector<Value> sum(const std::vector<Value>& as, const std::vector<Value>& bs) const {
    check(as.size() + bs.size());
    std::vector<Value> out;
    for (const auto& a : as) out.push_back(val::inl(a));
    for (const auto& b : bs) out.push_back(val::inr(b));
    return out;
  }

  std::vector<Value> functor(const FunctorExpr& f, const std::vector<Value>& holes) const {
    switch (f->kind) {
      case FunctorKind::Const:
        return type(f->constant);
      case FunctorKind::Id:
        return holes;
      case FunctorKind::Sum:
        return sum(functor(f->left, holes), functor(f->right, holes));
      case FunctorKind::Prod:
        return product(functor(f->left, holes), functor(f->right, holes));
    }
    return {};
  }

  std::vector<Value> type(const TypeExpr& t) const {
    switch (t->kind) {
      case TypeKind::Unit:
        return {val::unit()};
      case TypeKind::Nat: {
        check(budget + 1);
        std::vector<Value> out;
        for (std::size_t i = 0; i <= budget; ++i) out.push_back(val::nat(i));
        return out;
      }
      case TypeKind::Prod:
        return product(type(t->left), type(t->right));
      case TypeKind::Sum:
        return sum(type(t->left), type(t->right));
      case TypeKind::Mu: {
        std::vector<Value> level;
        for (std::size_t k = 0; k <= budget; ++k) {
          std::vector<Value> next;
          for (const auto& payload : functor(t->functor, level)) next.push_back(val::mu(t->functor, payload));
          if (k == 0 && next.empty())
            throw UnsupportedError("Mu " + to_string(t->functor) + " has no base case");
          level = std::move(next);
        }
        std::stable_sort(level.begin(), level.end(),
                         [](const Value& a, const Value& b) { return mu_height(a) < mu_height(b); });
        return level;
      }
      default:
        throw UnsupportedError("cannot enumerate values of type " + to_string(t));
    }
  }
};

bool has_base(const FunctorExpr& f) {
  switch (f->kind) {
    case FunctorKind::Const:
      return true;
    case FunctorKind::Id:
      return false;
    case FunctorKind::Sum:
      return has_base(f->left) || has_base(f->right);
    case FunctorKind::Prod:
      return has_base(f->left) && has_base(f->right);
  }
  return false;
}

struct Sampler {
  const SampleSpec& spec;
  std::mt19937_64 rng;

  std::uint64_t uniform(std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(0, hi)(rng); }

  Value functor(const FunctorExpr& f, const TypeExpr& mu, std::size_t depth) {
    switch (f->kind) {
      case FunctorKind::Const:
        return type(f->constant, depth);
      case FunctorKind::Id:
        return tree(mu, depth - 1);
      case FunctorKind::Sum: {
        bool left;
        if (depth == 0) left = has_base(f->left);
        else left = uniform(1) == 0;
        return left ? val::inl(functor(f->left, mu, depth)) : val::inr(functor(f->right, mu, depth));
      }
      case FunctorKind::Prod: {
        Value a = functor(f->left, mu, depth);
        Value b = functor(f->right, mu, depth);
        return val::pair(a, b);
      }
    }
    return val::unit();
  }

  Value tree(const TypeExpr& mu, std::size_t depth) {
    return val::mu(mu->functor, functor(mu->functor, mu, depth));
  }

  Value list(const TypeExpr& mu, const std::vector<TypeExpr>& fields) {
    std::size_t len = uniform(spec.max_depth);
    std::vector<std::vector<Value>> elems(len);
    for (auto& e : elems)
      for (const auto& ft : fields) e.push_back(type(ft, spec.max_depth));
    Value cur = val::mu(mu->functor, val::inl(val::unit()));
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
      Value cell = cur;
      for (auto f = it->rbegin(); f != it->rend(); ++f) cell = val::pair(*f, cell);
      cur = val::mu(mu->functor, val::inr(cell));
    }
    return cur;
  }

  Value type(const TypeExpr& t, std::size_t depth) {
    switch (t->kind) {
      case TypeKind::Unit:
        return val::unit();
      case TypeKind::Nat:
        return val::nat(uniform(spec.max_nat));
      case TypeKind::Prod: {
        Value a = type(t->left, depth);
        Value b = type(t->right, depth);
        return val::pair(a, b);
      }
      case TypeKind::Sum:
        if (uniform(1) == 0) return val::inl(type(t->left, depth));
        return val::inr(type(t->right, depth));
      case TypeKind::Mu: {
        if (auto fields = list_fields(t->functor)) return list(t, *fields);
        if (!has_base(t->functor)) throw UnsupportedError("Mu " + to_string(t->functor) + " has no base case");
        return tree(t, uniform(spec.max_depth));
      }
      default:
        throw UnsupportedError("cannot sample values of type " + to_string(t));
    }
  }
};

}  // namespace

std::vector<Value> canonical_values(const TypeExpr& t, std::size_t budget, std::size_t limit) {
  return Enumerator{budget, limit}.type(t);
}

std::vector<Value> sample_values(const TypeExpr& t, const SampleSpec& spec) {
  Sampler s{spec, std::mt19937_64(spec.seed)};
  std::vector<Value> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(s.type(t, spec.max_depth));
  return out;
}

Value sized_value(const TypeExpr& t, std::size_t n) {
  switch (t->kind) {
    case TypeKind::Unit:
      return val::unit();
    case TypeKind::Nat:
      return val::nat(n);
    case TypeKind::Prod:
      return val::pair(sized_value(t->left, n), sized_value(t->right, n));
    case TypeKind::Sum:
      return val::inl(sized_value(t->left, n));
    case TypeKind::Mu: {
      auto fields = list_fields(t->functor);
      if (!fields) break;
      Value cur = val::mu(t->functor, val::inl(val::unit()));
      for (std::size_t i = n; i-- > 0;) {
        Value cell = cur;
        for (auto f = fields->rbegin(); f != fields->rend(); ++f) cell = val::pair(sized_value(*f, i + 1), cell);
        cur = val::mu(t->functor, val::inr(cell));
      }
      return cur;
    }
    default:
      break;
  }
  throw UnsupportedError("no sized values of type " + to_string(t));
}

}  // namespace fusec
