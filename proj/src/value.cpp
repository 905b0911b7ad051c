#include "fusec/value.hpp"

#include <algorithm>

namespace fusec {

Env env_bind(Env env, std::string name, Value value) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(value), std::move(env)});
}

const Value* env_lookup(const Env& env, const std::string& name) {
  for (const EnvNode* e = env.get(); e; e = e->next.get())
    if (e->name == name) return &e->value;
  return nullptr;
}

namespace val {

namespace {
std::shared_ptr<ValueNode> make(ValueKind kind) {
  auto v = std::make_shared<ValueNode>();
  v->kind = kind;
  return v;
}
}  // namespace

Value unit() {
  static const Value u = make(ValueKind::Unit);
  return u;
}
Value nat(std::uint64_t n) {
  auto v = make(ValueKind::Nat);
  v->nat = n;
  return v;
}
Value pair(Value a, Value b) {
  auto v = make(ValueKind::Pair);
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}
Value inl(Value x) {
  auto v = make(ValueKind::Inl);
  v->a = std::move(x);
  return v;
}
Value inr(Value x) {
  auto v = make(ValueKind::Inr);
  v->a = std::move(x);
  return v;
}
Value mu(FunctorExpr f, Value payload) {
  auto v = make(ValueKind::Mu);
  v->functor = std::move(f);
  v->a = std::move(payload);
  return v;
}
Value nu(FunctorExpr f, Value state, Value coalgebra) {
  auto v = make(ValueKind::Nu);
  v->functor = std::move(f);
  v->a = std::move(state);
  v->b = std::move(coalgebra);
  return v;
}
Value closure(Env env, std::string var, Term body) {
  auto v = make(ValueKind::Closure);
  v->env = std::move(env);
  v->var = std::move(var);
  v->body = std::move(body);
  return v;
}
Value ty_closure(Env env, Term body) {
  auto v = make(ValueKind::TyClosure);
  v->env = std::move(env);
  v->body = std::move(body);
  return v;
}
Value prim(PrimKind kind, FunctorExpr f, Value a, Value b) {
  auto v = make(ValueKind::Prim);
  v->prim = kind;
  v->functor = std::move(f);
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}
Value host(HostFn fn) {
  auto v = make(ValueKind::Host);
  v->host = std::make_shared<const HostFn>(std::move(fn));
  return v;
}

}  // namespace val

bool is_function_value(const Value& v) {
  switch (v->kind) {
    case ValueKind::Closure:
    case ValueKind::TyClosure:
    case ValueKind::Prim:
    case ValueKind::Host:
      return true;
    default:
      return false;
  }
}

bool is_first_order_value(const Value& v) {
  switch (v->kind) {
    case ValueKind::Unit:
    case ValueKind::Nat:
      return true;
    case ValueKind::Pair:
      return is_first_order_value(v->a) && is_first_order_value(v->b);
    case ValueKind::Inl:
    case ValueKind::Inr:
    case ValueKind::Mu:
      return is_first_order_value(v->a);
    default:
      return false;
  }
}

bool values_equal(const Value& a, const Value& b) {
  if (is_function_value(a) || is_function_value(b))
    throw UnsupportedError("cannot compare function values");
  if (a->kind == ValueKind::Nu || b->kind == ValueKind::Nu)
    throw UnsupportedError("cannot compare coinductive values directly");
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ValueKind::Unit:
      return true;
    case ValueKind::Nat:
      return a->nat == b->nat;
    case ValueKind::Pair:
      return values_equal(a->a, b->a) && values_equal(a->b, b->b);
    case ValueKind::Inl:
    case ValueKind::Inr:
      return values_equal(a->a, b->a);
    case ValueKind::Mu:
      return functor_equal(a->functor, b->functor) && values_equal(a->a, b->a);
    default:
      return false;
  }
}

namespace {

void print_into(const Value& v, std::string& out, bool atomic);

void print_tuple(const Value& v, std::string& out) {
  out += '(';
  const Value* cur = &v;
  bool first = true;
  while ((*cur)->kind == ValueKind::Pair) {
    if (!first) out += ", ";
    print_into((*cur)->a, out, false);
    first = false;
    cur = &(*cur)->b;
  }
  out += ", ";
  print_into(*cur, out, false);
  out += ')';
}

// Walks a list-shaped Mu value; false when the value does not fit the shape.
bool print_list(const Value& v, std::size_t fields, std::string& out) {
  std::vector<std::string> items;
  const Value* cur = &v;
  while (true) {
    if ((*cur)->kind != ValueKind::Mu) return false;
    const Value& payload = (*cur)->a;
    if (payload->kind == ValueKind::Inl) break;
    if (payload->kind != ValueKind::Inr) return false;
    const Value* cell = &payload->a;
    std::vector<Value> elems;
    for (std::size_t i = 0; i < fields; ++i) {
      if ((*cell)->kind != ValueKind::Pair) return false;
      elems.push_back((*cell)->a);
      cell = &(*cell)->b;
    }
    std::string item;
    if (fields == 1) {
      print_into(elems[0], item, false);
    } else {
      item += '(';
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) item += ", ";
        print_into(elems[i], item, false);
      }
      item += ')';
    }
    items.push_back(std::move(item));
    cur = cell;
  }
  out += '[';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  out += ']';
  return true;
}

void print_into(const Value& v, std::string& out, bool atomic) {
  switch (v->kind) {
    case ValueKind::Unit:
      out += "()";
      return;
    case ValueKind::Nat:
      out += std::to_string(v->nat);
      return;
    case ValueKind::Pair:
      print_tuple(v, out);
      return;
    case ValueKind::Inl:
    case ValueKind::Inr:
      if (atomic) out += '(';
      out += v->kind == ValueKind::Inl ? "inl " : "inr ";
      print_into(v->a, out, true);
      if (atomic) out += ')';
      return;
    case ValueKind::Mu: {
      if (auto fields = list_fields(v->functor)) {
        std::string list;
        if (print_list(v, fields->size(), list)) {
          out += list;
          return;
        }
      }
      if (atomic) out += '(';
      out += "in ";
      print_into(v->a, out, true);
      if (atomic) out += ')';
      return;
    }
    case ValueKind::Nu:
      out += "<nu>";
      return;
    default:
      out += "<fun>";
      return;
  }
}

}  // namespace

std::string print_value(const Value& v) {
  std::string out;
  print_into(v, out, false);
  return out;
}

namespace {
std::size_t reachable_height(const Value& v, std::size_t& found) {
  switch (v->kind) {
    case ValueKind::Mu:
      found = 1;
      return mu_height(v);
    case ValueKind::Pair: {
      std::size_t fa = 0, fb = 0;
      std::size_t ha = reachable_height(v->a, fa);
      std::size_t hb = reachable_height(v->b, fb);
      found = fa | fb;
      return std::max(ha, hb);
    }
    case ValueKind::Inl:
    case ValueKind::Inr:
      return reachable_height(v->a, found);
    default:
      return 0;
  }
}
}  // namespace

std::size_t mu_height(const Value& v) {
  std::size_t found = 0;
  if (v->kind != ValueKind::Mu) return reachable_height(v, found);
  std::size_t h = reachable_height(v->a, found);
  return found ? h + 1 : 0;
}

}  // namespace fusec
