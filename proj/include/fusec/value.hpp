#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "fusec/term.hpp"
#include "fusec/type.hpp"

namespace fusec {

struct ValueNode;
using Value = std::shared_ptr<const ValueNode>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct EnvNode {
  std::string name;
  Value value;
  Env next;
};

Env env_bind(Env env, std::string name, Value value);
const Value* env_lookup(const Env& env, const std::string& name);

class Interpreter;

enum class ValueKind {
  Unit,
  Nat,
  Pair,
  Inl,
  Inr,
  Closure,    // env, var, body
  TyClosure,  // env, body
  Mu,         // functor, a: payload of shape F(Mu F)
  Nu,         // functor, a: state, b: coalgebra
  Prim,       // built-in function value: prim, functor, a/b operands
  Host,       // function implemented in C++
};

// Function-valued constructs of the core language once evaluated.
enum class PrimKind { In, Unroll, Out, Cata, Ana, Build, Cobuild, Compose };

using HostFn = std::function<Value(Interpreter&, const Value&)>;

struct ValueNode {
  ValueKind kind;
  std::uint64_t nat = 0;
  Value a;
  Value b;
  Env env;
  std::string var;
  Term body;
  FunctorExpr functor;
  PrimKind prim = PrimKind::In;
  std::shared_ptr<const HostFn> host;
};

namespace val {
Value unit();
Value nat(std::uint64_t n);
Value pair(Value a, Value b);
Value inl(Value v);
Value inr(Value v);
Value mu(FunctorExpr f, Value payload);
Value nu(FunctorExpr f, Value state, Value coalgebra);
Value closure(Env env, std::string var, Term body);
Value ty_closure(Env env, Term body);
Value prim(PrimKind kind, FunctorExpr f, Value a = nullptr, Value b = nullptr);
Value host(HostFn fn);
}  // namespace val

bool is_function_value(const Value& v);
// Unit, Nat, Pair, Inl, Inr and Mu values built from those.
bool is_first_order_value(const Value& v);

// Structural equality on first-order values. Throws UnsupportedError when
// either side contains a function or a Nu value.
bool values_equal(const Value& a, const Value& b);

// Human-readable rendering; lists of list-shaped functors print as [a, b].
std::string print_value(const Value& v);

// Height of the Mu-structure: 0 for a value with no Mu-children, else
// 1 + the maximum height of the Mu values reachable through its payload.
std::size_t mu_height(const Value& v);

}  // namespace fusec
