#include "fusec/paranat.hpp"

#include <cctype>
#include <functional>

#include "fusec/fusion.hpp"

namespace fusec {

namespace {

const std::string kNeg = "$neg";
const std::string kPos = "$pos";

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kFiniteCap / a) throw SizeCapError("finite set exceeds " + std::to_string(kFiniteCap) + " elements");
  return a * b;
}

std::size_t checked_add(std::size_t a, std::size_t b) {
  if (a + b > kFiniteCap) throw SizeCapError("finite set exceeds " + std::to_string(kFiniteCap) + " elements");
  return a + b;
}

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

std::size_t type_size(const TypeExpr& t, const FiniteModel& m) {
  switch (t->kind) {
    case TypeKind::Unit:
      return 1;
    case TypeKind::Var: {
      auto it = m.carriers.find(t->name);
      if (it == m.carriers.end()) throw UnsupportedError("no carrier for type variable " + t->name);
      if (it->second > kFiniteCap) throw SizeCapError("carrier " + t->name + " exceeds the size cap");
      return it->second;
    }
    case TypeKind::Prod:
      return checked_mul(type_size(t->left, m), type_size(t->right, m));
    case TypeKind::Sum:
      return checked_add(type_size(t->left, m), type_size(t->right, m));
    case TypeKind::Arrow:
      return checked_pow(type_size(t->right, m), type_size(t->left, m));
    case TypeKind::Nat:
      throw UnsupportedError("Nat has no finite interpretation; use the sampled check");
    case TypeKind::Mu:
    case TypeKind::Nu:
      throw UnsupportedError("fixpoint types have no finite interpretation; use the sampled check");
    case TypeKind::Forall:
      throw UnsupportedError("nested quantifiers have no finite interpretation");
  }
  return 0;
}

using VarNamer = std::function<std::string(const std::string&, std::size_t)>;

std::string default_namer(const std::string& var, std::size_t i) {
  std::string s;
  for (char c : var) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s + std::to_string(i);
}

std::string render(const TypeExpr& t, const FiniteModel& m, std::size_t e, const VarNamer& namer) {
  switch (t->kind) {
    case TypeKind::Unit:
      return "()";
    case TypeKind::Var:
      return namer(t->name, e);
    case TypeKind::Prod: {
      std::size_t nb = type_size(t->right, m);
      return "(" + render(t->left, m, e / nb, namer) + ", " + render(t->right, m, e % nb, namer) + ")";
    }
    case TypeKind::Sum: {
      std::size_t na = type_size(t->left, m);
      if (e < na) return "inl " + render(t->left, m, e, namer);
      return "inr " + render(t->right, m, e - na, namer);
    }
    case TypeKind::Arrow: {
      std::size_t na = type_size(t->left, m);
      std::size_t nb = type_size(t->right, m);
      std::string s = "{";
      std::size_t rest = e;
      for (std::size_t i = 0; i < na; ++i) {
        if (i) s += ", ";
        s += render(t->left, m, i, namer) + "->" + render(t->right, m, rest % nb, namer);
        rest /= nb;
      }
      return s + "}";
    }
    default:
      type_size(t, m);
      return "?";
  }
}

Value to_value(const TypeExpr& t, const FiniteModel& m, std::size_t e);
std::size_t from_value(Interpreter& in, const TypeExpr& t, const FiniteModel& m, const Value& v);

Value to_value(const TypeExpr& t, const FiniteModel& m, std::size_t e) {
  switch (t->kind) {
    case TypeKind::Unit:
      return val::unit();
    case TypeKind::Var:
      return val::nat(e);
    case TypeKind::Prod: {
      std::size_t nb = type_size(t->right, m);
      return val::pair(to_value(t->left, m, e / nb), to_value(t->right, m, e % nb));
    }
    case TypeKind::Sum: {
      std::size_t na = type_size(t->left, m);
      if (e < na) return val::inl(to_value(t->left, m, e));
      return val::inr(to_value(t->right, m, e - na));
    }
    case TypeKind::Arrow: {
      std::size_t na = type_size(t->left, m);
      std::size_t nb = type_size(t->right, m);
      Table digits(na);
      std::size_t rest = e;
      for (std::size_t i = 0; i < na; ++i) {
        digits[i] = rest % nb;
        rest /= nb;
      }
      TypeExpr dom = t->left, cod = t->right;
      FiniteModel model = m;
      return val::host([digits, dom, cod, model](Interpreter& in, const Value& arg) {
        return to_value(cod, model, digits[from_value(in, dom, model, arg)]);
      });
    }
    default:
      type_size(t, m);
      return val::unit();
  }
}

std::size_t from_value(Interpreter& in, const TypeExpr& t, const FiniteModel& m, const Value& v) {
  switch (t->kind) {
    case TypeKind::Unit:
      return 0;
    case TypeKind::Var:
      if (v->kind != ValueKind::Nat) throw Stuck("expected a carrier element");
      return v->nat;
    case TypeKind::Prod:
      if (v->kind != ValueKind::Pair) throw Stuck("expected a pair");
      return from_value(in, t->left, m, v->a) * type_size(t->right, m) + from_value(in, t->right, m, v->b);
    case TypeKind::Sum:
      if (v->kind == ValueKind::Inl) return from_value(in, t->left, m, v->a);
      if (v->kind == ValueKind::Inr) return type_size(t->left, m) + from_value(in, t->right, m, v->a);
      throw Stuck("expected an injection");
    case TypeKind::Arrow: {
      std::size_t na = type_size(t->left, m);
      std::size_t nb = type_size(t->right, m);
      std::size_t e = 0, scale = 1;
      for (std::size_t i = 0; i < na; ++i) {
        e += from_value(in, t->right, m, in.apply(v, to_value(t->left, m, i))) * scale;
        scale *= nb;
      }
      return e;
    }
    default:
      type_size(t, m);
      return 0;
  }
}

TypeExpr bifunctor_type(const BifunctorExpr& w) { return bifunctor_to_type(w, ty::var(kNeg), ty::var(kPos)); }

FiniteModel bifunctor_model(std::size_t neg, std::size_t pos) {
  FiniteModel m;
  m.carriers[kNeg] = neg;
  m.carriers[kPos] = pos;
  return m;
}

// Sizes of a sub-bifunctor under a given parity of Arrow-left edges.
std::size_t sub_size(const BifunctorExpr& w, bool flipped, std::size_t neg, std::size_t pos) {
  return flipped ? bifunctor_size(w, pos, neg) : bifunctor_size(w, neg, pos);
}

struct Transport {
  std::size_t n1, p1, n2, p2;
  const Table& p;
  const Table& n;

  // W at source holes -> W at destination holes, for subtrees of even parity.
  Table fwd(const BifunctorExpr& w) const {
    switch (w->kind) {
      case BifunctorKind::Const: {
        std::size_t c = type_size(w->constant, {});
        Table t(c);
        for (std::size_t i = 0; i < c; ++i) t[i] = i;
        return t;
      }
      case BifunctorKind::Hole:
        return p;
      case BifunctorKind::Sum:
        return sum(fwd(w->left), fwd(w->right), sub_size(w->left, false, n2, p2));
      case BifunctorKind::Prod:
        return prod(fwd(w->left), fwd(w->right), sub_size(w->right, false, n1, p1),
                    sub_size(w->right, false, n2, p2));
      case BifunctorKind::Arrow: {
        Table back = bwd(w->left);  // L(dst) -> L(src)
        Table cod = fwd(w->right);
        return arrow(back, cod, sub_size(w->left, true, n1, p1), sub_size(w->right, false, n1, p1),
                     sub_size(w->right, false, n2, p2), checked_pow(sub_size(w->right, false, n1, p1),
                                                                    sub_size(w->left, true, n1, p1)));
      }
    }
    return {};
  }

  // W at destination holes -> W at source holes, for subtrees of odd parity.
  Table bwd(const BifunctorExpr& w) const {
    switch (w->kind) {
      case BifunctorKind::Const:
        return fwd(w);
      case BifunctorKind::Hole:
        return n;
      case BifunctorKind::Sum:
        return sum(bwd(w->left), bwd(w->right), sub_size(w->left, true, n1, p1));
      case BifunctorKind::Prod:
        return prod(bwd(w->left), bwd(w->right), sub_size(w->right, true, n2, p2),
                    sub_size(w->right, true, n1, p1));
      case BifunctorKind::Arrow: {
        Table there = fwd(w->left);  // L(src) -> L(dst)
        Table cod = bwd(w->right);
        return arrow(there, cod, sub_size(w->left, false, n2, p2), sub_size(w->right, true, n2, p2),
                     sub_size(w->right, true, n1, p1), checked_pow(sub_size(w->right, true, n2, p2),
                                                                   sub_size(w->left, false, n2, p2)));
      }
    }
    return {};
  }

  static Table sum(const Table& a, const Table& b, std::size_t a_dst) {
    Table t;
    t.reserve(a.size() + b.size());
    for (std::size_t v : a) t.push_back(v);
    for (std::size_t v : b) t.push_back(a_dst + v);
    return t;
  }

  static Table prod(const Table& a, const Table& b, std::size_t b_src, std::size_t b_dst) {
    Table t(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) t[i * b_src + j] = a[i] * b_dst + b[j];
    return t;
  }

  // f : L -> R in the input encoding becomes  cod . f . pre  on `pre`'s domain.
  static Table arrow(const Table& pre, const Table& cod, std::size_t dom_in, std::size_t cod_in,
                     std::size_t cod_out, std::size_t count) {
    Table t(count);
    std::vector<std::size_t> digits(dom_in);
    for (std::size_t f = 0; f < count; ++f) {
      std::size_t rest = f;
      for (std::size_t i = 0; i < dom_in; ++i) {
        digits[i] = rest % cod_in;
        rest /= cod_in;
      }
      std::size_t g = 0, scale = 1;
      for (std::size_t l = 0; l < pre.size(); ++l) {
        g += cod[digits[pre[l]]] * scale;
        scale *= cod_out;
      }
      t[f] = g;
    }
    return t;
  }
};

Table identity(std::size_t n) {
  Table t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = i;
  return t;
}

std::string render_map(const Table& u) {
  std::string s = "{";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ", ";
    s += "x" + std::to_string(i) + "->y" + std::to_string(u[i]);
  }
  return s + "}";
}

const Table& table_for(const SemanticFamily& theta, std::size_t n) {
  auto it = theta.tables.find(n);
  if (it == theta.tables.end()) throw Error("family has no table at carrier size " + std::to_string(n));
  return it->second;
}

Table decode_map(std::size_t index, std::size_t x, std::size_t y) {
  Table u(x);
  for (std::size_t i = 0; i < x; ++i) {
    u[i] = index % y;
    index /= y;
  }
  return u;
}

std::string render_v(const FunctorExpr& v, std::size_t n, std::size_t e, const std::string& name) {
  auto bw = bifunctor_from_functor(v);
  return render_bifunctor_element(bw, n, n, e, name, name);
}

}  // namespace

FiniteSet interpret_type_finite(const TypeExpr& t, const FiniteModel& model) {
  return FiniteSet{t, type_size(t, model)};
}

std::string render_element(const TypeExpr& t, const FiniteModel& model, std::size_t element) {
  return render(t, model, element, default_namer);
}

std::size_t bifunctor_size(const BifunctorExpr& w, std::size_t neg, std::size_t pos) {
  return type_size(bifunctor_type(w), bifunctor_model(neg, pos));
}

std::string render_bifunctor_element(const BifunctorExpr& w, std::size_t neg, std::size_t pos, std::size_t element,
                                     const std::string& neg_name, const std::string& pos_name) {
  VarNamer namer = [&](const std::string& var, std::size_t i) {
    return (var == kNeg ? neg_name : pos_name) + std::to_string(i);
  };
  return render(bifunctor_type(w), bifunctor_model(neg, pos), element, namer);
}

Table bifunctor_transport(const BifunctorExpr& w, std::size_t n1, std::size_t p1, std::size_t n2, std::size_t p2,
                          const Table& p, const Table& n) {
  Transport tr{n1, p1, n2, p2, p, n};
  return tr.fwd(w);
}

BifunctorAction bifunctor_action(const BifunctorExpr& w, const Table& u, std::size_t x, std::size_t y) {
  Table idx = identity(x);
  Table idy = identity(y);
  BifunctorAction a;
  a.WXu = bifunctor_transport(w, x, x, x, y, u, idx);
  a.WuY = bifunctor_transport(w, y, y, x, y, idy, u);
  return a;
}

Table functor_action(const FunctorExpr& v, const Table& u, std::size_t x, std::size_t y) {
  static const Table none;
  return bifunctor_transport(bifunctor_from_functor(v), x, x, y, y, u, none);
}

ParanatResult check_paranatural(const SemanticFamily& theta, const BifunctorExpr& w, const FunctorExpr& v,
                                std::size_t max_carrier, std::size_t min_carrier) {
  ParanatResult res;
  for (std::size_t x = min_carrier; x <= max_carrier; ++x) {
    const Table& tx = table_for(theta, x);
    for (std::size_t y = min_carrier; y <= max_carrier; ++y) {
      const Table& ty = table_for(theta, y);
      std::size_t wxy = bifunctor_size(w, x, y);
      std::size_t maps = checked_pow(y, x);
      for (std::size_t ui = 0; ui < maps; ++ui) {
        Table u = decode_map(ui, x, y);
        auto act = bifunctor_action(w, u, x, y);
        Table vu = functor_action(v, u, x, y);
        // Per image in W(X,Y): the first w' and the first w' whose theta_Y
        // differs from it. That is enough to find the first w' != lhs.
        constexpr std::size_t none = static_cast<std::size_t>(-1);
        std::vector<std::size_t> first(wxy, none), other(wxy, none), count(wxy, 0);
        for (std::size_t w2 = 0; w2 < act.WuY.size(); ++w2) {
          std::size_t b = act.WuY[w2];
          ++count[b];
          if (first[b] == none) first[b] = w2;
          else if (other[b] == none && ty[w2] != ty[first[b]]) other[b] = w2;
        }
        ++res.maps_checked;
        for (std::size_t w1 = 0; w1 < act.WXu.size(); ++w1) {
          std::size_t b = act.WXu[w1];
          res.pairs_checked += count[b];
          if (first[b] == none) continue;
          std::size_t lhs = vu[tx[w1]];
          std::size_t w2 = ty[first[b]] != lhs ? first[b] : other[b];
          if (w2 == none) continue;
          CounterExample c;
          c.x = x;
          c.y = y;
          c.u = u;
          c.w = w1;
          c.w_prime = w2;
          c.lhs = lhs;
          c.rhs = ty[w2];
          c.u_text = render_map(u);
          c.w_text = render_bifunctor_element(w, x, x, w1, "x", "x");
          c.w_prime_text = render_bifunctor_element(w, y, y, w2, "y", "y");
          c.lhs_text = render_v(v, y, c.lhs, "y");
          c.rhs_text = render_v(v, y, c.rhs, "y");
          res.ok = false;
          res.counterexample = std::move(c);
          return res;
        }
      }
    }
  }
  return res;
}

bool check_paranatural_triangle(const SemanticFamily& theta, const BifunctorExpr& w, const FunctorExpr& v,
                                std::size_t max_carrier, std::size_t max_z) {
  constexpr std::size_t kSpanCap = 10000000;
  for (std::size_t z = 1; z <= max_z; ++z) {
    for (std::size_t x = 1; x <= max_carrier; ++x) {
      const Table& tx = table_for(theta, x);
      for (std::size_t y = 1; y <= max_carrier; ++y) {
        const Table& ty = table_for(theta, y);
        std::size_t wxx = bifunctor_size(w, x, x);
        std::size_t wyy = bifunctor_size(w, y, y);
        std::size_t left = 1, right = 1;
        for (std::size_t k = 0; k < z; ++k) {
          left *= wxx;
          right *= wyy;
          if (left > kSpanCap || right > kSpanCap || left * right > kSpanCap)
            throw SizeCapError("span enumeration exceeds " + std::to_string(kSpanCap));
        }
        std::size_t maps = checked_pow(y, x);
        for (std::size_t ui = 0; ui < maps; ++ui) {
          Table u = decode_map(ui, x, y);
          auto act = bifunctor_action(w, u, x, y);
          Table vu = functor_action(v, u, x, y);
          for (std::size_t a = 0; a < left; ++a) {
            for (std::size_t b = 0; b < right; ++b) {
              bool premise = true, conclusion = true;
              std::size_t ra = a, rb = b;
              for (std::size_t k = 0; k < z; ++k) {
                std::size_t za = ra % wxx, zb = rb % wyy;
                ra /= wxx;
                rb /= wyy;
                if (act.WXu[za] != act.WuY[zb]) premise = false;
                if (vu[tx[za]] != ty[zb]) conclusion = false;
              }
              if (premise && !conclusion) return false;
            }
          }
        }
      }
    }
  }
  return true;
}

bool verify_witness(const SemanticFamily& theta, const BifunctorExpr& w, const FunctorExpr& v,
                    const CounterExample& cex) {
  if (cex.u.size() != cex.x) return false;
  for (std::size_t img : cex.u)
    if (img >= cex.y) return false;
  const Table& tx = table_for(theta, cex.x);
  const Table& ty = table_for(theta, cex.y);
  if (cex.w >= tx.size() || cex.w_prime >= ty.size()) return false;
  auto act = bifunctor_action(w, cex.u, cex.x, cex.y);
  if (act.WXu[cex.w] != act.WuY[cex.w_prime]) return false;
  Table vu = functor_action(v, cex.u, cex.x, cex.y);
  return vu[tx[cex.w]] != ty[cex.w_prime];
}

SemanticFamily tabulate_family(const Program& program, const Term& term, const PolytypeDecomposition& shape,
                               std::size_t max_carrier, std::uint64_t fuel) {
  SemanticFamily fam;
  fam.provenance = "from-term";
  std::vector<TypeExpr> comps;
  for (const auto& c : shape.component_bifunctors) comps.push_back(bifunctor_type(c));
  TypeExpr vt = bifunctor_type(bifunctor_from_functor(shape.V));
  with_large_stack([&] {
    for (std::size_t n = 1; n <= max_carrier; ++n) {
      FiniteModel m = bifunctor_model(n, n);
      std::vector<std::size_t> sizes;
      for (const auto& c : comps) sizes.push_back(type_size(c, m));
      std::size_t total = bifunctor_size(shape.W, n, n);
      Table table(total);
      for (std::size_t e = 0; e < total; ++e) {
        Interpreter in(program, fuel);
        Value f = in.instantiate(in.eval(term));
        std::size_t rest = e;
        std::vector<std::size_t> parts(comps.size());
        for (std::size_t i = comps.size(); i-- > 0;) {
          parts[i] = rest % sizes[i];
          rest /= sizes[i];
        }
        for (std::size_t i = 0; i < comps.size(); ++i) f = in.apply(f, to_value(comps[i], m, parts[i]));
        table[e] = from_value(in, vt, m, f);
      }
      fam.tables[n] = std::move(table);
    }
  });
  return fam;
}

BifunctorExpr bad_const_shape() { return bf::arrow(bf::hole(), bf::hole()); }

SemanticFamily bad_const_family(std::size_t max_carrier) {
  SemanticFamily fam;
  fam.provenance = "hand-given";
  for (std::size_t n = 1; n <= max_carrier; ++n) fam.tables[n] = Table(bifunctor_size(bad_const_shape(), n, n), 0);
  return fam;
}

bool Lemma1Report::all_passed() const {
  if (cases.empty()) return false;
  for (const auto& c : cases)
    if (!c.passed()) return false;
  return true;
}

Lemma1Report check_lemma1_sampled(const Program& program, const Term& body, const FunctorExpr& f, bool inductive,
                                  const std::vector<Lemma1Case>& cases, std::uint64_t fuel) {
  Lemma1Report report;
  for (const auto& c : cases) {
    Term lhs = tm::app(tm::tyapp(body, c.carrier), c.structure);
    Term rhs;
    if (inductive) {
      TypeExpr mu = ty::mu(f);
      Term in_fn = tm::lam("y", functor_apply(f, mu), tm::in(f, tm::var("y")));
      rhs = tm::compose(tm::cata(f, c.structure), tm::app(tm::tyapp(body, mu), in_fn));
    } else {
      TypeExpr nu = ty::nu(f);
      Term out_fn = tm::lam("s", nu, tm::out(f, tm::var("s")));
      rhs = tm::compose(tm::app(tm::tyapp(body, nu), out_fn), tm::ana(f, c.structure));
    }
    auto eq = verify_equivalence(program, lhs, rhs, c.inputs, fuel);
    Lemma1Outcome o;
    o.label = c.label;
    o.total = eq.samples.size();
    o.equal = eq.equal_count;
    for (const auto& s : eq.samples) {
      if (s.orig_error.find("FuelExhausted") != std::string::npos ||
          s.fused_error.find("FuelExhausted") != std::string::npos)
        ++o.fuel_errors;
      if (!s.equal && o.failures.size() < 5) {
        std::string msg = "input " + print_value(s.input) + ": ";
        msg += s.orig ? print_value(s.orig) : s.orig_error;
        msg += " vs ";
        msg += s.fused ? print_value(s.fused) : s.fused_error;
        o.failures.push_back(msg);
      }
    }
    report.cases.push_back(std::move(o));
  }
  return report;
}

}  // namespace fusec
