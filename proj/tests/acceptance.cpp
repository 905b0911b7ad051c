// One line per acceptance criterion; exits non-zero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "case_rewrites.hpp"
#include "fusec/commands.hpp"
#include "fusec/fusion.hpp"
#include "fusec/inputs.hpp"
#include "fusec/nest.hpp"
#include "fusec/paranat.hpp"
#include "fusec/syntax.hpp"
#include "fusec/typecheck.hpp"
#include "support.hpp"

using namespace fusec;
using namespace fusec::testing;

namespace {

constexpr double kFusionBudget = 10.0;
constexpr double kDeforestBudget = 30.0;
constexpr double kLemmaBudget = 60.0;
constexpr double kParanatBudget = 60.0;
constexpr double kNestBudget = 10.0;
constexpr double kSuiteBudget = 180.0;

constexpr std::size_t kPairs = 200;
constexpr std::size_t kMaxLen = 64;
constexpr std::size_t kRoundtripInputs = 100;
constexpr std::uint64_t kAnaFuel = 100000;
constexpr std::size_t kLemmaInputs = 100;
constexpr std::size_t kMaxCarrier = 3;
constexpr std::size_t kNestPairs = 100;
constexpr std::size_t kNestMaxDepth = 6;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

int failures = 0;

void criterion(int n, const char* title, double budget, const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (o.pass && secs >= budget) {
    o.pass = false;
    o.detail = "over the time budget";
  }
  if (!o.pass) ++failures;
  std::printf("%d %s %s (%.2f s / %.0f s)%s%s\n", n, o.pass ? "PASS" : "FAIL", title, secs, budget,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::vector<Value> first_n(std::vector<Value> vs, std::size_t n) {
  if (vs.size() > n) vs.resize(n);
  return vs;
}

std::string count_text(const EquivalenceReport& r) {
  return std::to_string(r.equal_count) + "/" + std::to_string(r.samples.size());
}

// Fuses the file through the command layer and checks `name` against its fused body.
Outcome fused_composite(const std::string& file, const std::string& name, const char* rule) {
  Outcome o;
  Program p = corpus(file);
  FuseCommand args;
  args.path = corpus_path(file);
  auto r = cmd_fuse(args);
  require(o, r.exit_code == kExitOk, "fuse exited with " + std::to_string(r.exit_code));
  if (!o.pass) return o;
  int count = r.report["rewrite_counts"][rule].get<int>();
  require(o, count == 1, std::string(rule) + " count " + std::to_string(count));
  Program fused = parse_program(r.output);
  Term body = fused.find_term(name)->body;
  auto inputs = list_pairs(p.find_functor("NL")->functor, kPairs, kMaxLen);
  auto eq = verify_equivalence(p, tm::var(name), body, inputs);
  require(o, eq.samples.size() == kPairs && eq.all_equal(), count_text(eq) + " equal");
  if (o.pass) o.detail = std::string(rule) + " x1, " + count_text(eq) + " equal";
  return o;
}

}  // namespace

int main() {
  auto suite_start = Clock::now();

  criterion(1, "fold after build fuses", kFusionBudget,
            [] { return fused_composite("sumzip.fuse", "composite", "R1"); });

  criterion(2, "cobuild after unfold fuses", kFusionBudget,
            [] { return fused_composite("sumzip_co.fuse", "composite_co", "R2"); });

  criterion(3, "intermediate cells vanish", kDeforestBudget, [] {
    Outcome o;
    Program p = corpus("sumzip.fuse");
    Program fused = fuse_program(p).program;
    auto l = p.find_functor("L")->functor;
    auto in_ty = p.find_term("composite")->type->left;
    std::string rows;
    for (std::size_t n : {0, 10, 100, 1000}) {
      Value input = sized_value(in_ty, n);
      auto a = run_with_profile(p, "composite", input);
      auto b = run_with_profile(fused, "composite", input);
      std::uint64_t ca = a.profile.mu_count(l);
      std::uint64_t cb = b.profile.mu_count(l);
      require(o, values_equal(a.value, b.value), "results differ at n=" + std::to_string(n));
      require(o, ca == n + 1, "unfused cells " + std::to_string(ca) + " at n=" + std::to_string(n));
      require(o, cb == 0, "fused cells " + std::to_string(cb) + " at n=" + std::to_string(n));
      rows += (rows.empty() ? "" : ", ") + std::to_string(ca) + "->" + std::to_string(cb);
    }
    if (o.pass) o.detail = "cells " + rows;
    return o;
  });

  criterion(4, "case rewrite on crafted terms", kSuiteBudget, [] {
    Outcome o;
    Program p = corpus("lists.fuse");
    RewriteScope scope{p, Program::npos, {}};
    int done = 0;
    for (const auto& c : kCaseRewrites) {
      Term t = parse_term(c.input, p);
      Term out = apply_rule_at(scope, t, Rule::R3, c.path);
      require(o, alpha_equal(out, parse_term(c.expected, p)), std::string("unexpected result for ") + c.input);
      require(o, type_equal(typecheck_term(p, {}, t), typecheck_term(p, {}, out)),
              std::string("type changed for ") + c.input);
      ++done;
    }
    require(o, done == 10, "only " + std::to_string(done) + " terms");
    if (o.pass) o.detail = std::to_string(done) + " terms";
    return o;
  });

  criterion(5, "build and cobuild roundtrips", kSuiteBudget, [] {
    Outcome o;
    Program lists = corpus("lists.fuse");
    Program zip = corpus("sumzip.fuse");
    Program zip_co = corpus("sumzip_co.fuse");
    int producers = 0, consumers = 0;

    auto producer = [&](const Program& p, const std::string& name, std::size_t budget) {
      const Decl* d = p.find_term(name);
      auto f = d->type->right->functor;
      Term marked = tm::build(f, reify_build(p, tm::var(name)));
      auto inputs = first_n(canonical_values(d->type->left, budget), kRoundtripInputs);
      auto eq = verify_equivalence(p, marked, tm::var(name), inputs);
      require(o, inputs.size() == kRoundtripInputs && eq.all_equal(), name + ": " + count_text(eq));
      ++producers;
    };
    producer(lists, "singleton", 99);
    producer(lists, "pair2", 9);
    producer(lists, "dup", 4);
    producer(lists, "cat", 2);
    producer(zip, "zipW", 2);

    auto consumer = [&](const Program& p, const std::string& name, const std::string& coalg,
                        const std::vector<Value>& seeds) {
      const Decl* d = p.find_term(name);
      auto f = d->type->left->functor;
      Interpreter in(p, kAnaFuel);
      Value a = in.global(coalg);
      std::vector<Value> inputs;
      for (const auto& s : seeds) inputs.push_back(val::nu(f, s, a));
      Term marked = tm::cobuild(f, reify_cobuild(p, tm::var(name)));
      auto eq = verify_equivalence(p, marked, tm::var(name), inputs, kAnaFuel);
      require(o, inputs.size() == kRoundtripInputs && eq.all_equal(), name + ": " + count_text(eq));
      ++consumers;
    };
    auto list_seeds = first_n(canonical_values(lists.find_term("fromList")->type->left, 4), kRoundtripInputs);
    consumer(lists, "sumS", "fromList", list_seeds);
    consumer(lists, "lenS", "fromList", list_seeds);
    consumer(zip_co, "ssumS", "zW", list_pairs(zip_co.find_functor("NL")->functor, kRoundtripInputs, 16));
    if (o.pass) o.detail = std::to_string(producers) + " producers, " + std::to_string(consumers) + " consumers";
    return o;
  });

  criterion(6, "sampled lemma for zipW' and ssum'", kLemmaBudget, [] {
    Outcome o;
    Program p = corpus("sumzip.fuse");
    auto l = p.find_functor("L")->functor;
    auto pairs = list_pairs(p.find_functor("NL")->functor, kLemmaInputs, 20);
    std::vector<Lemma1Case> algs{
        {"in", ty::mu(l), parse_term("\\y : L PairList. in[L] y", p), pairs},
        {"ssum_alg", ty::nat(), parse_term("ssum_alg", p), pairs},
        {"length", ty::nat(), parse_term("\\s : L Nat. case s of inl u => 0 | inr t => 1 + snd (snd t)", p), pairs},
        {"lefts", parse_type("NatList", p),
         parse_term("\\s : L NatList. case s of inl u => in[NL] (inl[NL NatList] ()) "
                    "| inr t => in[NL] (inr[NL NatList] (fst t, snd (snd t)))",
                    p),
         pairs},
    };
    auto build_side = check_lemma1_sampled(p, tm::var("zipW'"), l, true, algs);

    Program co = corpus("sumzip_co.fuse");
    auto lc = co.find_functor("L")->functor;
    auto nlc = co.find_functor("NL")->functor;
    auto co_pairs = list_pairs(nlc, kLemmaInputs, 20);
    Interpreter in(co);
    Value zw = in.global("zW");
    std::vector<Value> streams;
    for (const auto& s : co_pairs) streams.push_back(val::nu(lc, s, zw));
    std::vector<Value> lists;
    for (std::size_t i = 0; i < kLemmaInputs; ++i) lists.push_back(nat_list(nlc, list_of(i % 21, i)));
    std::vector<Lemma1Case> coalgs{
        {"out", ty::nu(lc), parse_term("\\s : PairStream. out[L] s", co), streams},
        {"zW", parse_type("NatList * NatList", co), parse_term("zW", co), co_pairs},
        {"twin", parse_type("NatList", co),
         parse_term("\\l : NatList. case unroll[NL] l of inl u => inl[L NatList] () "
                    "| inr c => inr[L NatList] (fst c, fst c, snd c)",
                    co),
         lists},
    };
    auto cobuild_side = check_lemma1_sampled(co, tm::var("ssum'"), lc, false, coalgs);

    std::size_t cases = 0;
    for (const auto* rep : {&build_side, &cobuild_side})
      for (const auto& c : rep->cases) {
        require(o, c.passed() && c.total == kLemmaInputs,
                c.label + ": " + std::to_string(c.equal) + "/" + std::to_string(c.total));
        ++cases;
      }
    require(o, build_side.cases.size() >= 3 && cobuild_side.cases.size() >= 3, "too few structures");
    if (o.pass)
      o.detail = std::to_string(build_side.cases.size()) + " algebras, " + std::to_string(cobuild_side.cases.size()) +
                 " coalgebras, " + std::to_string(kLemmaInputs) + " inputs each";
    return o;
  });

  criterion(7, "paranaturality", kParanatBudget, [] {
    Outcome o;
    std::size_t checked = 0, outside = 0;
    for (const auto& path : corpus_files()) {
      Program p = load(path);
      for (const auto& d : p.decls) {
        if (d.kind != DeclKind::Term || d.type->kind != TypeKind::Forall) continue;
        PolytypeDecomposition shape;
        try {
          shape = decompose_polytype(d.type->left, d.type->name);
        } catch (const DecompositionError&) {
          continue;
        }
        SemanticFamily fam;
        try {
          fam = tabulate_family(p, tm::var(d.name), shape, kMaxCarrier);
        } catch (const UnsupportedError&) {
          // components such as Nat or Mu have no finite interpretation
          ++outside;
          continue;
        }
        auto r = check_paranatural(fam, shape.W, shape.V, kMaxCarrier);
        require(o, r.ok, d.name + " has a counterexample");
        ++checked;
      }
    }
    require(o, checked >= 7, "only " + std::to_string(checked) + " finite terms");
    auto bad = check_paranatural(bad_const_family(kMaxCarrier), bad_const_shape(), fn::id(), kMaxCarrier);
    require(o, !bad.ok, "bad_const passed");
    if (!bad.ok)
      require(o, verify_witness(bad_const_family(kMaxCarrier), bad_const_shape(), fn::id(), *bad.counterexample),
              "bad_const witness does not verify");
    if (o.pass)
      o.detail = std::to_string(checked) + " terms Ok, " + std::to_string(outside) +
                 " outside the finite fragment, bad_const refuted at |X|=" + std::to_string(bad.counterexample->x) +
                 ", |Y|=" + std::to_string(bad.counterexample->y);
    return o;
  });

  criterion(8, "nested zip and sum", kNestBudget, [] {
    Outcome o;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> len(0, kNestMaxDepth + 1);
    std::uint64_t fused_nodes = 0;
    for (std::size_t i = 0; i < kNestPairs; ++i) {
      NestVal a = random_nest(len(rng), rng);
      NestVal b = random_nest(len(rng), rng);
      std::uint64_t unfused = ssumN(zipWN(a, b));
      std::uint64_t before = pair_nodes_allocated();
      std::uint64_t fused = sumzipN_fused(a, b);
      fused_nodes += pair_nodes_allocated() - before;
      std::size_t n = std::min(a.entries.size(), b.entries.size());
      std::uint64_t oracle = 0;
      for (std::size_t k = 0; k < n; ++k) {
        for (auto x : tree_leaves(a.entries[k])) oracle += x;
        for (auto x : tree_leaves(b.entries[k])) oracle += x;
      }
      require(o, unfused == fused && fused == oracle, "pair " + std::to_string(i) + " differs");
    }
    require(o, fused_nodes == 0, std::to_string(fused_nodes) + " pair nodes in the fused path");
    NestPairVal ex = zipWN(parse_nest("{1; (2, 3)}"), parse_nest("{4; (5, 6)}"));
    std::uint64_t flat = 0;
    for (const auto& e : ex.entries) {
      std::vector<const PerfectTree<NatPair>*> stack{e.get()};
      while (!stack.empty()) {
        auto* t = stack.back();
        stack.pop_back();
        if (t->leaf)
          flat += t->leaf->first + t->leaf->second;
        else
          stack.insert(stack.end(), {t->left.get(), t->right.get()});
      }
    }
    require(o, ssumN(ex) == 21 && flat == 21, "example sums to " + std::to_string(ssumN(ex)));
    if (o.pass) o.detail = std::to_string(kNestPairs) + " pairs, 0 fused pair nodes, example = 21";
    return o;
  });

  criterion(9, "subject reduction and roundtrip", kSuiteBudget, [&] {
    Outcome o;
    std::size_t steps = 0, files = 0;
    for (const auto& path : corpus_files()) {
      Program p = load(path);
      std::string once = print_program(p);
      require(o, print_program(parse_program(once)) == once, path + " does not roundtrip");
      ++files;
      for (std::size_t i = 0; i < p.decls.size(); ++i) {
        const Decl& d = p.decls[i];
        if (d.kind != DeclKind::Term) continue;
        RewriteScope scope{p, i + 1, {}};
        auto r = fuse_fixpoint(scope, d.body);
        Term cur = d.body;
        for (const auto& s : r.report.steps) {
          cur = apply_rule_at(scope, cur, s.rule, s.path);
          require(o, type_equal(typecheck_term(p, {}, cur), d.type), d.name + " changed type at " + s.after);
          ++steps;
        }
      }
      for (bool abstract : {false, true}) {
        ProgramFuseOptions opts;
        opts.abstract = abstract;
        auto fused = fuse_program(p, opts);
        auto types = typecheck_program(fused.program);
        for (const auto& dfu : fused.decls) {
          require(o, dfu.types_match, dfu.name + " changed type");
          for (const auto& s : dfu.report.steps) {
            require(o, s.type_preserved, dfu.name + " step not type preserving");
            ++steps;
          }
        }
        (void)types;
      }
    }
    double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
    require(o, total < kSuiteBudget, "suite took " + std::to_string(total) + " s");
    if (o.pass)
      o.detail = std::to_string(steps) + " rewrites typed, " + std::to_string(files) + " files roundtrip";
    return o;
  });

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
