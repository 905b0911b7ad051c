#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fusec/eval.hpp"
#include "fusec/program.hpp"
#include "fusec/term.hpp"
#include "fusec/typecheck.hpp"

namespace fusec {

// R1: fold[F] c . build[F] p  ~>  p @[C] c
// R2: cobuild[F] q . unfold[F] a  ~>  q @[A] a
// R3: h (case s of inl x => l | inr y => r)  ~>  case s of inl x => h l | inr y => h r
enum class Rule { R1, R2, R3 };
const char* to_string(Rule r);

// Typing scope in which a term is rewritten.
struct RewriteScope {
  const Program& program;
  std::size_t visible = Program::npos;
  TypingContext ctx;
};

// One rule at the root of `t`; nullopt when `t` is not a redex for it.
// Functor-mismatched fold/build and cobuild/unfold pairs are left alone and
// reported through `warnings`.
std::optional<Term> rewrite_case_compose(const Term& t);
std::optional<Term> rewrite_cata_build(const RewriteScope& scope, const Term& t,
                                       std::vector<std::string>* warnings = nullptr);
std::optional<Term> rewrite_ana_cobuild(const RewriteScope& scope, const Term& t,
                                        std::vector<std::string>* warnings = nullptr);

struct RewriteStep {
  Rule rule;
  TermPath path;
  std::string before;
  std::string after;
  bool type_preserved = true;
  std::size_t measure_before = 0;
  std::size_t measure_after = 0;
};

struct RewriteReport {
  std::vector<RewriteStep> steps;
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<std::string> warnings;

  std::size_t count(Rule r) const;
};

struct FuseOptions {
  std::size_t max_iterations = 10000;
};

struct FuseResult {
  Term term;
  RewriteReport report;
};

// Redexes of fold/build, cobuild/unfold and case-under-application pairs.
std::size_t fusion_measure(const Term& t);

// Rewrites the first redex in post-order until none is left.
FuseResult fuse_fixpoint(const RewriteScope& scope, const Term& t, const FuseOptions& options = {});

// Applies `rule` to the subterm at `path`; throws Error when it is not a redex.
Term apply_rule_at(const RewriteScope& scope, const Term& t, Rule rule, const TermPath& path);
// Replays a report on the original term; equals the fused term.
Term replay(const RewriteScope& scope, const Term& t, const RewriteReport& report);

// ---------------------------------------------------------------------------
// Abstraction

class NotAbstractable : public Error {
 public:
  NotAbstractable(TermPath path, const std::string& message)
      : Error("NotAbstractable at " + path_to_string(path) + ": " + message), path_(std::move(path)) {}
  const TermPath& path() const { return path_; }

 private:
  TermPath path_;
};

// f : A -> Mu F  gives  /\X. \c : F X -> X. \a : A. fold[F] c (f a)
Term reify_build(const Program& program, const Term& f);
// g : Nu F -> B  gives  /\X. \d : X -> F X. \x : X. g (unfold[F] d x)
Term reify_cobuild(const Program& program, const Term& g);

// Abstracts the producer declaration `name` (A -> Mu F) over its
// constructors. Self-references become `self_name @[X] c`.
Term abstract_build(const Program& program, const std::string& name, const std::string& self_name);
// Dual for a consumer declaration (Nu F -> B).
Term abstract_cobuild(const Program& program, const std::string& name, const std::string& self_name);

// \x : F X -> X. fold[F] x   and   \x : X -> F X. unfold[F] x
Term alg_to_cata(const FunctorExpr& f, const TypeExpr& carrier);
Term coalg_to_ana(const FunctorExpr& f, const TypeExpr& carrier);

// Type of the producer/consumer body for functor F at A or B.
TypeExpr build_body_type(const FunctorExpr& f, const TypeExpr& input, const std::string& var = "X");
TypeExpr cobuild_body_type(const FunctorExpr& f, const TypeExpr& output, const std::string& var = "X");

// ---------------------------------------------------------------------------
// Whole programs

struct DeclFusion {
  std::string name;
  RewriteReport report;
  bool types_match = true;
};

struct ProgramFusion {
  Program program;
  std::vector<DeclFusion> decls;
  std::vector<std::string> abstracted;  // producer/consumer names given a marker
  std::vector<std::string> warnings;

  std::size_t count(Rule r) const;
  bool converged() const;
};

struct ProgramFuseOptions {
  FuseOptions fuse;
  bool abstract = false;
};

// Fuses every term declaration. With `abstract`, producers A -> Mu F and
// consumers Nu F -> B are first given build/cobuild markers, and references
// to them are replaced by the marked form.
ProgramFusion fuse_program(const Program& program, const ProgramFuseOptions& options = {});

// ---------------------------------------------------------------------------
// Differential testing

struct SampleOutcome {
  Value input;
  Value orig;
  Value fused;
  std::string orig_error;
  std::string fused_error;
  AllocationProfile orig_profile;
  AllocationProfile fused_profile;
  bool equal = false;
};

struct EquivalenceReport {
  std::vector<SampleOutcome> samples;
  std::size_t equal_count = 0;
  std::optional<std::size_t> first_mismatch;

  bool all_equal() const { return equal_count == samples.size(); }
};

// Evaluates closed terms of type A -> B with first-order B on each input.
EquivalenceReport verify_equivalence(const Program& program, const Term& orig, const Term& fused,
                                     const std::vector<Value>& inputs, std::uint64_t fuel = default_fuel());

}  // namespace fusec
