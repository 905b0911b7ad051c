#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "fusec/program.hpp"
#include "fusec/value.hpp"

namespace fusec {

struct AllocationProfile {
  // Keyed by the canonical functor rendering.
  std::map<std::string, std::uint64_t> mu_cells;
  std::map<std::string, std::uint64_t> nu_observations;
  std::uint64_t steps = 0;

  std::uint64_t mu_count(const FunctorExpr& f) const;
  std::uint64_t nu_count(const FunctorExpr& f) const;
};

bool operator==(const AllocationProfile& a, const AllocationProfile& b);

class FuelExhausted : public Error {
 public:
  explicit FuelExhausted(AllocationProfile profile)
      : Error("FuelExhausted after " + std::to_string(profile.steps) + " steps"), profile_(std::move(profile)) {}
  const AllocationProfile& profile() const { return profile_; }

 private:
  AllocationProfile profile_;
};

// Evaluation reached a state no well-typed term can reach.
class Stuck : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultFuel = 1000000;

// kDefaultFuel unless FUSEC_FUEL holds a positive integer.
std::uint64_t default_fuel();

// Call-by-value evaluator. Types are erased; every function application,
// type application and let counts as one step against the fuel.
class Interpreter {
 public:
  explicit Interpreter(const Program& program, std::uint64_t fuel = default_fuel());

  Value eval(const Term& t, const Env& env = nullptr);
  Value apply(const Value& fn, const Value& arg);
  // Type application on an evaluated value.
  Value instantiate(const Value& v);
  // One observation of a coinductive value.
  Value observe(const Value& v);
  Value global(const std::string& name);

  Value fmap(const FunctorExpr& f, const std::function<Value(const Value&)>& h, const Value& v);

  const AllocationProfile& profile() const { return profile_; }
  void reset_profile() { profile_ = {}; }
  std::uint64_t fuel() const { return fuel_; }

 private:
  void tick();
  Value make_mu(const FunctorExpr& f, Value payload);

  const Program& program_;
  std::uint64_t fuel_;
  AllocationProfile profile_;
};

struct RunResult {
  Value value;
  AllocationProfile profile;
};

RunResult run_with_profile(const Program& program, const std::string& main, const Value& input,
                           std::uint64_t fuel = default_fuel());

// Runs `fn` on a thread with a large stack; deep data drives deep recursion
// in the evaluator. Exceptions are rethrown in the caller.
void with_large_stack(const std::function<void()>& fn);

}  // namespace fusec
