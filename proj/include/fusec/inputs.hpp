#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fusec/type.hpp"
#include "fusec/value.hpp"

namespace fusec {

// Every first-order value of `t` whose naturals are at most `budget` and
// whose inductive height is at most `budget`, ordered by height and then
// lexicographically. Throws SizeCapError past `limit` values and
// UnsupportedError for types with arrows, quantifiers, variables or Nu.
std::vector<Value> canonical_values(const TypeExpr& t, std::size_t budget, std::size_t limit = 100000);

struct SampleSpec {
  std::size_t count = 100;
  std::uint64_t max_nat = 9;
  std::size_t max_depth = 8;  // list length, or tree height
  std::uint64_t seed = 1;
};

// Deterministic pseudo-random samples. Lists draw their length uniformly
// from [0, max_depth].
std::vector<Value> sample_values(const TypeExpr& t, const SampleSpec& spec);

// A value of "size" n: naturals are n, lists have length n with elements
// counting up from 1, and products pair two values of size n.
Value sized_value(const TypeExpr& t, std::size_t n);

}  // namespace fusec
