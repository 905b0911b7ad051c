#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusec/error.hpp"

namespace fusec {

// Nest X = 1 + X * Nest (X * X), encoded as a list whose i-th entry is a
// perfect binary tree of depth i. Reading the tail as Nest (X * X) splits
// each tree at its last level, so fst/snd keep the left/right leaf of every
// bottom node.

template <typename Leaf>
struct PerfectTree {
  std::optional<Leaf> leaf;
  std::shared_ptr<const PerfectTree> left;
  std::shared_ptr<const PerfectTree> right;
};

template <typename Leaf>
using TreePtr = std::shared_ptr<const PerfectTree<Leaf>>;

template <typename Leaf>
struct Nest {
  std::vector<TreePtr<Leaf>> entries;
};

using NatPair = std::pair<std::uint64_t, std::uint64_t>;
using NestVal = Nest<std::uint64_t>;
using NestPairVal = Nest<NatPair>;

class NestShapeError : public Error {
 public:
  using Error::Error;
};

// Nodes built while producing NestPairVal entries.
struct NestCounters {
  std::uint64_t pair_nodes = 0;
};

// Every PerfectTree<NatPair> node allocated so far, across all callers.
std::uint64_t pair_nodes_allocated();

TreePtr<std::uint64_t> nat_leaf(std::uint64_t n);
TreePtr<std::uint64_t> nat_node(TreePtr<std::uint64_t> l, TreePtr<std::uint64_t> r);

// -1 when the tree is not perfect.
int tree_depth(const TreePtr<std::uint64_t>& t);
int tree_depth(const TreePtr<NatPair>& t);

// Throws NestShapeError when entry i is not a perfect tree of depth i.
void validate_nest(const NestVal& n);
void validate_nest(const NestPairVal& n);

// Leaves of a tree from left to right.
std::vector<std::uint64_t> tree_leaves(const TreePtr<std::uint64_t>& t);
// Entry i as a tree of depth i built from `leaves` (size 2^i).
TreePtr<std::uint64_t> tree_from_leaves(const std::vector<std::uint64_t>& leaves);

NestVal nest_from_leaves(const std::vector<std::vector<std::uint64_t>>& entries);

// Tail of a nest read at X * X, then projected.
NestVal nest_fst(const NestVal& n, std::size_t from = 1);
NestVal nest_snd(const NestVal& n, std::size_t from = 1);

NestPairVal zipWN(const NestVal& a, const NestVal& b, NestCounters* counters = nullptr);
std::uint64_t ssumN(const NestPairVal& z);
std::uint64_t sumzipN_fused(const NestVal& a, const NestVal& b);

// Random nest with `length` entries and leaves in [0, max_nat].
NestVal random_nest(std::size_t length, std::mt19937_64& rng, std::uint64_t max_nat = 9);

// {e0; e1; ...} where entry i is either a flat 2^i-tuple or nested pairs.
NestVal parse_nest(std::string_view source);
std::string print_nest(const NestVal& n);
std::string print_nest(const NestPairVal& n);

}  // namespace fusec
