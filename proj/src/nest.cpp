#include "fusec/nest.hpp"

#include <atomic>
#include <type_traits>

#include "fusec/syntax.hpp"

namespace fusec {

namespace {

std::atomic<std::uint64_t> g_pair_nodes{0};

template <typename L>
void count_node() {
  if constexpr (std::is_same_v<L, NatPair>) ++g_pair_nodes;
}

template <typename L>
TreePtr<L> leaf(L v) {
  count_node<L>();
  auto t = std::make_shared<PerfectTree<L>>();
  t->leaf = std::move(v);
  return t;
}

template <typename L>
TreePtr<L> node(TreePtr<L> l, TreePtr<L> r) {
  count_node<L>();
  auto t = std::make_shared<PerfectTree<L>>();
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

template <typename L>
int depth_of(const TreePtr<L>& t) {
  if (!t) return -1;
  if (t->leaf) return (t->left || t->right) ? -1 : 0;
  int l = depth_of(t->left);
  int r = depth_of(t->right);
  if (l < 0 || l != r) return -1;
  return l + 1;
}

template <typename L>
void validate(const Nest<L>& n) {
  for (std::size_t i = 0; i < n.entries.size(); ++i) {
    int d = depth_of(n.entries[i]);
    if (d != static_cast<int>(i))
      throw NestShapeError("entry " + std::to_string(i) + " must be a perfect tree of depth " + std::to_string(i) +
                           (d < 0 ? ", got an unbalanced tree" : ", got depth " + std::to_string(d)));
  }
}

// Reads a depth-(d+1) tree as a depth-d tree of pairs and keeps one side.
template <typename L>
TreePtr<L> project_last(const TreePtr<L>& t, bool left) {
  if (t->leaf) throw NestShapeError("cannot project a leaf");
  if (t->left->leaf) return left ? t->left : t->right;
  return node(project_last(t->left, left), project_last(t->right, left));
}

template <typename L>
Nest<L> project(const Nest<L>& n, std::size_t from, bool left) {
  Nest<L> out;
  for (std::size_t i = from; i < n.entries.size(); ++i) out.entries.push_back(project_last(n.entries[i], left));
  return out;
}

TreePtr<NatPair> zip_tree(const TreePtr<std::uint64_t>& a, const TreePtr<std::uint64_t>& b, NestCounters* c) {
  if (c) ++c->pair_nodes;
  if (a->leaf) return leaf(NatPair{*a->leaf, *b->leaf});
  return node(zip_tree(a->left, b->left, c), zip_tree(a->right, b->right, c));
}

template <typename L>
void render_tree(const TreePtr<L>& t, std::string& out);

void render_leaf(std::uint64_t v, std::string& out) { out += std::to_string(v); }
void render_leaf(const NatPair& v, std::string& out) {
  out += "(" + std::to_string(v.first) + ", " + std::to_string(v.second) + ")";
}

template <typename L>
void render_tree(const TreePtr<L>& t, std::string& out) {
  if (t->leaf) {
    render_leaf(*t->leaf, out);
    return;
  }
  out += "(";
  render_tree(t->left, out);
  out += ", ";
  render_tree(t->right, out);
  out += ")";
}

template <typename L>
std::string render(const Nest<L>& n) {
  std::string out = "{";
  for (std::size_t i = 0; i < n.entries.size(); ++i) {
    if (i) out += "; ";
    render_tree(n.entries[i], out);
  }
  return out + "}";
}

TreePtr<std::uint64_t> tree_from_syntax(const ValueSyntax& s, std::size_t depth) {
  if (depth == 0) {
    if (s.kind != ValueSyntax::Kind::Nat) throw NestShapeError("entry 0 must be a natural number");
    return nat_leaf(s.nat);
  }
  if (s.kind != ValueSyntax::Kind::Tuple) throw NestShapeError("expected a tuple at depth " + std::to_string(depth));
  std::size_t width = std::size_t{1} << depth;
  if (s.items.size() == width) {
    bool flat = true;
    for (const auto& it : s.items) flat = flat && it.kind == ValueSyntax::Kind::Nat;
    if (flat) {
      std::vector<std::uint64_t> leaves;
      for (const auto& it : s.items) leaves.push_back(it.nat);
      return tree_from_leaves(leaves);
    }
  }
  if (s.items.size() != 2)
    throw NestShapeError("a depth-" + std::to_string(depth) + " entry needs " + std::to_string(width) +
                         " leaves or two subtrees, got " + std::to_string(s.items.size()) + " items");
  return nat_node(tree_from_syntax(s.items[0], depth - 1), tree_from_syntax(s.items[1], depth - 1));
}

}  // namespace

TreePtr<std::uint64_t> nat_leaf(std::uint64_t n) { return leaf<std::uint64_t>(n); }
TreePtr<std::uint64_t> nat_node(TreePtr<std::uint64_t> l, TreePtr<std::uint64_t> r) {
  return node(std::move(l), std::move(r));
}

std::uint64_t pair_nodes_allocated() { return g_pair_nodes.load(); }

int tree_depth(const TreePtr<std::uint64_t>& t) { return depth_of(t); }
int tree_depth(const TreePtr<NatPair>& t) { return depth_of(t); }

void validate_nest(const NestVal& n) { validate(n); }
void validate_nest(const NestPairVal& n) { validate(n); }

std::vector<std::uint64_t> tree_leaves(const TreePtr<std::uint64_t>& t) {
  if (t->leaf) return {*t->leaf};
  auto l = tree_leaves(t->left);
  auto r = tree_leaves(t->right);
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

TreePtr<std::uint64_t> tree_from_leaves(const std::vector<std::uint64_t>& leaves) {
  std::size_t n = leaves.size();
  if (n == 0 || (n & (n - 1)) != 0) throw NestShapeError("leaf count must be a power of two");
  std::vector<TreePtr<std::uint64_t>> level;
  for (auto v : leaves) level.push_back(nat_leaf(v));
  while (level.size() > 1) {
    std::vector<TreePtr<std::uint64_t>> up;
    for (std::size_t i = 0; i < level.size(); i += 2) up.push_back(nat_node(level[i], level[i + 1]));
    level = std::move(up);
  }
  return level.front();
}

NestVal nest_from_leaves(const std::vector<std::vector<std::uint64_t>>& entries) {
  NestVal n;
  for (const auto& e : entries) n.entries.push_back(tree_from_leaves(e));
  validate(n);
  return n;
}

NestVal nest_fst(const NestVal& n, std::size_t from) { return project(n, from, true); }
NestVal nest_snd(const NestVal& n, std::size_t from) { return project(n, from, false); }

NestPairVal zipWN(const NestVal& a, const NestVal& b, NestCounters* counters) {
  validate(a);
  validate(b);
  NestPairVal out;
  std::size_t n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < n; ++i) out.entries.push_back(zip_tree(a.entries[i], b.entries[i], counters));
  return out;
}

// ssumN [] = 0
// ssumN ((x, y) :: zs) = x + y + ssumN (fst zs) + ssumN (snd zs)
std::uint64_t ssumN(const NestPairVal& z) {
  if (z.entries.empty()) return 0;
  const NatPair& head = *z.entries[0]->leaf;
  return head.first + head.second + ssumN(project(z, 1, true)) + ssumN(project(z, 1, false));
}

// sumzipN (x :: xs, y :: ys) = x + y + sumzipN (fst xs, fst ys) + sumzipN (snd xs, snd ys)
std::uint64_t sumzipN_fused(const NestVal& a, const NestVal& b) {
  if (a.entries.empty() || b.entries.empty()) return 0;
  std::uint64_t x = *a.entries[0]->leaf;
  std::uint64_t y = *b.entries[0]->leaf;
  return x + y + sumzipN_fused(nest_fst(a), nest_fst(b)) + sumzipN_fused(nest_snd(a), nest_snd(b));
}

NestVal random_nest(std::size_t length, std::mt19937_64& rng, std::uint64_t max_nat) {
  std::uniform_int_distribution<std::uint64_t> d(0, max_nat);
  std::vector<std::vector<std::uint64_t>> entries(length);
  for (std::size_t i = 0; i < length; ++i) {
    entries[i].resize(std::size_t{1} << i);
    for (auto& v : entries[i]) v = d(rng);
  }
  return nest_from_leaves(entries);
}

NestVal parse_nest(std::string_view source) {
  ValueSyntax s = parse_value_syntax(source);
  if (s.kind != ValueSyntax::Kind::Nest) throw NestShapeError("a nest literal has the form {e0; e1; ...}");
  NestVal n;
  for (std::size_t i = 0; i < s.items.size(); ++i) n.entries.push_back(tree_from_syntax(s.items[i], i));
  validate(n);
  return n;
}

std::string print_nest(const NestVal& n) { return render(n); }
std::string print_nest(const NestPairVal& n) { return render(n); }

}  // namespace fusec
