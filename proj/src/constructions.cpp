#include "dtrank/constructions.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace dtrank {

namespace {

//! Smallest input (as an integer) on which f takes `value`.
std::uint32_t first_input_with(const BoolFun& f, bool value) {
  for (std::uint32_t x = 0; x < f.table_size(); ++x)
    if (f.get(x) == value) return x;
  throw std::logic_error("no input with the requested value");
}

/*! Smallest minimum-size certificate of input a for `value`: the first
 *  S in (popcount, numeric) order with f identically `value` on (S, a|S).
 */
std::uint32_t min_certificate(const BoolFun& f, std::uint32_t a, bool value) {
  const int n = f.arity();
  for (int size = 1; size <= n; ++size)
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      if (std::popcount(s) != size) continue;
      const BoolFun r = f.restricted(Subcube{s, a & s});
      if (r.constant_value() == std::optional<bool>(value)) return s;
    }
  throw std::logic_error("input has no certificate");
}

//! Remove the slots marked in `support` from the map.
std::vector<int> strip(const std::vector<int>& var_map, std::uint32_t support) {
  std::vector<int> out;
  for (std::size_t i = 0; i < var_map.size(); ++i)
    if (((support >> i) & 1u) == 0) out.push_back(var_map[i]);
  return out;
}

std::vector<int> strip_one(const std::vector<int>& var_map, int i) {
  std::vector<int> out = var_map;
  out.erase(out.begin() + i);
  return out;
}

std::vector<int> full_map(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

struct CertBuilder {
  const ExactOptions& opts;

  DTree build(const BoolFun& f, const std::vector<int>& var_map) {
    if (const auto c = f.constant_value()) return DTree::leaf(*c);
    if (certificates(f, opts).c1 == 1) return chain(f, var_map);
    const std::uint32_t a = first_input_with(f, false);
    const std::uint32_t s = min_certificate(f, a, false);
    return block(f, var_map, s, s, 0u);
  }

  //! Complete tree over the certificate variables; each of its leaves
  //! recurses on the corresponding full restriction.
  DTree block(const BoolFun& f, const std::vector<int>& var_map, std::uint32_t support,
              std::uint32_t todo, std::uint32_t assigned) {
    if (todo == 0)
      return build(f.restricted(Subcube{support, assigned}), strip(var_map, support));
    const int i = std::countr_zero(todo);
    return DTree::query(var_map[i],
                        block(f, var_map, support, todo & (todo - 1), assigned),
                        block(f, var_map, support, todo & (todo - 1), assigned | (1u << i)));
  }

  //! Every 1-input has a one-variable certificate: query each forcing
  //! variable in ascending order; one branch is an immediate 1-leaf.
  DTree chain(const BoolFun& f, const std::vector<int>& var_map) {
    if (const auto c = f.constant_value()) return DTree::leaf(*c);
    for (int i = 0; i < f.arity(); ++i)
      for (const bool v : {false, true}) {
        if (f.cofactor(i, v).constant_value() != std::optional<bool>(true)) continue;
        const DTree rest = chain(f.cofactor(i, !v), strip_one(var_map, i));
        return v ? DTree::query(var_map[i], rest, DTree::leaf(true))
                 : DTree::query(var_map[i], DTree::leaf(true), rest);
      }
    throw std::logic_error("C1 = 1 but no forcing variable found");
  }
};

}  // namespace

DTree cert_tree(const BoolFun& f, const ExactOptions& opts) {
  if (f.arity() > opts.effective_cap())
    throw CapExceeded("cert_tree: arity exceeds the exact-search cap");
  CertBuilder b{opts};
  return b.build(f, full_map(f.arity()));
}

namespace {

struct SparsityBuilder {
  const ExactOptions& opts;

  DTree build(const BoolFun& f, const std::vector<int>& var_map) {
    if (const auto c = f.constant_value()) return DTree::leaf(*c);
    const Subcube kill = kill_number(f, opts).witness;
    return block(f, var_map, kill.support, kill.support, 0u);
  }

  DTree block(const BoolFun& f, const std::vector<int>& var_map, std::uint32_t support,
              std::uint32_t todo, std::uint32_t assigned) {
    if (todo == 0)
      return build(f.restricted(Subcube{support, assigned}), strip(var_map, support));
    const int i = std::countr_zero(todo);
    return DTree::query(var_map[i],
                        block(f, var_map, support, todo & (todo - 1), assigned),
                        block(f, var_map, support, todo & (todo - 1), assigned | (1u << i)));
  }
};

}  // namespace

DTree sparsity_tree(const BoolFun& f, const ExactOptions& opts) {
  if (f.arity() > opts.effective_cap())
    throw CapExceeded("sparsity_tree: arity exceeds the exact-search cap");
  SparsityBuilder b{opts};
  return b.build(f, full_map(f.arity()));
}

namespace {

//! Shift every variable of `t` up by `offset` and replace its leaves:
//! b-labeled leaves become cont[b] (shared, not copied).
DTree shift_and_graft(const DTree& t, int offset, const DTree& cont0, const DTree& cont1) {
  std::unordered_map<const DNode*, DTree> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> DTree {
    if (const auto it = memo.find(p.get()); it != memo.end()) return it->second;
    DTree out = p->is_leaf()
                    ? (p->leaf_value ? cont1 : cont0)
                    : DTree::query(p->var + offset, self(self, p->lo), self(self, p->hi));
    memo.emplace(p.get(), out);
    return out;
  };
  return go(go, t.root());
}

}  // namespace

DTree composed_tree(const DTree& outer, const std::vector<DTree>& inner_trees,
                    const std::vector<int>& inner_arities) {
  if (inner_trees.size() != inner_arities.size())
    throw std::invalid_argument("composed_tree: one arity per inner tree");
  std::vector<int> offsets(inner_trees.size() + 1, 0);
  for (std::size_t i = 0; i < inner_trees.size(); ++i) {
    if (inner_arities[i] < 1 || inner_trees[i].min_arity() > inner_arities[i])
      throw std::invalid_argument("composed_tree: inner tree exceeds its block arity");
    if (inner_trees[i].is_leaf())
      throw std::invalid_argument("composed_tree: inner trees must be non-constant");
    offsets[i + 1] = offsets[i] + inner_arities[i];
  }
  auto go = [&](auto&& self, const DNodePtr& p) -> DTree {
    if (p->is_leaf()) return DTree::leaf(p->leaf_value);
    if (p->var >= static_cast<int>(inner_trees.size()))
      throw std::invalid_argument("composed_tree: outer tree queries a missing block");
    return shift_and_graft(inner_trees[p->var], offsets[p->var], self(self, p->lo),
                           self(self, p->hi));
  };
  return go(go, outer.root());
}

namespace {

long long subtree_size(const DNodePtr& p, std::unordered_map<const DNode*, long long>& memo) {
  const auto it = memo.find(p.get());
  if (it != memo.end()) return it->second;
  const long long v =
      p->is_leaf() ? 1 : subtree_size(p->lo, memo) + subtree_size(p->hi, memo);
  memo.emplace(p.get(), v);
  return v;
}

//! Rebuild `root` with the subtree at the end of `path` replaced by its
//! sibling (path entries are the branch bits taken from the root).
DNodePtr remove_subtree(const DNodePtr& root, const std::vector<bool>& path, std::size_t i) {
  if (i + 1 == path.size()) return path[i] ? root->lo : root->hi;
  auto n = std::make_shared<DNode>();
  n->var = root->var;
  if (path[i]) {
    n->lo = root->lo;
    n->hi = remove_subtree(root->hi, path, i + 1);
  } else {
    n->lo = remove_subtree(root->lo, path, i + 1);
    n->hi = root->hi;
  }
  return n;
}

}  // namespace

ConjTree conj_from_simple(const DTree& tree) {
  std::unordered_map<const DNode*, long long> sizes;
  const long long s = subtree_size(tree.root(), sizes);
  if (s == 1) return ConjTree::leaf(tree.root()->leaf_value);

  // Walk toward the heavier child (ties toward lo) until the subtree
  // first drops below two thirds of the leaves; the stopping node then
  // still holds at least one third.
  DNodePtr v = tree.root();
  std::vector<bool> path;
  std::uint32_t pos = 0, neg = 0;
  while (3 * subtree_size(v, sizes) >= 2 * s) {
    const bool heavier = subtree_size(v->hi, sizes) > subtree_size(v->lo, sizes);
    (heavier ? pos : neg) |= 1u << v->var;
    path.push_back(heavier);
    v = heavier ? v->hi : v->lo;
  }

  const ConjTree hi = conj_from_simple(DTree::from_root(v));
  const ConjTree lo = conj_from_simple(DTree::from_root(remove_subtree(tree.root(), path, 0)));
  return ConjTree::query(pos, neg, lo, hi);
}

DTree simple_from_conj(const ConjTree& tree) {
  auto go = [&](auto&& self, const CNodePtr& p) -> DTree {
    if (p->leaf) return DTree::leaf(p->leaf_value);
    const DTree lo = self(self, p->lo);  // shared by every falsified literal
    const DTree hi = self(self, p->hi);
    DTree out = hi;
    const std::uint32_t all = p->pos | p->neg;
    // Build the chain bottom-up so queries run in ascending variable order.
    for (int i = kMaxArity - 1; i >= 0; --i) {
      if (((all >> i) & 1u) == 0) continue;
      const bool positive = (p->pos >> i) & 1u;
      out = positive ? DTree::query(i, lo, out) : DTree::query(i, out, lo);
    }
    return out;
  };
  return go(go, tree.root());
}

int exact_conj_depth(const BoolFun& f) {
  const int n = f.arity();
  if (n > 4) throw CapExceeded("exact_conj_depth: arity above 4 is not supported");
  const std::uint32_t full = (1u << f.table_size()) - 1u;
  std::uint32_t ones = 0;
  for (std::uint32_t x = 0; x < f.table_size(); ++x)
    if (f.get(x)) ones |= 1u << x;

  // Distinct nontrivial conjunction queries, as masks over the input set
  // (digit 1 = positive literal, 0 = negated literal, 2 = unused).
  std::vector<std::uint32_t> queries;
  std::vector<std::uint8_t> digits(n, 2);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (std::size_t c = 0; c < total; ++c) {
    std::uint32_t pos = 0, neg = 0;
    for (int i = 0; i < n; ++i) {
      if (digits[i] == 1) pos |= 1u << i;
      if (digits[i] == 0) neg |= 1u << i;
    }
    if ((pos | neg) != 0) {
      std::uint32_t q = 0;
      for (std::uint32_t x = 0; x < f.table_size(); ++x)
        if ((x & pos) == pos && (x & neg) == 0) q |= 1u << x;
      queries.push_back(q);
    }
    for (int i = 0; i < n; ++i) {
      if (digits[i] > 0) {
        --digits[i];
        break;
      }
      digits[i] = 2;
    }
  }
  std::sort(queries.begin(), queries.end());
  queries.erase(std::unique(queries.begin(), queries.end()), queries.end());

  std::unordered_map<std::uint32_t, int> memo;
  auto depth = [&](auto&& self, std::uint32_t alive) -> int {
    if ((alive & ones) == 0 || (alive & ones) == alive) return 0;
    if (const auto it = memo.find(alive); it != memo.end()) return it->second;
    int best = 1 << 20;
    for (const std::uint32_t q : queries) {
      const std::uint32_t a1 = alive & q;
      if (a1 == 0 || a1 == alive) continue;
      best = std::min(best, 1 + std::max(self(self, a1), self(self, alive & ~q)));
    }
    memo.emplace(alive, best);
    return best;
  };
  return depth(depth, full);
}

}  // namespace dtrank
