#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtrank/boolfun.hpp"

namespace dtrank {

struct DNode;
using DNodePtr = std::shared_ptr<const DNode>;

/*! A node of an ordinary (single-variable query) decision tree.
 *  Nodes are immutable and shared: grafting attaches one subtree under
 *  many leaves without copying, and all measures are computed with a
 *  per-node memo so shared subtrees are visited once.
 */
struct DNode {
  int var = -1;  // 0-based query variable; -1 marks a leaf
  bool leaf_value = false;
  DNodePtr lo, hi;

  bool is_leaf() const { return var < 0; }
};

class DTree {
 public:
  //! Default-constructed trees are the 0-leaf.
  DTree() : DTree(leaf(false)) {}

  static DTree leaf(bool value);
  static DTree query(int var, DTree lo, DTree hi);
  //! Adopt an existing (immutable) node as a tree root.
  static DTree from_root(DNodePtr root);

  const DNodePtr& root() const { return root_; }
  bool is_leaf() const { return root_->is_leaf(); }

  //! Strahler number of the underlying binary tree: leaves have rank 0;
  //! a node's rank is r+1 when both children have rank r, else max.
  int rank() const;
  //! Longest root-to-leaf path (number of queries).
  int depth() const;
  //! Number of leaves of the unfolded tree.
  long long size() const;
  //! Depth where querying variable i costs weights[i] (weights >= 0).
  long long weighted_depth(std::span<const int> weights) const;

  bool eval(std::uint32_t x) const;
  //! True iff the tree agrees with f on all 2^arity inputs.
  bool computes(const BoolFun& f) const;
  //! True iff no variable repeats on any root-to-leaf path.
  bool is_reduced() const;
  //! Non-minimality lint: some query has two identical leaf children.
  bool has_trivial_query() const;
  //! Largest variable index mentioned, plus one (0 for bare leaves).
  int min_arity() const;

  //! Replace every 0-leaf by t0 and every 1-leaf by t1 (subtrees shared).
  DTree graft(const DTree& t0, const DTree& t1) const;

  //! JSON: {"leaf":0|1} or {"var":i,"lo":...,"hi":...} with 1-based vars.
  nlohmann::ordered_json to_json() const;
  static DTree from_json(const nlohmann::json& j);
  //! Graphviz rendering; lo edges emitted before hi edges, node ids in
  //! preorder, leaf labels shaped by value.
  std::string to_dot(const std::string& graph_name = "dtree") const;

 private:
  explicit DTree(DNodePtr root) : root_(std::move(root)) {}
  DNodePtr root_;
};

struct CNode;
using CNodePtr = std::shared_ptr<const CNode>;

/*! A node of a conjunction-query decision tree.  An inner node asks
 *  whether all positive literals are 1 and all negated literals are 0;
 *  `hi` is taken when the conjunction holds.
 */
struct CNode {
  bool leaf = true;
  bool leaf_value = false;
  std::uint32_t pos = 0, neg = 0;  // disjoint, pos|neg nonempty for queries
  CNodePtr lo, hi;
};

class ConjTree {
 public:
  ConjTree() : ConjTree(leaf(false)) {}

  static ConjTree leaf(bool value);
  static ConjTree query(std::uint32_t pos, std::uint32_t neg, ConjTree lo, ConjTree hi);

  const CNodePtr& root() const { return root_; }
  int depth() const;
  long long size() const;
  bool eval(std::uint32_t x) const;
  bool computes(const BoolFun& f) const;
  int min_arity() const;

  //! JSON: {"leaf":0|1} or {"pos":[...],"neg":[...],"lo":...,"hi":...}
  //! with 1-based sorted variable lists.
  nlohmann::ordered_json to_json() const;
  static ConjTree from_json(const nlohmann::json& j);
  std::string to_dot(const std::string& graph_name = "conjtree") const;

 private:
  explicit ConjTree(CNodePtr root) : root_(std::move(root)) {}
  CNodePtr root_;
};

}  // namespace dtrank
