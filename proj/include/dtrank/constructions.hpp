#pragma once

#include <vector>

#include "dtrank/boolfun.hpp"
#include "dtrank/dtree.hpp"
#include "dtrank/measures.hpp"

namespace dtrank {

/*! Certificate-driven tree: while some 1-input needs more than a single
 *  certificate variable, query a smallest 0-certificate of the smallest
 *  0-input as a complete block and recurse; once every 1-input has a
 *  singleton certificate, finish with a chain of forced queries.  The
 *  result computes f and has rank at most (C0-1)(C1-1)+1.
 */
DTree cert_tree(const BoolFun& f, const ExactOptions& opts = {});

/*! Kill-set tree: query a minimum set of variables some assignment of
 *  which makes f constant, then recurse on every surviving branch.  The
 *  depth is at most Rank(f) * (1 + log2 spar(f)) because each level
 *  halves the reduced sparsity.
 */
DTree sparsity_tree(const BoolFun& f, const ExactOptions& opts = {});

/*! Substitute inner trees into an outer tree: every query of outer
 *  variable i becomes a copy of inner_trees[i] (variables shifted into
 *  block i), whose b-labeled leaves continue with the rest of the outer
 *  computation under x_i = b.  Blocks follow the composition layout:
 *  inner_trees[0] owns the lowest variables.  Inner trees must compute
 *  non-constant functions of the stated arities.
 */
DTree composed_tree(const DTree& outer, const std::vector<DTree>& inner_trees,
                    const std::vector<int>& inner_arities);

/*! Balance an ordinary tree into a conjunction tree by repeatedly
 *  splitting off a subtree holding between one and two thirds of the
 *  leaves (walking from the root toward the heavier child; the first
 *  node inside the window wins).  Depth is at most ceil(2*log_{3/2} s).
 */
ConjTree conj_from_simple(const DTree& tree);

/*! Expand each conjunction query into a chain of single-variable
 *  queries (ascending variable order, early exit to the 0-branch).
 *  The resulting tree's rank is at most the conjunction tree's depth.
 */
DTree simple_from_conj(const ConjTree& tree);

/*! Exact minimum conjunction-query depth, by dynamic programming over
 *  the reachable families of still-possible inputs.  Exponential state
 *  space; restricted to arity <= 4.
 */
int exact_conj_depth(const BoolFun& f);

}  // namespace dtrank
