#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtrank/boolfun.hpp"

namespace dtrank::catalog {

BoolFun and_fn(int n);
BoolFun or_fn(int n);
BoolFun parity(int n);
//! Threshold: 1 iff at least k of the n inputs are 1 (1 <= k <= n).
BoolFun threshold(int k, int n);
//! Majority; for even n this is threshold(n/2 + 1, n) (strict majority).
BoolFun majority(int n);
//! OR of `rows` disjoint ANDs of `cols` variables; row 0 occupies the
//! lowest variable positions.
BoolFun tribes(int rows, int cols);
//! AND of `rows` disjoint ORs of `cols` variables (the dual of tribes).
BoolFun tribes_dual(int rows, int cols);
//! Pointwise majority(n) OR parity(n).
BoolFun maj_or_parity(int n);

}  // namespace dtrank::catalog

namespace dtrank {

//! A function together with the composition structure it was built from.
struct Composition {
  BoolFun outer;
  std::vector<BoolFun> inners;

  BoolFun build(int arity_cap = kMaxArity) const {
    return BoolFun::compose(outer, inners, arity_cap);
  }
};

//! Row/column layout of a composition whose inner blocks all have the
//! same arity (rows = number of blocks, cols = variables per block).
struct BlockShape {
  int rows = 0;
  int cols = 0;
};

/*! Parsed function expression.
 *
 *  Grammar (names are case-sensitive):
 *      AND:n  OR:n  PARITY:n  MAJ:n  THR:k:n  TRIBES:nxm  TRIBES_D:nxm
 *      MAJ-OR-PARITY:n  TT:<hex>:n
 *      NOT(e)  DUAL(e)  ITER(e,k)  COMPOSE(e;e,e,...)
 */
class FnExpr {
 public:
  //! Evaluate the expression to a truth table.
  BoolFun build(int arity_cap = kMaxArity) const;
  int arity() const;
  //! Outer/inner structure when the top level is a composition
  //! (TRIBES, TRIBES_D, COMPOSE, ITER with k >= 2).
  std::optional<Composition> composition() const;
  //! Uniform block layout when all inner blocks share one arity.
  std::optional<BlockShape> block_shape() const;
  const std::string& text() const { return text_; }

  //! Parse-tree node; defined in the implementation.
  struct Node;

 private:
  friend FnExpr parse_expression(const std::string&);
  std::shared_ptr<const Node> root_;
  std::string text_;
};

//! Parse an expression; throws ParseError with the offending offset.
FnExpr parse_expression(const std::string& text);

//! Shorthand: parse and build in one step.
BoolFun parse_function(const std::string& text, int arity_cap = kMaxArity);

//! One row of the closed-form complexity table for the named families.
struct ClosedFormRow {
  std::string name;
  std::string expression;  // parseable form of the function ("" for constants)
  int depth;
  int c0;
  int c1;
  int c;
  int gap;
  int rank;
};

//! Closed-form rows for arity n: constants, AND, OR, PARITY, MAJ and
//! THR:k:n for every k in 1..n.
std::vector<ClosedFormRow> closed_form_rows(int n);

//! Serialize a truth table to the on-disk format:
//!     n=<arity>\n<hex digits>\n
std::string to_tt_file(const BoolFun& f);
//! Parse the on-disk format (tolerates trailing whitespace/newlines).
BoolFun from_tt_file(const std::string& contents);

}  // namespace dtrank
