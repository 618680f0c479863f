#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtrank/util.hpp"

namespace dtrank {

//! Hard ceiling on the number of variables a truth table may have.
inline constexpr int kMaxArity = 16;

/*! A partial assignment: `support` marks the fixed variables (bit i set
 *  means variable i is fixed), `values` carries their values and must be
 *  a subset of `support`.  Variable indices are 0-based throughout the
 *  library; serialization and diagnostics use the 1-based labels x1..xn.
 */
struct Subcube {
  std::uint32_t support = 0;
  std::uint32_t values = 0;

  int codim() const;
  bool contains(std::uint32_t x) const { return (x & support) == values; }
  //! Extend by fixing one more variable; throws if already fixed.
  Subcube fixed(int var, bool value) const;
  bool operator==(const Subcube&) const = default;
};

/*! Value profile of a symmetric function: entry w is the value taken on
 *  all inputs of Hamming weight w (so `values.size() == n + 1`).
 */
struct SymmetricProfile {
  std::vector<std::uint8_t> values;

  int arity() const { return static_cast<int>(values.size()) - 1; }
  bool operator==(const SymmetricProfile&) const = default;
};

/*! A Boolean function of arity n stored as a packed 2^n-bit truth table.
 *
 *  Input index x encodes the assignment with variable i (0-based) at bit
 *  position i; table bit x is f(x).  Unused high bits of the last word
 *  are kept zero so that equality and hashing work on the raw words.
 */
class BoolFun {
 public:
  //! The arity-0 constant false function.
  BoolFun() : arity_(0), words_(1, 0) {}

  static BoolFun constant(int n, bool value);
  static BoolFun from_words(int n, std::vector<std::uint64_t> words);
  //! Hex digits in table order: the first digit holds bits 0..3 with
  //! table index 0 at its least-significant bit.
  static BoolFun from_hex(int n, const std::string& hex);

  template <class F>
  static BoolFun from_lambda(int n, F&& fn) {
    BoolFun r = constant(n, false);
    for (std::uint32_t x = 0; x < (1u << n); ++x) r.set(x, static_cast<bool>(fn(x)));
    return r;
  }

  int arity() const { return arity_; }
  std::uint32_t table_size() const { return 1u << arity_; }

  bool get(std::uint32_t x) const {
    return (words_[x >> 6] >> (x & 63u)) & 1u;
  }
  //! Bounds-checked evaluation.
  bool evaluate(std::uint32_t x) const;
  void set(std::uint32_t x, bool v);

  //! Remove variable `var` by fixing it to `value`; higher variables
  //! shift down one slot, preserving their relative order.
  BoolFun cofactor(int var, bool value) const;
  //! Fix every variable in the subcube; free variables are renumbered
  //! in their original order.
  BoolFun restricted(const Subcube& cube) const;

  /*! Substitute inner functions for the variables of `outer`.  Block
   *  order: the variables of inners[0] occupy the lowest positions of
   *  the composite input, inners[1] the next block, and so on.
   */
  static BoolFun compose(const BoolFun& outer, const std::vector<BoolFun>& inners,
                         int arity_cap = kMaxArity);
  //! k-fold iterated composition f^(k); k >= 1.
  static BoolFun iterate(const BoolFun& f, int k, int arity_cap = kMaxArity);

  BoolFun negated() const;
  //! Dual: x -> !f(!x1, ..., !xn).
  BoolFun dual() const;
  //! Rearrange variables: old variable i becomes variable perm[i].
  BoolFun permuted(const std::vector<int>& perm) const;

  bool is_constant() const;
  //! The constant value if the function is constant.
  std::optional<bool> constant_value() const;
  //! The weight profile if the function is symmetric.
  std::optional<SymmetricProfile> symmetric_profile() const;

  //! Number of satisfying assignments.
  std::uint32_t ones_count() const;

  std::string to_hex() const;
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::size_t hash() const;
  bool operator==(const BoolFun&) const = default;

 private:
  explicit BoolFun(int n);
  void check_index(std::uint32_t x) const;

  int arity_;
  std::vector<std::uint64_t> words_;
};

struct BoolFunHash {
  std::size_t operator()(const BoolFun& f) const { return f.hash(); }
};

//! Build the symmetric function with the given profile as a truth table.
BoolFun function_from_profile(const SymmetricProfile& profile);

}  // namespace dtrank
