#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtrank/boolfun.hpp"
#include "dtrank/dtree.hpp"

namespace dtrank {

/*! Knobs for the exact branch-and-memoize searches.  The default cap of
 *  14 variables keeps memory modest; the 16-variable runs are opt-in via
 *  `heavy`.  `memo_limit` bounds the number of memoized states (0 means
 *  unlimited; beyond the limit states are recomputed, not stored).
 *  `progress`, when set, is invoked with the number of states solved so
 *  far roughly every 64k states, and once more with the final count when
 *  a search completes.
 */
struct ExactOptions {
  int cap = 14;
  bool heavy = false;
  std::uint64_t memo_limit = 0;
  std::function<void(std::uint64_t)> progress;

  int effective_cap() const { return heavy ? kMaxArity : cap; }
};

struct RankResult {
  int value = 0;
  DTree witness;
};
struct SizeResult {
  long long value = 1;
  DTree witness;
};
struct WeightedResult {
  long long value = 0;
  DTree witness;
};

/*! Minimum decision-tree rank over all trees computing f, with an
 *  optimal tree.  Witness tie-breaks are deterministic: the smallest
 *  variable index achieving the optimum is queried, 0-branch first.
 */
RankResult opt_rank(const BoolFun& f, const ExactOptions& opts = {});
//! Minimum decision-tree depth with witness (same tie-breaks).
RankResult opt_depth(const BoolFun& f, const ExactOptions& opts = {});
//! Minimum number of leaves with witness (same tie-breaks).
SizeResult opt_size(const BoolFun& f, const ExactOptions& opts = {});
//! Minimum weighted depth: querying x_{i+1} costs weights[i] >= 0.
WeightedResult opt_weighted_depth(const BoolFun& f, const std::vector<int>& weights,
                                  const ExactOptions& opts = {});

/*! Constancy of f on every one of the 3^n subcubes, plus the per-input
 *  minimum certificate sizes derived from it.  Storage is one byte of
 *  flags plus two bytes of DP values per subcube.
 */
class SubcubeTable {
 public:
  SubcubeTable(const BoolFun& f, const ExactOptions& opts = {});

  int arity() const { return n_; }
  bool constant_on(const Subcube& cube) const;
  std::optional<bool> constant_value_on(const Subcube& cube) const;
  //! Smallest |S| such that f is constant on (S, x|S).
  int cert_at(std::uint32_t x) const;
  //! Smallest codimension of any constant subcube, with a witness
  //! (ties: smallest support mask, then smallest values mask).
  std::pair<int, Subcube> min_constant_codim() const;

 private:
  std::size_t index_of(const Subcube& cube) const;
  int n_;
  std::vector<std::uint8_t> flags_;  // bit0: constant 0, bit1: constant 1
  std::vector<std::uint8_t> cert_;   // min codim of a constant coarsening
  std::vector<std::size_t> pow3_;
};

//! Certificate complexity of f at input x (size of a smallest certificate).
int cert_at(const BoolFun& f, std::uint32_t x, const ExactOptions& opts = {});

struct CertStats {
  int c0 = 0;     // max over 0-inputs
  int c1 = 0;     // max over 1-inputs
  int c = 0;      // max over all inputs
  int c_min = 0;  // min over all inputs
  Rational c_avg{0, 1};
};
CertStats certificates(const BoolFun& f, const ExactOptions& opts = {});

struct KillResult {
  int value = 0;
  Subcube witness;
};
//! Minimum number of variables that must be fixed to make f constant.
KillResult kill_number(const BoolFun& f, const ExactOptions& opts = {});

//! Length of the longest constant run of the profile, minus one.
int gap(const SymmetricProfile& profile);
//! Length of the shortest (maximal) constant run, minus one.
int gap_min(const SymmetricProfile& profile);

struct MeasureReport {
  int arity = 0;
  std::string hex;
  int rank = 0;
  int depth = 0;
  long long size = 1;
  std::optional<long long> weighted_depth;
  std::optional<std::vector<int>> weights;
  CertStats cert;
  int kill = 0;
  long long spar = 0;
  long long spar_tilde = 0;
  std::optional<int> gap;       // symmetric functions only
  std::optional<int> gap_min;   // symmetric functions only
  DTree rank_witness;
  DTree depth_witness;
  DTree size_witness;
};

MeasureReport measure_report(const BoolFun& f,
                             const std::optional<std::vector<int>>& weights = std::nullopt,
                             const ExactOptions& opts = {});
//! Stable-key-order JSON rendering; rationals appear as "p/q" strings.
nlohmann::ordered_json report_to_json(const MeasureReport& report);

}  // namespace dtrank
