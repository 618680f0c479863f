#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtrank/boolfun.hpp"
#include "dtrank/catalog.hpp"
#include "dtrank/measures.hpp"

namespace dtrank {

/*! An indexable family of functions.  `at(i)` is a pure function of the
 *  index and the corpus parameters, so a corpus can be partitioned across
 *  workers and re-enumerated deterministically.
 */
class Corpus {
 public:
  //! Every function of the given arity (arity <= 4).
  static Corpus exhaustive(int n);
  //! Every symmetric function of the given arity (arity <= 10).
  static Corpus all_symmetric(int n);
  //! The named families (AND/OR/PARITY/MAJ/THR/TRIBES/...) up to an arity.
  static Corpus catalog(int max_arity);
  //! Reproducible random functions; entry i depends only on (seed, i).
  static Corpus random(int n, std::uint64_t count, std::uint64_t seed);

  std::uint64_t size() const { return size_; }
  BoolFun at(std::uint64_t index) const { return at_(index); }
  const std::string& describe() const { return describe_; }

 private:
  Corpus(std::string describe, std::uint64_t size,
         std::function<BoolFun(std::uint64_t)> at);
  std::string describe_;
  std::uint64_t size_;
  std::function<BoolFun(std::uint64_t)> at_;
};

//! Composition instances for the composed-function checks.
class CompositionCorpus {
 public:
  //! All pairs of non-constant functions, outer of arity a composed with
  //! a uniform inner of arity b.
  static CompositionCorpus exhaustive_pairs(int outer_arity, int inner_arity);
  //! Reproducible random non-constant pairs (uniform inner).
  static CompositionCorpus random_pairs(int outer_arity, int inner_arity,
                                        std::uint64_t count, std::uint64_t seed);
  //! Hand-picked compositions with distinct inner functions per block.
  static CompositionCorpus mixed(int max_arity);

  std::uint64_t size() const { return items_.size(); }
  const Composition& at(std::uint64_t index) const { return items_[index]; }
  const std::string& describe() const { return describe_; }

 private:
  CompositionCorpus(std::string describe, std::vector<Composition> items)
      : describe_(std::move(describe)), items_(std::move(items)) {}
  std::string describe_;
  std::vector<Composition> items_;
};

struct CheckResult {
  std::string check;
  std::string corpus;
  std::uint64_t checked = 0;   // instances the check actually examined
  std::uint64_t failures = 0;
  std::string first_failure;   // counterexample: function (as TT:hex:n) + values
  bool complete = true;        // false when the time budget ran out
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  bool complete() const;
  void append(Report other);
  nlohmann::ordered_json to_json() const;
  std::string table() const;
};

struct SuiteOptions {
  std::vector<std::string> checks;  // empty = every applicable check
  int jobs = 1;
  std::uint64_t budget_ms = 0;  // wall-clock budget; 0 = unlimited
  ExactOptions exact;
  /*! Self-test hook: report rank + 1 to every check.  A healthy suite
   *  must flag at least one failure on any non-trivial corpus.
   */
  bool corrupt_rank = false;
};

//! Names of the per-function checks, in report order.
std::vector<std::string> check_names();
//! Names of the per-composition checks.
std::vector<std::string> composition_check_names();
//! Names of the fixed-instance checks.
std::vector<std::string> named_check_names();

//! Run the per-function checks over a corpus.
Report run_suite(const Corpus& corpus, const SuiteOptions& opts = {});
//! Run the composed-function checks over a composition corpus.
Report run_composition_suite(const CompositionCorpus& corpus,
                             const SuiteOptions& opts = {});
/*! Fixed-instance checks: counterexample confirmations (min-certificate,
 *  average-certificate and certificate-upper-bound lemmas), size-optimal
 *  tribes leaf counts, and iterated-composition rank bounds.  The
 *  16-variable iterated instance only runs when opts.exact.heavy is set.
 */
Report run_named_checks(const SuiteOptions& opts = {});

/*! The batteries-included plan used by the command line: exhaustive +
 *  symmetric + catalog + random corpora, composition corpora, and the
 *  named instances, merged into one report.  Set a corpus field to -1 to
 *  skip that corpus.
 */
struct StandardOptions {
  int exhaustive_n = 3;
  int symmetric_n = 8;
  int catalog_max_arity = 9;
  int random_n = 6;
  std::uint64_t random_count = 40;
  std::uint64_t seed = 1;
  int compose_outer = 2;  // exhaustive_pairs(compose_outer, compose_inner)
  int compose_inner = 2;
  std::uint64_t random_pairs = 25;  // random_pairs(3, 3, ...)
  bool named = true;
  SuiteOptions suite;
};

Report run_standard(const StandardOptions& opts = {});

}  // namespace dtrank
