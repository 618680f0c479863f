// Acceptance gate: ten end-to-end criteria, one [PASS]/[FAIL] line each.
// Each criterion owns a wall-clock budget that is part of its pass
// condition.  --heavy additionally runs the 16-variable iterated-rank
// instances (criteria 5b/9c, shared computation, budget 30 min).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtrank/boolfun.hpp"
#include "dtrank/catalog.hpp"
#include "dtrank/constructions.hpp"
#include "dtrank/dtree.hpp"
#include "dtrank/fourier.hpp"
#include "dtrank/games.hpp"
#include "dtrank/measures.hpp"
#include "dtrank/verify.hpp"

namespace {

using namespace dtrank;
using Clock = std::chrono::steady_clock;

int failures = 0;
bool heavy_mode = false;

//! Exact rank of the 16-variable heavy instance, shared by 5b and 9c.
std::optional<int> heavy_rank;
std::optional<BoolFun> heavy_fn;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void run(const std::string& label, double budget_s,
         const std::function<bool(std::string&)>& body) {
  const auto start = Clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed = seconds_since(start);
  const bool in_budget = elapsed < budget_s;
  const bool pass = ok && in_budget;
  if (!pass) ++failures;
  std::printf("[%s] %-38s %7.2fs (budget %.0fs)%s%s\n", pass ? "PASS" : "FAIL",
              label.c_str(), elapsed, budget_s,
              detail.empty() ? "" : "  ", detail.c_str());
  if (ok && !in_budget) std::printf("       over budget\n");
  std::fflush(stdout);
}

bool expect(std::string& detail, bool cond, const std::string& message) {
  if (!cond && detail.empty()) detail = message;
  return cond;
}

//! Leaves of a tree carrying the given value.
long long leaves_with(const DTree& tree, bool value) {
  std::function<long long(const DNodePtr&)> walk = [&](const DNodePtr& node) -> long long {
    if (node->is_leaf()) return node->leaf_value == value ? 1 : 0;
    return walk(node->lo) + walk(node->hi);
  };
  return walk(tree.root());
}

//! Smallest d with (3/2)^d >= s^2 (the balancing budget), exactly.
int conj_budget(long long s) {
  unsigned __int128 pow3 = 1;
  const unsigned __int128 target = static_cast<unsigned __int128>(s) * s;
  int d = 0;
  while (pow3 < (target << d)) {
    pow3 *= 3;
    ++d;
  }
  return d;
}

// 1. Table 1 reproduction for n in 2..8 (THR swept over every k).
bool criterion1(std::string& detail) {
  for (int n = 2; n <= 8; ++n) {
    for (const ClosedFormRow& row : closed_form_rows(n)) {
      const BoolFun f = row.expression.empty()
                            ? BoolFun::constant(n, row.name == "CONST_1")
                            : parse_function(row.expression);
      const CertStats cs = certificates(f);
      const auto profile = f.symmetric_profile();
      if (!expect(detail, profile.has_value(), row.name + ": not symmetric")) return false;
      const std::string where = "n=" + std::to_string(n) + " " + row.name;
      if (!expect(detail, opt_depth(f).value == row.depth, where + ": depth")) return false;
      if (!expect(detail, cs.c0 == row.c0 && cs.c1 == row.c1 && cs.c == row.c,
                  where + ": certificates"))
        return false;
      if (!expect(detail, gap(*profile) == row.gap, where + ": gap")) return false;
      if (!expect(detail, opt_rank(f).value == row.rank, where + ": rank")) return false;
    }
  }
  return true;
}

// 2. Full verify suite over all 65,536 functions of arity 4.
bool criterion2(std::string& detail) {
  const Report report = run_suite(Corpus::exhaustive(4));
  if (!expect(detail, report.complete(), "suite incomplete")) return false;
  for (const CheckResult& r : report.checks)
    if (!expect(detail, r.failures == 0, r.check + ": " + r.first_failure)) return false;
  return true;
}

// 3. Named exact ranks (9-variable DPs).
bool criterion3(std::string& detail) {
  const auto check_rank = [&](const char* name, const BoolFun& f, int want) {
    const int got = opt_rank(f).value;
    return expect(detail, got == want,
                  std::string(name) + ": rank " + std::to_string(got) + " != " +
                      std::to_string(want));
  };
  if (!check_rank("TRIBES(3,3)", catalog::tribes(3, 3), 3)) return false;
  if (!check_rank("TRIBES_D(3,3)", catalog::tribes_dual(3, 3), 3)) return false;
  if (!check_rank("TRIBES_D(2,3)", catalog::tribes_dual(2, 3), 2)) return false;
  if (!check_rank("AND_2 o PARITY_2", parse_function("COMPOSE(AND:2;PARITY:2,PARITY:2)"),
                  3))
    return false;
  if (!check_rank("AND_3 o PARITY_3",
                  parse_function("COMPOSE(AND:3;PARITY:3,PARITY:3,PARITY:3)"), 7))
    return false;
  return true;
}

// 4. Composition sandwich: exhaustive 2x2 pairs plus 50 random 3x3 pairs.
bool criterion4(std::string& detail) {
  const CompositionCorpus pairs = CompositionCorpus::exhaustive_pairs(2, 2);
  if (!expect(detail, pairs.size() == 196, "expected 196 pairs")) return false;
  for (std::uint64_t i = 0; i < pairs.size(); ++i) {
    const Composition& c = pairs.at(i);
    const BoolFun fg = c.build();
    const int df = opt_depth(c.outer).value;
    const int rg = opt_rank(c.inners[0]).value;
    const int rank_fg = opt_rank(fg).value;
    const std::string where = "pair " + std::to_string(i);
    if (!expect(detail, df * (rg - 1) + 1 <= rank_fg, where + ": lower bound")) return false;
    if (!expect(detail, rank_fg <= df * rg, where + ": upper bound")) return false;
    if (!expect(detail,
                opt_depth(fg).value == df * opt_depth(c.inners[0]).value,
                where + ": depth product"))
      return false;
  }
  const Report report =
      run_composition_suite(CompositionCorpus::random_pairs(3, 3, 50, 1));
  for (const CheckResult& r : report.checks)
    if (!expect(detail, r.failures == 0 && r.complete, r.check + ": " + r.first_failure))
      return false;
  return true;
}

// 5. Iterated rank: MAJ_3 squared in [4,6]; heavy: (AND_2 o OR_2) squared.
bool criterion5(std::string& detail) {
  const int r = opt_rank(BoolFun::iterate(catalog::majority(3), 2)).value;
  std::printf("       Rank(MAJ_3 iterated twice) = %d\n", r);
  if (!expect(detail, r >= 4 && r <= 6, "rank " + std::to_string(r) + " outside [4,6]"))
    return false;
  return true;
}

bool criterion5_heavy(std::string& detail) {
  heavy_fn = BoolFun::iterate(parse_function("COMPOSE(AND:2;OR:2,OR:2)"), 2);
  ExactOptions opts;
  opts.heavy = true;
  opts.memo_limit = 60'000'000;  // soft cap on memoized states
  opts.progress = [](std::uint64_t solved) {
    std::printf("       ... %llu states\n", static_cast<unsigned long long>(solved));
    std::fflush(stdout);
  };
  const int r = opt_rank(*heavy_fn, opts).value;
  heavy_rank = r;
  std::printf("       Rank((AND_2 o OR_2) iterated twice) = %d\n", r);
  if (!expect(detail, r == 6, "rank " + std::to_string(r) + " != 6")) return false;
  if (!expect(detail, r >= 5, "rank below the iterated lower bound 5")) return false;
  return true;
}

// 6. Size-optimal tribes witnesses have the required leaf counts.
bool criterion6(std::string& detail) {
  const std::vector<std::pair<int, int>> shapes = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  for (const auto& [n, m] : shapes) {
    const BoolFun f = catalog::tribes_dual(n, m);
    const SizeResult res = opt_size(f);
    const std::string where =
        "TRIBES_D(" + std::to_string(n) + "," + std::to_string(m) + ")";
    if (!expect(detail, res.witness.computes(f), where + ": witness broken")) return false;
    long long want_ones = 1;
    for (int i = 0; i < n; ++i) want_ones *= m;
    if (!expect(detail, leaves_with(res.witness, true) >= want_ones,
                where + ": too few 1-leaves"))
      return false;
    if (!expect(detail, leaves_with(res.witness, false) >= n, where + ": too few 0-leaves"))
      return false;
  }
  const long long s22 = opt_size(catalog::tribes_dual(2, 2)).value;
  std::printf("       DTSize(TRIBES_D(2,2)) = %lld\n", s22);
  return expect(detail, s22 >= 6, "DTSize(TRIBES_D(2,2)) below 6");
}

// 7. Construction guarantees over the exhaustive arity-4 corpus.
bool criterion7(std::string& detail) {
  for (std::uint64_t t = 0; t < (1ull << 16); ++t) {
    const BoolFun f = BoolFun::from_words(4, {t});
    const std::string where = "table " + std::to_string(t);
    if (!f.is_constant()) {
      const CertStats cs = certificates(f);
      const DTree ct = cert_tree(f);
      if (!expect(detail, ct.computes(f), where + ": cert_tree broken")) return false;
      if (!expect(detail, ct.rank() <= (cs.c0 - 1) * (cs.c1 - 1) + 1,
                  where + ": cert_tree rank bound"))
        return false;
      const DTree st = sparsity_tree(f);
      const int rank = opt_rank(f).value;
      if (!expect(detail, st.computes(f), where + ": sparsity_tree broken")) return false;
      if (!expect(detail,
                  st.depth() <= rank * (1.0 + std::log2(double(wht(f).spar()))) + 1e-9,
                  where + ": sparsity_tree depth bound"))
        return false;
    }
    const DTree size_tree = opt_size(f).witness;
    const ConjTree conj = conj_from_simple(size_tree);
    if (!expect(detail, conj.computes(f), where + ": conj tree broken")) return false;
    if (!expect(detail, conj.depth() <= conj_budget(size_tree.size()),
                where + ": conj depth bound"))
      return false;
    const DTree expanded = simple_from_conj(conj);
    if (!expect(detail, expanded.computes(f), where + ": expanded tree broken"))
      return false;
    if (!expect(detail, expanded.rank() <= conj.depth(), where + ": expanded rank bound"))
      return false;
  }
  return true;
}

// 8. Strategy guarantees from the game section.
bool criterion8(std::string& detail) {
  for (int n = 2; n <= 3; ++n) {
    auto prover = make_tribes_prover({n, n}, false);
    auto delayer = make_tribes_delayer({n, n}, false);
    const int score = play(catalog::tribes(n, n), *prover, *delayer).score;
    if (!expect(detail, score == n,
                "tribes " + std::to_string(n) + "x" + std::to_string(n) + ": score " +
                    std::to_string(score)))
      return false;
  }
  const std::vector<std::pair<int, int>> shapes = {{2, 2}, {2, 3}};
  for (const auto& [n, m] : shapes) {
    const BoolFun f = BoolFun::compose(catalog::and_fn(n),
                                       std::vector<BoolFun>(n, catalog::parity(m)));
    auto prover = make_andparity_prover({n, m});
    auto delayer = make_andparity_delayer({n, m});
    const int score = play(f, *prover, *delayer).score;
    if (!expect(detail, score == n * (m - 1) + 1,
                "andparity " + std::to_string(n) + "x" + std::to_string(m) + ": score " +
                    std::to_string(score)))
      return false;
  }
  for (std::uint64_t t = 1; t < (1ull << 16) - 1; t += 7) {
    const BoolFun f = BoolFun::from_words(4, {t});
    if (f.is_constant()) continue;
    const CertStats cs = certificates(f);
    auto prover = make_cert_prover();
    auto delayer = make_optimal_delayer();
    const int score = play(f, *prover, *delayer).score;
    if (!expect(detail, score <= (cs.c0 - 1) * (cs.c1 - 1) + 1,
                "cert prover exceeded budget on table " + std::to_string(t)))
      return false;
  }
  auto asym_prover = make_asym_optimal_prover();
  auto asym_delayer = make_asym_tribes_delayer({3, 3}, true);
  const Transcript tr = play_asym(catalog::tribes_dual(3, 3), *asym_prover, *asym_delayer);
  // n * log2(n) points = log2(n^n) = log2 27
  return expect(detail, !tr.infinite && tr.product >= Rational(27),
                "asym tribes product below 27");
}

// 9. Counterexample lemmas, exact rational values.
bool criterion9(std::string& detail) {
  const Rational avg_and3 = certificates(catalog::and_fn(3)).c_avg;
  if (!expect(detail, avg_and3 == Rational(5, 4),
              "C_avg(AND_3) = " + rational_string(avg_and3)))
    return false;
  const Rational avg_tribes = certificates(catalog::tribes_dual(3, 2)).c_avg;
  if (!expect(detail, avg_tribes == Rational(155, 64),
              "C_avg(TRIBES_D(3,2)) = " + rational_string(avg_tribes)))
    return false;
  if (!expect(detail, avg_tribes < Rational(3) &&
                          opt_rank(catalog::tribes_dual(3, 2)).value == 3,
              "C_avg(TRIBES_D(3,2)) does not undercut the rank"))
    return false;
  return true;
}

bool criterion9_heavy(std::string& detail) {
  if (!heavy_fn || !heavy_rank) {
    detail = "criterion 5 heavy stage did not run";
    return false;
  }
  ExactOptions opts;
  opts.heavy = true;
  const CertStats cs = certificates(*heavy_fn, opts);
  if (!expect(detail, cs.c0 == 4 && cs.c1 == 4,
              "certificates C0=" + std::to_string(cs.c0) + " C1=" + std::to_string(cs.c1)))
    return false;
  // Rank >= C^2/4 + 1 = 5 while C = 4: certificates cannot upper-bound rank.
  return expect(detail, *heavy_rank >= cs.c * cs.c / 4 + 1,
                "rank " + std::to_string(*heavy_rank) + " below C^2/4 + 1");
}

// 10. Symmetric characterizations over all 2^11 profiles at n = 10.
bool criterion10(std::string& detail) {
  const int n = 10;
  for (std::uint32_t bits = 0; bits < (1u << (n + 1)); ++bits) {
    SymmetricProfile profile;
    profile.values.resize(n + 1);
    for (int w = 0; w <= n; ++w) profile.values[w] = (bits >> w) & 1;
    const BoolFun f = function_from_profile(profile);
    const std::string where = "profile " + std::to_string(bits);
    if (!expect(detail, opt_rank(f).value == n - gap(profile), where + ": rank"))
      return false;
    if (!expect(detail, certificates(f).c == n - gap_min(profile), where + ": C"))
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--heavy") == 0) heavy_mode = true;

  run("1  table-1 closed forms (n=2..8)", 10, criterion1);
  run("2  exhaustive arity-4 verify suite", 600, criterion2);
  run("3  named exact ranks", 120, criterion3);
  run("4  composition sandwich", 600, criterion4);
  run("5  iterated rank MAJ_3^(2)", 600, criterion5);
  if (heavy_mode) run("5b iterated rank (AND o OR)^(2), 16 vars", 1800, criterion5_heavy);
  run("6  tribes size witnesses", 600, criterion6);
  run("7  constructions, exhaustive arity 4", 600, criterion7);
  run("8  game strategy guarantees", 600, criterion8);
  run("9  counterexample lemmas", 60, criterion9);
  if (heavy_mode) run("9c heavy certificates vs rank", 1800, criterion9_heavy);
  run("10 symmetric laws at n=10", 300, criterion10);

  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
