#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dtrank/boolfun.hpp"
#include "dtrank/catalog.hpp"
#include "dtrank/verify.hpp"

using namespace dtrank;

namespace {

const CheckResult& result_for(const Report& report, const std::string& check) {
  for (const CheckResult& r : report.checks)
    if (r.check == check) return r;
  throw std::out_of_range("no such check in the report: " + check);
}

}  // namespace

TEST_CASE("corpora enumerate deterministically") {
  const Corpus ex = Corpus::exhaustive(3);
  CHECK(ex.size() == 256);
  CHECK(ex.at(0) == BoolFun::constant(3, false));
  CHECK(ex.at(255) == BoolFun::constant(3, true));
  CHECK(ex.at(150) == BoolFun::from_words(3, {150}));

  const Corpus sym = Corpus::all_symmetric(5);
  CHECK(sym.size() == 64);
  for (std::uint64_t i = 0; i < sym.size(); ++i) CHECK(sym.at(i).arity() == 5);

  const Corpus cat = Corpus::catalog(4);
  CHECK(cat.size() > 10);
  for (std::uint64_t i = 0; i < cat.size(); ++i) CHECK(cat.at(i).arity() <= 4);

  const Corpus rnd = Corpus::random(6, 10, 42);
  CHECK(rnd.size() == 10);
  CHECK(rnd.at(3) == rnd.at(3));  // pure in the index
  const Corpus rnd_again = Corpus::random(6, 10, 42);
  CHECK(rnd.at(7) == rnd_again.at(7));
  const Corpus rnd_other = Corpus::random(6, 10, 43);
  bool any_differ = false;
  for (std::uint64_t i = 0; i < rnd.size(); ++i)
    any_differ |= !(rnd.at(i) == rnd_other.at(i));
  CHECK(any_differ);

  CHECK_THROWS_AS(Corpus::exhaustive(5), std::invalid_argument);
}

TEST_CASE("composition corpora cover non-constant pairs") {
  const CompositionCorpus pairs = CompositionCorpus::exhaustive_pairs(2, 2);
  CHECK(pairs.size() == 14 * 14);
  for (std::uint64_t i = 0; i < pairs.size(); ++i) {
    const Composition& c = pairs.at(i);
    CHECK(!c.outer.is_constant());
    CHECK(!c.inners[0].is_constant());
    CHECK(c.build().arity() == 4);
  }

  const CompositionCorpus rnd = CompositionCorpus::random_pairs(3, 3, 5, 11);
  CHECK(rnd.size() == 5);
  const CompositionCorpus rnd_again = CompositionCorpus::random_pairs(3, 3, 5, 11);
  CHECK(rnd.at(2).build() == rnd_again.at(2).build());

  const CompositionCorpus mixed = CompositionCorpus::mixed(9);
  CHECK(mixed.size() > 0);
  for (std::uint64_t i = 0; i < mixed.size(); ++i)
    CHECK(mixed.at(i).build().arity() <= 9);
}

TEST_CASE("every per-function check passes on the exhaustive arity-3 corpus") {
  const Report report = run_suite(Corpus::exhaustive(3));
  CHECK(report.all_passed());
  CHECK(report.complete());
  CHECK(report.checks.size() == check_names().size());
  for (const CheckResult& r : report.checks) {
    CAPTURE(r.check);
    CHECK(r.failures == 0);
    CHECK(r.first_failure.empty());
    // symmetric laws examine the 16 symmetric tables, the rest everything
    const bool symm_only = r.check.rfind("symm_", 0) == 0;
    CHECK(r.checked == (symm_only ? 16u : 256u));
  }
}

TEST_CASE("symmetric and catalog corpora pass") {
  CHECK(run_suite(Corpus::all_symmetric(6)).all_passed());
  CHECK(run_suite(Corpus::catalog(5)).all_passed());
  CHECK(run_suite(Corpus::random(6, 12, 2026)).all_passed());
}

TEST_CASE("the corrupt-rank self-test trips the suite") {
  SuiteOptions opts;
  opts.corrupt_rank = true;
  const Report report = run_suite(Corpus::exhaustive(3), opts);
  CHECK(!report.all_passed());
  const CheckResult& game = result_for(report, "game_rank");
  CHECK(game.failures > 0);
  CHECK(!game.first_failure.empty());
  CHECK(game.first_failure.find("TT:") == 0);

  SuiteOptions copts;
  copts.corrupt_rank = true;
  CHECK(!run_composition_suite(CompositionCorpus::exhaustive_pairs(2, 2), copts)
             .all_passed());
  CHECK(!run_named_checks(copts).all_passed());
}

TEST_CASE("a single-check selection runs only that check") {
  SuiteOptions opts;
  opts.checks = {"cert_sandwich"};
  const Report report = run_suite(Corpus::exhaustive(2), opts);
  CHECK(report.checks.size() == 1);
  CHECK(report.checks[0].check == "cert_sandwich");
  CHECK(report.all_passed());

  SuiteOptions bad;
  bad.checks = {"no_such_check"};
  CHECK_THROWS_AS(run_suite(Corpus::exhaustive(2), bad), std::invalid_argument);
}

TEST_CASE("parallel execution reports identical results") {
  SuiteOptions serial;
  serial.jobs = 1;
  SuiteOptions parallel;
  parallel.jobs = 2;
  const Report a = run_suite(Corpus::exhaustive(3), serial);
  const Report b = run_suite(Corpus::exhaustive(3), parallel);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].check == b.checks[i].check);
    CHECK(a.checks[i].checked == b.checks[i].checked);
    CHECK(a.checks[i].failures == b.checks[i].failures);
    CHECK(a.checks[i].first_failure == b.checks[i].first_failure);
  }
}

TEST_CASE("an exhausted budget is reported as incomplete") {
  SuiteOptions opts;
  opts.budget_ms = 1;
  const Report report = run_suite(Corpus::random(10, 5000, 7), opts);
  CHECK(!report.complete());
  CHECK(report.all_passed());  // nothing examined may fail
}

TEST_CASE("composition checks pass on the exhaustive pair corpus") {
  const Report report =
      run_composition_suite(CompositionCorpus::exhaustive_pairs(2, 2));
  CHECK(report.all_passed());
  CHECK(report.complete());
  CHECK(report.checks.size() == composition_check_names().size());
  for (const CheckResult& r : report.checks) CHECK(r.checked == 196);

  CHECK(run_composition_suite(CompositionCorpus::mixed(9)).all_passed());
}

TEST_CASE("named fixed-instance checks pass") {
  const Report report = run_named_checks();
  CHECK(report.all_passed());
  CHECK(report.complete());
  CHECK(report.checks.size() == named_check_names().size());
}

TEST_CASE("reports merge, serialize and tabulate") {
  Report report = run_suite(Corpus::exhaustive(2));
  const std::size_t base = report.checks.size();
  report.append(run_named_checks());
  CHECK(report.checks.size() == base + named_check_names().size());

  const nlohmann::ordered_json j = report.to_json();
  CHECK(j["all_passed"] == true);
  CHECK(j["complete"] == true);
  CHECK(j["checks"].size() == report.checks.size());
  CHECK(j["checks"][0].contains("corpus"));

  const std::string table = report.table();
  CHECK(table.find("cert_sandwich") != std::string::npos);
  CHECK(table.find("ok") != std::string::npos);
  CHECK(table.find("FAIL") == std::string::npos);
}

TEST_CASE("the standard plan composes all corpora") {
  StandardOptions opts;
  opts.exhaustive_n = 2;
  opts.symmetric_n = 4;
  opts.catalog_max_arity = 4;
  opts.random_n = 5;
  opts.random_count = 6;
  opts.random_pairs = 3;
  const Report report = run_standard(opts);
  CHECK(report.all_passed());
  CHECK(report.complete());
  std::set<std::string> corpora;
  for (const CheckResult& r : report.checks) corpora.insert(r.corpus);
  CHECK(corpora.size() >= 6);
}
