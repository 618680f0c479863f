#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <utility>

#include <nlohmann/json.hpp>

#include "dtrank/boolfun.hpp"
#include "dtrank/catalog.hpp"
#include "dtrank/games.hpp"
#include "dtrank/measures.hpp"
#include "oracles.hpp"

using namespace dtrank;

namespace {

class DeferDelayer final : public DelayerStrategy {
 public:
  std::string name() const override { return "defer_delayer"; }
  Response respond(const GameState&, int) override { return Response::kDefer; }
};

class ZeroDelayer final : public DelayerStrategy {
 public:
  std::string name() const override { return "zero_delayer"; }
  Response respond(const GameState&, int) override { return Response::kZero; }
};

class FirstFreeProver final : public ProverStrategy {
 public:
  std::string name() const override { return "first_free_prover"; }
  int next_query(const GameState& state) override { return state.var_map[0]; }
  bool choose(const GameState&, int) override { return false; }
};

class StuckProver final : public ProverStrategy {
 public:
  std::string name() const override { return "stuck_prover"; }
  int next_query(const GameState&) override { return 0; }  // ignores fixed vars
  bool choose(const GameState&, int) override { return false; }
};

class WildProver final : public ProverStrategy {
 public:
  std::string name() const override { return "wild_prover"; }
  int next_query(const GameState& state) override { return state.original.arity(); }
  bool choose(const GameState&, int) override { return false; }
};

class BadAsymDelayer final : public AsymDelayerStrategy {
 public:
  std::string name() const override { return "bad_asym_delayer"; }
  std::pair<Rational, Rational> respond(const GameState&, int) override {
    return {Rational(1), Rational(1)};  // sums to 2
  }
};

BoolFun and_of_parities(int rows, int cols) {
  return BoolFun::compose(catalog::and_fn(rows),
                          std::vector<BoolFun>(rows, catalog::parity(cols)));
}

}  // namespace

TEST_CASE("game value is rank, computed independently") {
  for (std::uint64_t t = 0; t < 256; ++t) {
    const BoolFun f = BoolFun::from_words(3, {t});
    CAPTURE(t);
    CHECK(game_value(f) == oracle::rank(oracle::table_of(f)));
  }
  for (std::uint64_t t = 5; t < (1ull << 16); t += 997) {
    const BoolFun f = BoolFun::from_words(4, {t});
    CAPTURE(t);
    CHECK(game_value(f) == opt_rank(f).value);
  }
  CHECK(game_value(catalog::tribes(2, 2)) == 2);
}

TEST_CASE("asymmetric game value is tree size, computed independently") {
  for (std::uint64_t t = 0; t < 256; ++t) {
    const BoolFun f = BoolFun::from_words(3, {t});
    CAPTURE(t);
    CHECK(asym_game_value(f) == oracle::size(oracle::table_of(f)));
  }
  for (std::uint64_t t = 7; t < (1ull << 16); t += 1733) {
    const BoolFun f = BoolFun::from_words(4, {t});
    CAPTURE(t);
    CHECK(asym_game_value(f) == opt_size(f).value);
  }
  CHECK(asym_game_value(catalog::parity(4)) == 16);
}

TEST_CASE("optimal against optimal realizes the game value") {
  for (std::uint64_t t = 0; t < 256; t += 2) {
    const BoolFun f = BoolFun::from_words(3, {t});
    auto prover = make_optimal_prover();
    auto delayer = make_optimal_delayer();
    const Transcript tr = play(f, *prover, *delayer);
    CAPTURE(t);
    CHECK(tr.score == opt_rank(f).value);
    CHECK(!tr.asym);
    CHECK(tr.arity == 3);
  }
}

TEST_CASE("optimal prover caps any delayer, optimal delayer resists any prover") {
  for (std::uint64_t t = 1; t < 256; t += 5) {
    const BoolFun f = BoolFun::from_words(3, {t});
    const int r = opt_rank(f).value;
    CAPTURE(t);

    auto prover = make_optimal_prover();
    DeferDelayer defer;
    CHECK(play(f, *prover, defer).score <= r);

    auto prover2 = make_optimal_prover();
    ZeroDelayer zero;
    CHECK(play(f, *prover2, zero).score <= r);

    FirstFreeProver naive;
    auto delayer = make_optimal_delayer();
    CHECK(play(f, naive, *delayer).score >= r);
  }
}

TEST_CASE("games on constants end before the first round") {
  auto prover = make_optimal_prover();
  auto delayer = make_optimal_delayer();
  const Transcript tr = play(BoolFun::constant(2, true), *prover, *delayer);
  CHECK(tr.rounds.empty());
  CHECK(tr.score == 0);
  CHECK(tr.final_value);

  auto ap = make_asym_optimal_prover();
  auto ad = make_asym_optimal_delayer();
  const Transcript atr = play_asym(BoolFun::constant(3, false), *ap, *ad);
  CHECK(atr.rounds.empty());
  CHECK(atr.product == Rational(1));
  CHECK(!atr.final_value);
}

TEST_CASE("rule violations raise strategy faults") {
  StuckProver stuck;
  DeferDelayer defer;
  CHECK_THROWS_AS(play(catalog::parity(2), stuck, defer), StrategyFault);

  WildProver wild;
  DeferDelayer defer2;
  CHECK_THROWS_AS(play(catalog::parity(2), wild, defer2), StrategyFault);

  auto ap = make_asym_optimal_prover();
  BadAsymDelayer bad;
  CHECK_THROWS_AS(play_asym(catalog::and_fn(2), *ap, bad), StrategyFault);
  try {
    auto ap2 = make_asym_optimal_prover();
    BadAsymDelayer bad2;
    play_asym(catalog::and_fn(2), *ap2, bad2);
    FAIL("expected a StrategyFault");
  } catch (const StrategyFault& fault) {
    CHECK(fault.offender() == "bad_asym_delayer");
  }
}

TEST_CASE("tribes strategies pin the score at the number of rows") {
  for (int n = 2; n <= 3; ++n) {
    const BlockShape shape{n, n};
    CAPTURE(n);

    const BoolFun tribes = catalog::tribes(n, n);
    auto prover = make_tribes_prover(shape, false);
    auto delayer = make_tribes_delayer(shape, false);
    CHECK(play(tribes, *prover, *delayer).score == n);

    const BoolFun dual = catalog::tribes_dual(n, n);
    auto dual_prover = make_tribes_prover(shape, true);
    auto dual_delayer = make_tribes_delayer(shape, true);
    CHECK(play(dual, *dual_prover, *dual_delayer).score == n);

    // each side already plays optimally against the exact opponent
    auto opt_prover = make_optimal_prover();
    auto delayer2 = make_tribes_delayer(shape, false);
    CHECK(play(tribes, *opt_prover, *delayer2).score == n);

    auto prover2 = make_tribes_prover(shape, false);
    auto opt_delayer = make_optimal_delayer();
    CHECK(play(tribes, *prover2, *opt_delayer).score == n);

    auto prover3 = make_tribes_prover(shape, false);
    DeferDelayer defer;
    CHECK(play(tribes, *prover3, defer).score <= n);
  }
}

TEST_CASE("and-of-parities strategies pin n(m-1)+1") {
  const std::vector<BlockShape> shapes = {{2, 2}, {2, 3}};
  for (const BlockShape shape : shapes) {
    const BoolFun f = and_of_parities(shape.rows, shape.cols);
    const int target = shape.rows * (shape.cols - 1) + 1;
    CAPTURE(shape.rows);
    CAPTURE(shape.cols);

    auto prover = make_andparity_prover(shape);
    auto delayer = make_andparity_delayer(shape);
    CHECK(play(f, *prover, *delayer).score == target);

    CHECK(opt_rank(f).value == target);

    auto prover2 = make_andparity_prover(shape);
    auto opt_delayer = make_optimal_delayer();
    CHECK(play(f, *prover2, *opt_delayer).score == target);
  }
}

TEST_CASE("certificate prover respects the certificate budget") {
  for (std::uint64_t t = 1; t < 255; t += 2) {
    const BoolFun f = BoolFun::from_words(3, {t});
    const CertStats cs = certificates(f);
    const int budget = (cs.c0 - 1) * (cs.c1 - 1) + 1;
    CAPTURE(t);

    auto prover = make_cert_prover();
    auto delayer = make_optimal_delayer();
    CHECK(play(f, *prover, *delayer).score <= budget);

    auto prover2 = make_cert_prover();
    DeferDelayer defer;
    CHECK(play(f, *prover2, defer).score <= budget);
  }
}

TEST_CASE("compose prover stays within depth times inner rank") {
  const BoolFun outer = catalog::and_fn(2);
  const std::vector<BoolFun> inners(2, catalog::parity(2));
  const BoolFun f = BoolFun::compose(outer, inners);

  auto prover = make_compose_prover(outer, inners);
  auto delayer = make_compose_delayer();
  const Transcript tr = play(f, *prover, *delayer);
  CHECK(tr.score >= opt_rank(f).value);  // the delayer is rank-optimal
  CHECK(tr.score <= opt_depth(outer).value * opt_rank(inners[0]).value);
  CHECK(opt_rank(f).value == 3);

  const BoolFun mouter = catalog::majority(3);
  const std::vector<BoolFun> minners(3, catalog::or_fn(2));
  const BoolFun mf = BoolFun::compose(mouter, minners);
  auto mprover = make_compose_prover(mouter, minners);
  auto mdelayer = make_compose_delayer();
  const Transcript mtr = play(mf, *mprover, *mdelayer);
  CHECK(mtr.score >= opt_rank(mf).value);
  CHECK(mtr.score <= opt_depth(mouter).value * opt_rank(minners[0]).value);

  CHECK_THROWS_AS(make_compose_prover(outer, {catalog::parity(2)}),
                  std::invalid_argument);
}

TEST_CASE("asymmetric optimal play telescopes to the tree size") {
  for (std::uint64_t t = 0; t < 256; t += 3) {
    const BoolFun f = BoolFun::from_words(3, {t});
    auto prover = make_asym_optimal_prover();
    auto delayer = make_asym_optimal_delayer();
    const Transcript tr = play_asym(f, *prover, *delayer);
    CAPTURE(t);
    CHECK(tr.asym);
    CHECK(!tr.infinite);
    CHECK(tr.product == Rational(opt_size(f).value));
  }
}

TEST_CASE("asym tribes delayer forces a large product on the dual tribes") {
  const BoolFun f = catalog::tribes_dual(3, 3);
  auto prover = make_asym_optimal_prover();
  auto delayer = make_asym_tribes_delayer(BlockShape{3, 3}, true);
  const Transcript tr = play_asym(f, *prover, *delayer);
  CHECK(!tr.infinite);
  CHECK(tr.product >= Rational(27));
}

TEST_CASE("transcripts serialize and pretty-print") {
  auto prover = make_optimal_prover();
  auto delayer = make_optimal_delayer();
  const Transcript tr = play(catalog::majority(3), *prover, *delayer);
  const nlohmann::ordered_json j = tr.to_json();
  CHECK(j["asym"] == false);
  CHECK(j["rounds"].size() == tr.rounds.size());
  CHECK(j["score"] == tr.score);
  CHECK(!tr.pretty().empty());

  auto ap = make_asym_optimal_prover();
  auto ad = make_asym_optimal_delayer();
  const Transcript atr = play_asym(catalog::or_fn(2), *ap, *ad);
  const nlohmann::ordered_json aj = atr.to_json();
  CHECK(aj["asym"] == true);
  CHECK(aj["score"]["product"] == "3/1");
  CHECK(aj["score"]["infinite"] == false);
  CHECK(atr.log2_score() == doctest::Approx(std::log2(3.0)));
}
