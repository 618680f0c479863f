#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtrank/boolfun.hpp"
#include "dtrank/catalog.hpp"
#include "dtrank/measures.hpp"

namespace dtrank {

//! Delayer's reply in the symmetric game.
enum class Response { kZero, kOne, kDefer };

/*! Shared view of a game in progress.  Strategies receive the state on
 *  every call and must treat it as read-only; variables are always named
 *  in the coordinates of the original function.
 */
struct GameState {
  BoolFun original;
  Subcube fixed;             // assignments so far, original coordinates
  BoolFun current;           // restriction of `original` to the free variables
  std::vector<int> var_map;  // index into `current` -> original variable
  int round = 0;
  int points = 0;        // symmetric score so far
  Rational product{1};   // asymmetric score so far, as a product of 1/p_b
  bool infinite = false; // asymmetric: some chosen value had p_b = 0

  bool is_free(int var) const { return ((fixed.support >> var) & 1u) == 0; }
  //! Position of an original variable inside `current`, or -1 when fixed.
  int local_index(int var) const;
};

/*! Strategy interfaces.  A strategy may keep per-game state (the cert
 *  prover does); instantiate a fresh object for every game.  Queries must
 *  name free variables, otherwise the engine throws StrategyFault.
 */
class ProverStrategy {
 public:
  virtual ~ProverStrategy() = default;
  virtual std::string name() const = 0;
  virtual int next_query(const GameState& state) = 0;
  //! Value assigned to `var` after the delayer defers.
  virtual bool choose(const GameState& state, int var) = 0;
};

class DelayerStrategy {
 public:
  virtual ~DelayerStrategy() = default;
  virtual std::string name() const = 0;
  virtual Response respond(const GameState& state, int var) = 0;
};

class AsymProverStrategy {
 public:
  virtual ~AsymProverStrategy() = default;
  virtual std::string name() const = 0;
  virtual int next_query(const GameState& state) = 0;
  //! Value assigned to `var` given the delayer's announced distribution.
  virtual bool pick(const GameState& state, int var, const Rational& p0,
                    const Rational& p1) = 0;
};

class AsymDelayerStrategy {
 public:
  virtual ~AsymDelayerStrategy() = default;
  virtual std::string name() const = 0;
  //! Announce (p0, p1); both must be >= 0 and sum to exactly 1.
  virtual std::pair<Rational, Rational> respond(const GameState& state, int var) = 0;
};

struct GameRound {
  int var = 0;  // original coordinates, 0-based
  Response response = Response::kDefer;  // symmetric games only
  Rational p0{0}, p1{0};                 // asymmetric games only
  bool chosen = false;                   // value finally assigned
  int points = 0;                        // symmetric: 1 on a defer
  Rational factor{1};                    // asymmetric: 1/p_chosen
  bool infinite = false;                 // asymmetric: p_chosen was 0
};

struct Transcript {
  bool asym = false;
  int arity = 0;
  std::vector<GameRound> rounds;
  int score = 0;        // symmetric: number of defers
  Rational product{1};  // asymmetric: product of round factors
  bool infinite = false;
  bool final_value = false;

  //! Asymmetric score for display: log2 of the product (inf when infinite).
  double log2_score() const;
  nlohmann::ordered_json to_json() const;
  std::string pretty() const;
};

/*! Exact value of the symmetric Prover-Delayer game on f, by the minimax
 *  recursion  V = min_i max(V(f_{i,0}), V(f_{i,1}), 1 + min_b V(f_{i,b})).
 *  Always equals opt_rank(f).value; computed independently so the two can
 *  be checked against each other.
 */
int game_value(const BoolFun& f, const ExactOptions& opts = {});

/*! Exact value of the asymmetric game, returned as the integer S whose
 *  log2 is the game value; S always equals opt_size(f).value.  The
 *  recursion V = min_i log2(2^{V0} + 2^{V1}) is realized exactly as
 *  S = min_i (S0 + S1) with S = 1 on constants.
 */
long long asym_game_value(const BoolFun& f, const ExactOptions& opts = {});

//! Play one symmetric game to the end (constant restriction).
Transcript play(const BoolFun& f, ProverStrategy& prover, DelayerStrategy& delayer);
//! Play one asymmetric game to the end.
Transcript play_asym(const BoolFun& f, AsymProverStrategy& prover,
                     AsymDelayerStrategy& delayer);

/*! Strategy catalog.
 *
 *  The optimal pair realizes the game value on every function: the prover
 *  descends a rank-optimal tree (on a defer it picks the child of smaller
 *  rank, ties toward 0); the delayer answers toward the larger-rank child
 *  and defers exactly when the child ranks are equal.
 *
 *  The block strategies (`tribes`, `andparity`, `asym_tribes`) assume the
 *  row/column layout of BlockShape with row 0 in the lowest variable
 *  positions.  `rows_are_or` selects the AND-of-ORs form (true) or the
 *  OR-of-ANDs form (false); the row-resolving value is 1 resp. 0.
 */
std::unique_ptr<ProverStrategy> make_optimal_prover(const ExactOptions& opts = {});
std::unique_ptr<DelayerStrategy> make_optimal_delayer(const ExactOptions& opts = {});
std::unique_ptr<ProverStrategy> make_tribes_prover(BlockShape shape, bool rows_are_or);
std::unique_ptr<DelayerStrategy> make_tribes_delayer(BlockShape shape, bool rows_are_or);
std::unique_ptr<ProverStrategy> make_andparity_prover(BlockShape shape);
std::unique_ptr<DelayerStrategy> make_andparity_delayer(BlockShape shape);
//! Queries a minimum 0-certificate of some 0-input in full before moving
//! on; restricts any delayer to (C0-1)(C1-1)+1 points.  Stateful.
std::unique_ptr<ProverStrategy> make_cert_prover(const ExactOptions& opts = {});
//! Blockwise prover for outer(inner_1, ..., inner_k): walks a depth-optimal
//! tree of `outer`, playing rank-optimally inside the block it queries.
std::unique_ptr<ProverStrategy> make_compose_prover(BoolFun outer,
                                                    std::vector<BoolFun> inners,
                                                    const ExactOptions& opts = {});
//! The composed-function delayer is the rank-comparison (optimal) delayer.
std::unique_ptr<DelayerStrategy> make_compose_delayer(const ExactOptions& opts = {});

std::unique_ptr<AsymProverStrategy> make_asym_optimal_prover(const ExactOptions& opts = {});
std::unique_ptr<AsymDelayerStrategy> make_asym_optimal_delayer(const ExactOptions& opts = {});
//! Announces (1 - 1/k, 1/k) on the row-resolving side, k = free variables
//! left in the queried row.
std::unique_ptr<AsymDelayerStrategy> make_asym_tribes_delayer(BlockShape shape,
                                                              bool rows_are_or);

}  // namespace dtrank
