#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <utility>

#include "dtrank/games.hpp"

namespace dtrank {

namespace {

//! Ranks of the two cofactors of g at local variable i.
std::pair<int, int> rank_pair(const BoolFun& g, int i, const ExactOptions& opts) {
  return {opt_rank(g.cofactor(i, false), opts).value,
          opt_rank(g.cofactor(i, true), opts).value};
}

std::pair<long long, long long> size_pair(const BoolFun& g, int i, const ExactOptions& opts) {
  return {opt_size(g.cofactor(i, false), opts).value,
          opt_size(g.cofactor(i, true), opts).value};
}

//! Local variable of g minimizing the rank recursion, lowest index first.
int best_rank_var(const BoolFun& g, const ExactOptions& opts) {
  int best = -1, best_value = 0;
  for (int i = 0; i < g.arity(); ++i) {
    const auto [r0, r1] = rank_pair(g, i, opts);
    const int combined = r0 == r1 ? r0 + 1 : std::max(r0, r1);
    if (best < 0 || combined < best_value) {
      best = i;
      best_value = combined;
    }
  }
  return best;
}

int lowest_free(const GameState& state) {
  for (int v = 0; v < state.original.arity(); ++v)
    if (state.is_free(v)) return v;
  return -1;
}

bool fixed_value(const GameState& state, int var) {
  return ((state.fixed.values >> var) & 1u) != 0;
}

class OptimalProver final : public ProverStrategy {
 public:
  explicit OptimalProver(ExactOptions opts) : opts_(std::move(opts)) {}
  std::string name() const override { return "optimal_prover"; }

  int next_query(const GameState& state) override {
    return state.var_map[best_rank_var(state.current, opts_)];
  }
  bool choose(const GameState& state, int var) override {
    const auto [r0, r1] = rank_pair(state.current, state.local_index(var), opts_);
    return r1 < r0;  // descend into the smaller-rank subtree, ties toward 0
  }

 private:
  ExactOptions opts_;
};

class OptimalDelayer final : public DelayerStrategy {
 public:
  OptimalDelayer(ExactOptions opts, std::string name)
      : opts_(std::move(opts)), name_(std::move(name)) {}
  std::string name() const override { return name_; }

  Response respond(const GameState& state, int var) override {
    const auto [r0, r1] = rank_pair(state.current, state.local_index(var), opts_);
    if (r0 == r1) return Response::kDefer;
    return r1 > r0 ? Response::kOne : Response::kZero;  // keep the harder side
  }

 private:
  ExactOptions opts_;
  std::string name_;
};

/*! Row bookkeeping shared by the block strategies.  Row r covers the
 *  variables [r*cols, (r+1)*cols); `row_value` is the value that resolves
 *  a row (1 for an OR row, 0 for an AND row).
 */
struct Blocks {
  BlockShape shape;
  bool rows_are_or = false;

  bool row_value() const { return rows_are_or; }
  int row_of(int var) const {
    return var < shape.rows * shape.cols ? var / shape.cols : -1;
  }
  int free_in_row(const GameState& state, int row) const {
    int count = 0;
    for (int j = 0; j < shape.cols; ++j)
      if (state.is_free(row * shape.cols + j)) ++count;
    return count;
  }
  //! True once some variable of the row carries the resolving value.
  bool row_resolved(const GameState& state, int row) const {
    for (int j = 0; j < shape.cols; ++j) {
      const int var = row * shape.cols + j;
      if (!state.is_free(var) && fixed_value(state, var) == row_value()) return true;
    }
    return false;
  }
  //! Parity (xor) of the values already fixed in the row.
  bool row_parity(const GameState& state, int row) const {
    bool parity = false;
    for (int j = 0; j < shape.cols; ++j) {
      const int var = row * shape.cols + j;
      if (!state.is_free(var)) parity ^= fixed_value(state, var);
    }
    return parity;
  }
};

class TribesProver final : public ProverStrategy {
 public:
  TribesProver(BlockShape shape, bool rows_are_or) : blocks_{shape, rows_are_or} {}
  std::string name() const override { return "tribes_prover"; }

  //! Row-major: stay in the first unresolved row until a variable takes
  //! the resolving value, then move on.
  int next_query(const GameState& state) override {
    for (int r = 0; r < blocks_.shape.rows; ++r) {
      if (blocks_.row_resolved(state, r)) continue;
      for (int j = 0; j < blocks_.shape.cols; ++j)
        if (state.is_free(r * blocks_.shape.cols + j)) return r * blocks_.shape.cols + j;
    }
    return lowest_free(state);
  }
  bool choose(const GameState&, int) override { return blocks_.row_value(); }

 private:
  Blocks blocks_;
};

class TribesDelayer final : public DelayerStrategy {
 public:
  TribesDelayer(BlockShape shape, bool rows_are_or) : blocks_{shape, rows_are_or} {}
  std::string name() const override { return "tribes_delayer"; }

  //! Defer unless this is the last free variable of its row; answering the
  //! resolving value there keeps any row from ending up all-unresolving.
  Response respond(const GameState& state, int var) override {
    const int row = blocks_.row_of(var);
    if (row < 0 || blocks_.free_in_row(state, row) >= 2) return Response::kDefer;
    return blocks_.row_value() ? Response::kOne : Response::kZero;
  }

 private:
  Blocks blocks_;
};

class AndParityProver final : public ProverStrategy {
 public:
  explicit AndParityProver(BlockShape shape) : blocks_{shape, false} {}
  std::string name() const override { return "andparity_prover"; }

  int next_query(const GameState& state) override { return lowest_free(state); }

  //! On the last free variable of a row, zero out that row's parity;
  //! anywhere else the choice is arbitrary (0 for determinism).
  bool choose(const GameState& state, int var) override {
    const int row = blocks_.row_of(var);
    if (row < 0 || blocks_.free_in_row(state, row) != 1) return false;
    return blocks_.row_parity(state, row);
  }

 private:
  Blocks blocks_;
};

class AndParityDelayer final : public DelayerStrategy {
 public:
  explicit AndParityDelayer(BlockShape shape) : blocks_{shape, false} {}
  std::string name() const override { return "andparity_delayer"; }

  Response respond(const GameState& state, int var) override {
    if (static_cast<int>(state.var_map.size()) == 1) return Response::kDefer;
    const int row = blocks_.row_of(var);
    if (row < 0 || blocks_.free_in_row(state, row) >= 2) return Response::kDefer;
    // Last free variable of the row: answer so the row's parity is 1.
    return blocks_.row_parity(state, row) ? Response::kZero : Response::kOne;
  }

 private:
  Blocks blocks_;
};

std::uint32_t first_input_with(const BoolFun& f, bool value) {
  for (std::uint32_t x = 0; x < f.table_size(); ++x)
    if (f.get(x) == value) return x;
  throw std::logic_error("no input with the requested value");
}

//! Smallest minimum-size `value`-certificate of input a, in
//! (popcount, numeric) mask order.
std::uint32_t min_certificate(const BoolFun& f, std::uint32_t a, bool value) {
  const int n = f.arity();
  for (int size = 1; size <= n; ++size)
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      if (std::popcount(s) != size) continue;
      if (f.restricted(Subcube{s, a & s}).constant_value() == std::optional<bool>(value))
        return s;
    }
  throw std::logic_error("input has no certificate");
}

class CertProver final : public ProverStrategy {
 public:
  explicit CertProver(ExactOptions opts) : opts_(std::move(opts)) {}
  std::string name() const override { return "cert_prover"; }

  int next_query(const GameState& state) override {
    while (!plan_.empty() && !state.is_free(plan_.front().first))
      plan_.erase(plan_.begin());
    if (plan_.empty()) rebuild(state);
    return plan_.front().first;
  }
  bool choose(const GameState&, int var) override {
    for (const auto& [v, b] : plan_)
      if (v == var) return b;
    return false;
  }

 private:
  /*! While C1 > 1: plan a minimum 0-certificate of some 0-input, to be
   *  queried in full.  Once C1 = 1: plan the single-variable 1-certificate
   *  of some 1-input.  Deferred choices follow the planned input.
   */
  void rebuild(const GameState& state) {
    const BoolFun& g = state.current;
    const bool target = certificates(g, opts_).c1 > 1 ? false : true;
    const std::uint32_t a = first_input_with(g, target);
    const std::uint32_t s = min_certificate(g, a, target);
    for (int i = 0; i < g.arity(); ++i)
      if ((s >> i) & 1u) plan_.emplace_back(state.var_map[i], ((a >> i) & 1u) != 0);
  }

  ExactOptions opts_;
  std::vector<std::pair<int, bool>> plan_;  // (original variable, planned value)
};

class ComposeProver final : public ProverStrategy {
 public:
  ComposeProver(BoolFun outer, std::vector<BoolFun> inners, ExactOptions opts)
      : outer_(std::move(outer)), inners_(std::move(inners)), opts_(std::move(opts)) {
    if (static_cast<int>(inners_.size()) != outer_.arity())
      throw std::invalid_argument("compose prover: one inner function per outer variable");
    offsets_.push_back(0);
    for (const BoolFun& g : inners_) offsets_.push_back(offsets_.back() + g.arity());
    tree_ = opt_depth(outer_, opts_).witness;
  }
  std::string name() const override { return "compose_prover"; }

  //! Walk the depth-optimal outer tree over the blocks whose inner value
  //! is already forced; inside the first undecided block play the
  //! rank-optimal prover on the block's restriction.
  int next_query(const GameState& state) override {
    DNodePtr node = tree_.root();
    while (!node->is_leaf()) {
      const int b = node->var;
      const BoolFun g = block_restriction(state, b);
      if (const auto v = g.constant_value()) {
        node = *v ? node->hi : node->lo;
        continue;
      }
      return global_var(state, b, best_rank_var(g, opts_));
    }
    return lowest_free(state);
  }

  bool choose(const GameState& state, int var) override {
    const int b = block_of(var);
    const BoolFun g = block_restriction(state, b);
    const auto [r0, r1] = rank_pair(g, free_position(state, b, var), opts_);
    return r1 < r0;
  }

 private:
  //! The inner function of block b under the values fixed so far.
  BoolFun block_restriction(const GameState& state, int b) const {
    Subcube cube;
    for (int j = 0; j < inners_[b].arity(); ++j) {
      const int var = offsets_[b] + j;
      if (!state.is_free(var)) cube = cube.fixed(j, fixed_value(state, var));
    }
    return inners_[b].restricted(cube);
  }
  int block_of(int var) const {
    for (std::size_t b = 0; b + 1 < offsets_.size(); ++b)
      if (var < offsets_[b + 1]) return static_cast<int>(b);
    throw std::logic_error("variable outside every block");
  }
  //! Original variable of the `local`-th free slot of block b.
  int global_var(const GameState& state, int b, int local) const {
    for (int j = 0; j < inners_[b].arity(); ++j)
      if (state.is_free(offsets_[b] + j) && local-- == 0) return offsets_[b] + j;
    throw std::logic_error("free block variable out of range");
  }
  int free_position(const GameState& state, int b, int var) const {
    int local = 0;
    for (int j = 0; offsets_[b] + j < var; ++j)
      if (state.is_free(offsets_[b] + j)) ++local;
    return local;
  }

  BoolFun outer_;
  std::vector<BoolFun> inners_;
  ExactOptions opts_;
  std::vector<int> offsets_;
  DTree tree_;
};

class AsymOptimalProver final : public AsymProverStrategy {
 public:
  explicit AsymOptimalProver(ExactOptions opts) : opts_(std::move(opts)) {}
  std::string name() const override { return "asym_optimal_prover"; }

  int next_query(const GameState& state) override {
    const BoolFun& g = state.current;
    int best = 0;
    long long best_value = -1;
    for (int i = 0; i < g.arity(); ++i) {
      const auto [s0, s1] = size_pair(g, i, opts_);
      if (best_value < 0 || s0 + s1 < best_value) {
        best = i;
        best_value = s0 + s1;
      }
    }
    return state.var_map[best];
  }

  //! Pick the branch of smaller S_b / p_b (the expected remaining cost);
  //! a zero probability makes a branch infinitely expensive.
  bool pick(const GameState& state, int var, const Rational& p0,
            const Rational& p1) override {
    if (p0 == Rational(0)) return true;
    if (p1 == Rational(0)) return false;
    const auto [s0, s1] = size_pair(state.current, state.local_index(var), opts_);
    return Rational(s1) / p1 < Rational(s0) / p0;  // ties toward 0
  }

 private:
  ExactOptions opts_;
};

class AsymOptimalDelayer final : public AsymDelayerStrategy {
 public:
  explicit AsymOptimalDelayer(ExactOptions opts) : opts_(std::move(opts)) {}
  std::string name() const override { return "asym_optimal_delayer"; }

  std::pair<Rational, Rational> respond(const GameState& state, int var) override {
    const auto [s0, s1] = size_pair(state.current, state.local_index(var), opts_);
    return {Rational(s0, s0 + s1), Rational(s1, s0 + s1)};
  }

 private:
  ExactOptions opts_;
};

class AsymTribesDelayer final : public AsymDelayerStrategy {
 public:
  AsymTribesDelayer(BlockShape shape, bool rows_are_or) : blocks_{shape, rows_are_or} {}
  std::string name() const override { return "asym_tribes_delayer"; }

  //! Weight 1/k on the row-resolving value, k = free variables in the row.
  std::pair<Rational, Rational> respond(const GameState& state, int var) override {
    const int row = blocks_.row_of(var);
    if (row < 0) return {Rational(1, 2), Rational(1, 2)};
    const long long k = blocks_.free_in_row(state, row);
    const Rational resolve(1, k), other(k - 1, k);
    return blocks_.row_value() ? std::make_pair(other, resolve)
                               : std::make_pair(resolve, other);
  }

 private:
  Blocks blocks_;
};

}  // namespace

std::unique_ptr<ProverStrategy> make_optimal_prover(const ExactOptions& opts) {
  return std::make_unique<OptimalProver>(opts);
}
std::unique_ptr<DelayerStrategy> make_optimal_delayer(const ExactOptions& opts) {
  return std::make_unique<OptimalDelayer>(opts, "optimal_delayer");
}
std::unique_ptr<ProverStrategy> make_tribes_prover(BlockShape shape, bool rows_are_or) {
  return std::make_unique<TribesProver>(shape, rows_are_or);
}
std::unique_ptr<DelayerStrategy> make_tribes_delayer(BlockShape shape, bool rows_are_or) {
  return std::make_unique<TribesDelayer>(shape, rows_are_or);
}
std::unique_ptr<ProverStrategy> make_andparity_prover(BlockShape shape) {
  return std::make_unique<AndParityProver>(shape);
}
std::unique_ptr<DelayerStrategy> make_andparity_delayer(BlockShape shape) {
  return std::make_unique<AndParityDelayer>(shape);
}
std::unique_ptr<ProverStrategy> make_cert_prover(const ExactOptions& opts) {
  return std::make_unique<CertProver>(opts);
}
std::unique_ptr<ProverStrategy> make_compose_prover(BoolFun outer,
                                                    std::vector<BoolFun> inners,
                                                    const ExactOptions& opts) {
  return std::make_unique<ComposeProver>(std::move(outer), std::move(inners), opts);
}
std::unique_ptr<DelayerStrategy> make_compose_delayer(const ExactOptions& opts) {
  return std::make_unique<OptimalDelayer>(opts, "compose_delayer");
}
std::unique_ptr<AsymProverStrategy> make_asym_optimal_prover(const ExactOptions& opts) {
  return std::make_unique<AsymOptimalProver>(opts);
}
std::unique_ptr<AsymDelayerStrategy> make_asym_optimal_delayer(const ExactOptions& opts) {
  return std::make_unique<AsymOptimalDelayer>(opts);
}
std::unique_ptr<AsymDelayerStrategy> make_asym_tribes_delayer(BlockShape shape,
                                                              bool rows_are_or) {
  return std::make_unique<AsymTribesDelayer>(shape, rows_are_or);
}

}  // namespace dtrank
