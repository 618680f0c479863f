#include "dtrank/games.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace dtrank {

int GameState::local_index(int var) const {
  for (std::size_t i = 0; i < var_map.size(); ++i)
    if (var_map[i] == var) return static_cast<int>(i);
  return -1;
}

namespace {

void check_cap(const BoolFun& f, const ExactOptions& opts, const char* who) {
  if (f.arity() > opts.effective_cap())
    throw CapExceeded(std::string(who) + ": arity exceeds the exact-search cap");
}

GameState initial_state(const BoolFun& f) {
  GameState s;
  s.original = f;
  s.current = f;
  s.var_map.resize(f.arity());
  for (int i = 0; i < f.arity(); ++i) s.var_map[i] = i;
  return s;
}

//! Validate the prover's query and return its index into state.current.
int query_index(const GameState& state, int var, const std::string& prover) {
  if (var < 0 || var >= state.original.arity())
    throw StrategyFault(prover, "queried variable x" + std::to_string(var + 1) +
                                    " outside the function's arity");
  if (!state.is_free(var))
    throw StrategyFault(prover, "queried the fixed variable x" + std::to_string(var + 1));
  return state.local_index(var);
}

void apply_move(GameState& state, int var, int local, bool value) {
  state.fixed = state.fixed.fixed(var, value);
  state.current = state.current.cofactor(local, value);
  state.var_map.erase(state.var_map.begin() + local);
  ++state.round;
}

}  // namespace

int game_value(const BoolFun& f, const ExactOptions& opts) {
  check_cap(f, opts, "game_value");
  std::unordered_map<BoolFun, int, BoolFunHash> memo;
  auto value = [&](auto&& self, const BoolFun& g) -> int {
    if (g.is_constant()) return 0;
    if (const auto it = memo.find(g); it != memo.end()) return it->second;
    int best = std::numeric_limits<int>::max();
    for (int i = 0; i < g.arity(); ++i) {
      const int v0 = self(self, g.cofactor(i, false));
      const int v1 = self(self, g.cofactor(i, true));
      best = std::min(best, std::max({v0, v1, 1 + std::min(v0, v1)}));
    }
    memo.emplace(g, best);
    return best;
  };
  return value(value, f);
}

long long asym_game_value(const BoolFun& f, const ExactOptions& opts) {
  check_cap(f, opts, "asym_game_value");
  std::unordered_map<BoolFun, long long, BoolFunHash> memo;
  auto value = [&](auto&& self, const BoolFun& g) -> long long {
    if (g.is_constant()) return 1;
    if (const auto it = memo.find(g); it != memo.end()) return it->second;
    long long best = std::numeric_limits<long long>::max();
    for (int i = 0; i < g.arity(); ++i)
      best = std::min(best, self(self, g.cofactor(i, false)) + self(self, g.cofactor(i, true)));
    memo.emplace(g, best);
    return best;
  };
  return value(value, f);
}

Transcript play(const BoolFun& f, ProverStrategy& prover, DelayerStrategy& delayer) {
  GameState state = initial_state(f);
  Transcript t;
  t.arity = f.arity();
  while (!state.current.is_constant()) {
    const int var = prover.next_query(state);
    const int local = query_index(state, var, prover.name());
    GameRound round;
    round.var = var;
    round.response = delayer.respond(state, var);
    if (round.response == Response::kDefer) {
      round.chosen = prover.choose(state, var);
      round.points = 1;
    } else {
      round.chosen = round.response == Response::kOne;
    }
    state.points += round.points;
    apply_move(state, var, local, round.chosen);
    t.rounds.push_back(round);
  }
  t.score = state.points;
  t.final_value = *state.current.constant_value();
  return t;
}

Transcript play_asym(const BoolFun& f, AsymProverStrategy& prover,
                     AsymDelayerStrategy& delayer) {
  GameState state = initial_state(f);
  Transcript t;
  t.asym = true;
  t.arity = f.arity();
  while (!state.current.is_constant()) {
    const int var = prover.next_query(state);
    const int local = query_index(state, var, prover.name());
    GameRound round;
    round.var = var;
    std::tie(round.p0, round.p1) = delayer.respond(state, var);
    if (round.p0 < 0 || round.p1 < 0 || round.p0 + round.p1 != Rational(1))
      throw StrategyFault(delayer.name(), "announced (p0, p1) is not a distribution");
    round.chosen = prover.pick(state, var, round.p0, round.p1);
    const Rational p = round.chosen ? round.p1 : round.p0;
    if (p == Rational(0)) {
      round.infinite = true;
      state.infinite = true;
    } else {
      round.factor = Rational(1) / p;
      state.product *= round.factor;
    }
    apply_move(state, var, local, round.chosen);
    t.rounds.push_back(round);
  }
  t.product = state.product;
  t.infinite = state.infinite;
  t.final_value = *state.current.constant_value();
  return t;
}

double Transcript::log2_score() const {
  if (infinite) return std::numeric_limits<double>::infinity();
  return rational_log2(product);
}

namespace {

const char* response_name(Response r) {
  switch (r) {
    case Response::kZero: return "0";
    case Response::kOne: return "1";
    default: return "defer";
  }
}

}  // namespace

nlohmann::ordered_json Transcript::to_json() const {
  nlohmann::ordered_json j;
  j["asym"] = asym;
  j["arity"] = arity;
  auto rs = nlohmann::ordered_json::array();
  for (const GameRound& r : rounds) {
    nlohmann::ordered_json jr;
    jr["var"] = r.var + 1;
    if (asym) {
      jr["p0"] = rational_string(r.p0);
      jr["p1"] = rational_string(r.p1);
      jr["chosen"] = r.chosen ? 1 : 0;
      if (r.infinite) {
        jr["infinite"] = true;
      } else {
        jr["factor"] = rational_string(r.factor);
        jr["points"] = rational_log2(r.factor);
      }
    } else {
      jr["response"] = response_name(r.response);
      jr["chosen"] = r.chosen ? 1 : 0;
      jr["points"] = r.points;
    }
    rs.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rs);
  if (asym) {
    nlohmann::ordered_json score;
    score["infinite"] = infinite;
    if (!infinite) {
      score["product"] = rational_string(product);
      score["log2"] = log2_score();
    }
    j["score"] = std::move(score);
  } else {
    j["score"] = score;
  }
  j["final_value"] = final_value ? 1 : 0;
  return j;
}

std::string Transcript::pretty() const {
  std::ostringstream out;
  int n = 0;
  for (const GameRound& r : rounds) {
    out << "round " << ++n << ": x" << (r.var + 1);
    if (asym) {
      out << " -> (p0=" << rational_string(r.p0) << ", p1=" << rational_string(r.p1)
          << "), prover sets " << (r.chosen ? 1 : 0);
      if (r.infinite)
        out << "  [infinite]";
      else
        out << "  [+" << rational_log2(r.factor) << "]";
    } else {
      out << " -> " << response_name(r.response);
      if (r.response == Response::kDefer)
        out << ", prover sets " << (r.chosen ? 1 : 0) << "  [+1]";
    }
    out << "\n";
  }
  out << "value " << (final_value ? 1 : 0) << " after " << rounds.size() << " rounds; score ";
  if (!asym)
    out << score;
  else if (infinite)
    out << "infinite";
  else
    out << rational_string(product) << " (log2 = " << log2_score() << ")";
  out << "\n";
  return out.str();
}

}  // namespace dtrank
