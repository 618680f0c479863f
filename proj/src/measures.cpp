#include "dtrank/measures.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "dtrank/fourier.hpp"

namespace dtrank {

namespace {

void check_cap(const BoolFun& f, const ExactOptions& opts, const char* what) {
  if (f.arity() > opts.effective_cap())
    throw CapExceeded(std::string(what) + ": arity " + std::to_string(f.arity()) +
                      " exceeds the exact-search cap " +
                      std::to_string(opts.effective_cap()) +
                      " (raise the cap or enable the heavy mode)");
}

struct RankPolicy {
  using Value = int;
  static Value base(bool) { return 0; }
  static Value combine(Value a, Value b) { return a == b ? a + 1 : std::max(a, b); }
};

struct DepthPolicy {
  using Value = int;
  static Value base(bool) { return 0; }
  static Value combine(Value a, Value b) { return 1 + std::max(a, b); }
};

struct SizePolicy {
  using Value = long long;
  static Value base(bool) { return 1; }
  static Value combine(Value a, Value b) { return a + b; }
};

/*! Branch-and-memoize over restrictions.  States are keyed by the bare
 *  truth table of the restricted subfunction (free variables renumbered
 *  in their original order), which merges all assignments leading to the
 *  same subfunction.
 */
template <class Policy>
class Engine {
 public:
  explicit Engine(const ExactOptions& opts) : opts_(opts) {}
  using Value = typename Policy::Value;

  Value solve(const BoolFun& f) {
    if (const auto c = f.constant_value()) return Policy::base(*c);
    if (const auto it = memo_.find(f); it != memo_.end()) return it->second;
    Value best{};
    for (int i = 0; i < f.arity(); ++i) {
      const Value v =
          Policy::combine(solve(f.cofactor(i, false)), solve(f.cofactor(i, true)));
      if (i == 0 || v < best) best = v;
    }
    ++solved_;
    if (opts_.progress && (solved_ & 0xffffu) == 0) opts_.progress(solved_);
    if (opts_.memo_limit == 0 || memo_.size() < opts_.memo_limit) memo_.emplace(f, best);
    return best;
  }

  //! Rebuild an optimal tree; var_map translates current variable slots
  //! back to original 0-based indices.
  DTree extract(const BoolFun& f, const std::vector<int>& var_map) {
    if (const auto c = f.constant_value()) return DTree::leaf(*c);
    const Value target = solve(f);
    for (int i = 0; i < f.arity(); ++i) {
      const BoolFun f0 = f.cofactor(i, false);
      const BoolFun f1 = f.cofactor(i, true);
      if (Policy::combine(solve(f0), solve(f1)) != target) continue;
      std::vector<int> sub = var_map;
      sub.erase(sub.begin() + i);
      return DTree::query(var_map[i], extract(f0, sub), extract(f1, sub));
    }
    throw std::logic_error("witness extraction lost the optimum");
  }

  std::uint64_t solved() const { return solved_; }

 private:
  const ExactOptions& opts_;
  std::unordered_map<BoolFun, Value, BoolFunHash> memo_;
  std::uint64_t solved_ = 0;
};

std::vector<int> identity_map(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

//! Weighted-depth search; weights follow the free variables, so the key
//! must include the weight subvector (restriction renumbers variables).
class WeightedEngine {
 public:
  explicit WeightedEngine(const ExactOptions& opts) : opts_(opts) {}

  long long solve(const BoolFun& f, const std::vector<int>& w) {
    if (f.constant_value()) return 0;
    const Key key{f, w};
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    long long best = 0;
    for (int i = 0; i < f.arity(); ++i) {
      std::vector<int> sub = w;
      sub.erase(sub.begin() + i);
      const long long v =
          w[i] + std::max(solve(f.cofactor(i, false), sub), solve(f.cofactor(i, true), sub));
      if (i == 0 || v < best) best = v;
    }
    ++solved_;
    if (opts_.progress && (solved_ & 0xffffu) == 0) opts_.progress(solved_);
    if (opts_.memo_limit == 0 || memo_.size() < opts_.memo_limit) memo_.emplace(key, best);
    return best;
  }

  DTree extract(const BoolFun& f, const std::vector<int>& w,
                const std::vector<int>& var_map) {
    if (const auto c = f.constant_value()) return DTree::leaf(*c);
    const long long target = solve(f, w);
    for (int i = 0; i < f.arity(); ++i) {
      std::vector<int> sub_w = w;
      sub_w.erase(sub_w.begin() + i);
      const BoolFun f0 = f.cofactor(i, false);
      const BoolFun f1 = f.cofactor(i, true);
      if (w[i] + std::max(solve(f0, sub_w), solve(f1, sub_w)) != target) continue;
      std::vector<int> sub_m = var_map;
      sub_m.erase(sub_m.begin() + i);
      return DTree::query(var_map[i], extract(f0, sub_w, sub_m), extract(f1, sub_w, sub_m));
    }
    throw std::logic_error("witness extraction lost the optimum");
  }

  std::uint64_t solved() const { return solved_; }

 private:
  struct Key {
    BoolFun f;
    std::vector<int> w;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = k.f.hash();
      for (int x : k.w) h = h * 1099511628211ull + static_cast<std::size_t>(x) + 0x9e37;
      return h;
    }
  };
  const ExactOptions& opts_;
  std::unordered_map<Key, long long, KeyHash> memo_;
  std::uint64_t solved_ = 0;
};

}  // namespace

namespace {

template <class E>
void finish_progress(const ExactOptions& opts, const E& engine) {
  if (opts.progress) opts.progress(engine.solved());
}

}  // namespace

RankResult opt_rank(const BoolFun& f, const ExactOptions& opts) {
  check_cap(f, opts, "opt_rank");
  Engine<RankPolicy> e(opts);
  RankResult r{e.solve(f), e.extract(f, identity_map(f.arity()))};
  finish_progress(opts, e);
  return r;
}

RankResult opt_depth(const BoolFun& f, const ExactOptions& opts) {
  check_cap(f, opts, "opt_depth");
  Engine<DepthPolicy> e(opts);
  RankResult r{e.solve(f), e.extract(f, identity_map(f.arity()))};
  finish_progress(opts, e);
  return r;
}

SizeResult opt_size(const BoolFun& f, const ExactOptions& opts) {
  check_cap(f, opts, "opt_size");
  Engine<SizePolicy> e(opts);
  SizeResult r{e.solve(f), e.extract(f, identity_map(f.arity()))};
  finish_progress(opts, e);
  return r;
}

WeightedResult opt_weighted_depth(const BoolFun& f, const std::vector<int>& weights,
                                  const ExactOptions& opts) {
  check_cap(f, opts, "opt_weighted_depth");
  if (static_cast<int>(weights.size()) != f.arity())
    throw std::invalid_argument("opt_weighted_depth: need one weight per variable");
  for (int w : weights)
    if (w < 0) throw std::invalid_argument("opt_weighted_depth: weights must be nonnegative");
  // Uniform weights reduce to scaled depth with the same optimal trees.
  if (f.arity() == 0 ||
      std::all_of(weights.begin(), weights.end(), [&](int w) { return w == weights[0]; })) {
    const RankResult d = opt_depth(f, opts);
    const long long unit = f.arity() == 0 ? 0 : weights[0];
    return WeightedResult{unit * d.value, d.witness};
  }
  WeightedEngine e(opts);
  WeightedResult r{e.solve(f, weights), e.extract(f, weights, identity_map(f.arity()))};
  finish_progress(opts, e);
  return r;
}

SubcubeTable::SubcubeTable(const BoolFun& f, const ExactOptions& opts) : n_(f.arity()) {
  check_cap(f, opts, "subcube table");
  pow3_.resize(n_ + 1);
  pow3_[0] = 1;
  for (int i = 1; i <= n_; ++i) pow3_[i] = pow3_[i - 1] * 3;
  const std::size_t total = pow3_[n_];
  flags_.assign(total, 0);
  cert_.assign(total, 0xff);

  // Constancy flags, bottom-up.  Codes are ternary numbers whose digit i
  // is the assignment of variable i (2 = free); both children of a free
  // digit are numerically smaller, so one ascending pass suffices.
  std::vector<std::uint8_t> digits(n_, 0);
  for (std::size_t c = 0; c < total; ++c) {
    int free_digit = -1;
    for (int i = 0; i < n_; ++i)
      if (digits[i] == 2) {
        free_digit = i;
        break;
      }
    if (free_digit < 0) {
      std::uint32_t x = 0;
      for (int i = 0; i < n_; ++i) x |= static_cast<std::uint32_t>(digits[i]) << i;
      flags_[c] = f.get(x) ? 2 : 1;
    } else {
      const std::size_t c0 = c - 2 * pow3_[free_digit];
      flags_[c] = flags_[c0] & flags_[c0 + pow3_[free_digit]];
    }
    for (int i = 0; i < n_; ++i) {  // odometer increment
      if (digits[i] < 2) {
        ++digits[i];
        break;
      }
      digits[i] = 0;
    }
  }

  // Minimum codimension of a constant coarsening, top-down (freeing a
  // fixed digit yields a numerically larger code).
  std::fill(digits.begin(), digits.end(), 2);
  for (std::size_t c = total; c-- > 0;) {
    int fixed = 0;
    for (int i = 0; i < n_; ++i) fixed += digits[i] != 2;
    int best = flags_[c] != 0 ? fixed : 0xff;
    for (int i = 0; i < n_; ++i)
      if (digits[i] != 2)
        best = std::min<int>(best, cert_[c + (2 - digits[i]) * pow3_[i]]);
    cert_[c] = static_cast<std::uint8_t>(best);
    for (int i = 0; i < n_; ++i) {  // odometer decrement
      if (digits[i] > 0) {
        --digits[i];
        break;
      }
      digits[i] = 2;
    }
  }
}

std::size_t SubcubeTable::index_of(const Subcube& cube) const {
  if (cube.support >= (1u << n_) && cube.support != 0)
    throw std::invalid_argument("subcube mentions variables beyond the arity");
  if ((cube.values & ~cube.support) != 0)
    throw std::invalid_argument("subcube values outside the support");
  std::size_t c = 0;
  for (int i = 0; i < n_; ++i) {
    const std::size_t digit =
        (cube.support >> i) & 1u ? ((cube.values >> i) & 1u) : 2u;
    c += digit * pow3_[i];
  }
  return c;
}

bool SubcubeTable::constant_on(const Subcube& cube) const {
  return flags_[index_of(cube)] != 0;
}

std::optional<bool> SubcubeTable::constant_value_on(const Subcube& cube) const {
  const std::uint8_t f = flags_[index_of(cube)];
  if (f == 0) return std::nullopt;
  return (f & 2) != 0;
}

int SubcubeTable::cert_at(std::uint32_t x) const {
  if (x >= (1u << n_)) throw std::out_of_range("cert_at: input index exceeds 2^arity");
  std::size_t c = 0;
  for (int i = 0; i < n_; ++i) c += static_cast<std::size_t>((x >> i) & 1u) * pow3_[i];
  return cert_[c];
}

std::pair<int, Subcube> SubcubeTable::min_constant_codim() const {
  int best = 0xff;
  Subcube witness;
  std::vector<std::uint8_t> digits(n_, 0);
  for (std::size_t c = 0; c < flags_.size(); ++c) {
    if (flags_[c] != 0) {
      std::uint32_t support = 0, values = 0;
      int fixed = 0;
      for (int i = 0; i < n_; ++i)
        if (digits[i] != 2) {
          support |= 1u << i;
          values |= static_cast<std::uint32_t>(digits[i]) << i;
          ++fixed;
        }
      if (fixed < best || (fixed == best && (support < witness.support ||
                                             (support == witness.support &&
                                              values < witness.values)))) {
        best = fixed;
        witness = Subcube{support, values};
      }
    }
    for (int i = 0; i < n_; ++i) {
      if (digits[i] < 2) {
        ++digits[i];
        break;
      }
      digits[i] = 0;
    }
  }
  return {best, witness};
}

int cert_at(const BoolFun& f, std::uint32_t x, const ExactOptions& opts) {
  return SubcubeTable(f, opts).cert_at(x);
}

CertStats certificates(const BoolFun& f, const ExactOptions& opts) {
  const SubcubeTable table(f, opts);
  CertStats s;
  s.c_min = f.arity() + 1;
  long long sum = 0;
  for (std::uint32_t x = 0; x < f.table_size(); ++x) {
    const int v = table.cert_at(x);
    (f.get(x) ? s.c1 : s.c0) = std::max(f.get(x) ? s.c1 : s.c0, v);
    s.c_min = std::min(s.c_min, v);
    sum += v;
  }
  s.c = std::max(s.c0, s.c1);
  s.c_avg = Rational(sum, 1ll << f.arity());
  return s;
}

KillResult kill_number(const BoolFun& f, const ExactOptions& opts) {
  const auto [value, witness] = SubcubeTable(f, opts).min_constant_codim();
  return KillResult{value, witness};
}

namespace {
std::vector<int> run_lengths(const SymmetricProfile& profile) {
  std::vector<int> runs;
  int len = 0;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    ++len;
    if (i + 1 == profile.values.size() || profile.values[i + 1] != profile.values[i]) {
      runs.push_back(len);
      len = 0;
    }
  }
  return runs;
}
}  // namespace

int gap(const SymmetricProfile& profile) {
  if (profile.values.empty()) throw std::invalid_argument("empty profile");
  const auto runs = run_lengths(profile);
  return *std::max_element(runs.begin(), runs.end()) - 1;
}

int gap_min(const SymmetricProfile& profile) {
  if (profile.values.empty()) throw std::invalid_argument("empty profile");
  const auto runs = run_lengths(profile);
  return *std::min_element(runs.begin(), runs.end()) - 1;
}

MeasureReport measure_report(const BoolFun& f, const std::optional<std::vector<int>>& weights,
                             const ExactOptions& opts) {
  MeasureReport r;
  r.arity = f.arity();
  r.hex = f.to_hex();
  const RankResult rank = opt_rank(f, opts);
  const RankResult depth = opt_depth(f, opts);
  const SizeResult size = opt_size(f, opts);
  r.rank = rank.value;
  r.depth = depth.value;
  r.size = size.value;
  r.rank_witness = rank.witness;
  r.depth_witness = depth.witness;
  r.size_witness = size.witness;
  if (weights) {
    r.weights = *weights;
    r.weighted_depth = opt_weighted_depth(f, *weights, opts).value;
  }
  r.cert = certificates(f, opts);
  r.kill = kill_number(f, opts).value;
  const Spectrum s = wht(f);
  r.spar = s.spar();
  r.spar_tilde = s.spar_tilde();
  if (const auto profile = f.symmetric_profile()) {
    r.gap = gap(*profile);
    r.gap_min = gap_min(*profile);
  }
  return r;
}

nlohmann::ordered_json report_to_json(const MeasureReport& r) {
  nlohmann::ordered_json j;
  j["function"] = {{"n", r.arity}, {"hex", r.hex}};
  j["rank"] = r.rank;
  j["depth"] = r.depth;
  j["size"] = r.size;
  if (r.weighted_depth) {
    j["weighted_depth"] = *r.weighted_depth;
    j["weights"] = *r.weights;
  }
  j["certificates"] = {{"c0", r.cert.c0},
                       {"c1", r.cert.c1},
                       {"c", r.cert.c},
                       {"c_min", r.cert.c_min},
                       {"c_avg", rational_string(r.cert.c_avg)}};
  j["kill"] = r.kill;
  j["spar"] = r.spar;
  j["spar_tilde"] = r.spar_tilde;
  if (r.gap) {
    j["gap"] = *r.gap;
    j["gap_min"] = *r.gap_min;
  }
  j["witnesses"] = {{"rank", r.rank_witness.to_json()},
                    {"depth", r.depth_witness.to_json()},
                    {"size", r.size_witness.to_json()}};
  return j;
}

}  // namespace dtrank
