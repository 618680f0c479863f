#include "dtrank/verify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtrank/constructions.hpp"
#include "dtrank/dtree.hpp"
#include "dtrank/fourier.hpp"
#include "dtrank/games.hpp"
#include "dtrank/measures.hpp"
#include "dtrank/util.hpp"

namespace dtrank {
namespace {

using Clock = std::chrono::steady_clock;

// Additive slack for the handful of bounds that are only expressible with
// logarithms; every other comparison in this file is exact integer or
// rational arithmetic.
constexpr double kSlack = 1e-9;

std::string fn_id(const BoolFun& f) {
  return "TT:" + f.to_hex() + ":" + std::to_string(f.arity());
}

long long ipow(long long base, int exp) {
  long long r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

//! Everything the per-function checks need, computed once per function.
struct FnFacts {
  BoolFun f;
  std::string id;
  int n = 0;
  int rank = 0;
  int depth = 0;
  int kill = 0;
  long long size = 1;
  CertStats cert;
  long long spar = 0;
  long long spar_tilde = 0;
  std::optional<SymmetricProfile> profile;

  explicit FnFacts(BoolFun fn) : f(std::move(fn)) {}
};

FnFacts compute_facts(const BoolFun& f, const ExactOptions& exact, bool corrupt_rank) {
  FnFacts facts{f};
  facts.id = fn_id(f);
  facts.n = f.arity();
  facts.rank = opt_rank(f, exact).value + (corrupt_rank ? 1 : 0);
  facts.depth = opt_depth(f, exact).value;
  facts.size = opt_size(f, exact).value;
  facts.kill = kill_number(f, exact).value;
  facts.cert = certificates(f, exact);
  const Spectrum spectrum = wht(f);
  facts.spar = spectrum.spar();
  facts.spar_tilde = spectrum.spar_tilde();
  facts.profile = f.symmetric_profile();
  return facts;
}

// ---------------------------------------------------------------------------
// NPN canonicalization (arity <= 4), used to cache exact conjunction depths.
// Conjunction-query depth is invariant under variable permutation, input
// negation, and output negation, so one representative per orbit suffices.

struct NpnTables {
  // maps[n][t][x] = input index map of the t-th (permutation, flip) transform
  std::array<std::vector<std::vector<std::uint8_t>>, 5> maps;

  NpnTables() {
    for (int n = 0; n <= 4; ++n) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      const std::uint32_t points = 1u << n;
      do {
        for (std::uint32_t flips = 0; flips < points; ++flips) {
          std::vector<std::uint8_t> map(points);
          for (std::uint32_t x = 0; x < points; ++x) {
            std::uint32_t y = 0;
            for (int i = 0; i < n; ++i) {
              const std::uint32_t bit = ((x >> perm[i]) & 1u) ^ ((flips >> i) & 1u);
              y |= bit << i;
            }
            map[x] = static_cast<std::uint8_t>(y);
          }
          maps[n].push_back(std::move(map));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
};

const NpnTables& npn_tables() {
  static const NpnTables tables;
  return tables;
}

std::uint32_t npn_canonical(const BoolFun& f) {
  const int n = f.arity();
  const std::uint32_t table = static_cast<std::uint32_t>(f.words()[0]);
  const std::uint32_t full = (1u << f.table_size()) - 1u;
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (const auto& map : npn_tables().maps[n]) {
    std::uint32_t g = 0;
    for (std::uint32_t x = 0; x < f.table_size(); ++x)
      g |= ((table >> map[x]) & 1u) << x;
    best = std::min({best, g, g ^ full});
  }
  return best;
}

//! Per-worker scratch state shared by the checks.
struct CheckCtx {
  ExactOptions exact;
  // (arity << 20 | canonical table) -> exact conjunction depth
  std::unordered_map<std::uint32_t, int> conj_cache;
};

using Failure = std::optional<std::string>;

std::string detail(const FnFacts& facts, const std::string& message) {
  return facts.id + ": " + message;
}

struct FnCheck {
  std::string name;
  int max_arity = kMaxArity;
  std::function<bool(const FnFacts&)> applies;  // optional extra gate
  std::function<Failure(const FnFacts&, CheckCtx&)> run;
};

bool has_profile(const FnFacts& facts) { return facts.profile.has_value(); }

const std::vector<FnCheck>& all_fn_checks() {
  static const std::vector<FnCheck> checks = [] {
    std::vector<FnCheck> out;
    auto add = [&out](std::string name, int max_arity,
                      std::function<bool(const FnFacts&)> applies,
                      std::function<Failure(const FnFacts&, CheckCtx&)> run) {
      out.push_back(FnCheck{std::move(name), max_arity, std::move(applies), std::move(run)});
    };

    add("rank_size", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      if ((1LL << F.rank) > F.size) {
        return detail(F, "2^rank = " + std::to_string(1LL << F.rank) + " exceeds size " +
                             std::to_string(F.size));
      }
      if (F.rank == 0) {
        if (F.size != 1) return detail(F, "rank 0 but size " + std::to_string(F.size));
        return std::nullopt;
      }
      const double bound =
          F.rank * std::log2(std::exp(1.0) * double(F.n) / double(F.rank));
      if (std::log2(double(F.size)) > bound + kSlack) {
        std::ostringstream msg;
        msg << "log2(size) = " << std::log2(double(F.size))
            << " exceeds rank*log2(e*n/rank) = " << bound;
        return detail(F, msg.str());
      }
      return std::nullopt;
    });

    add("depth_sparsity", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      if (F.size > (1LL << F.depth))
        return detail(F, "size " + std::to_string(F.size) + " exceeds 2^depth");
      if (F.spar > (F.size << F.depth)) {
        return detail(F, "spar " + std::to_string(F.spar) + " exceeds size*2^depth = " +
                             std::to_string(F.size << F.depth));
      }
      return std::nullopt;
    });

    add("rank_sparsity_depth", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      if (F.rank > F.depth) return detail(F, "rank exceeds depth");
      if (F.spar > (1LL << (2 * F.depth)))
        return detail(F, "spar " + std::to_string(F.spar) + " exceeds 4^depth");
      if (F.rank == 0) {
        if (F.depth != 0) return detail(F, "rank 0 but positive depth");
        return std::nullopt;
      }
      const double bound = F.rank * (1.0 + std::log2(double(F.spar)));
      if (F.depth > bound + kSlack) {
        std::ostringstream msg;
        msg << "depth " << F.depth << " exceeds rank*(1+log2 spar) = " << bound;
        return detail(F, msg.str());
      }
      return std::nullopt;
    });

    add("kill_le_rank", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      if (F.kill > F.rank) {
        return detail(F, "kill number " + std::to_string(F.kill) + " exceeds rank " +
                             std::to_string(F.rank));
      }
      return std::nullopt;
    });

    add("cert_sandwich", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      const long long via_01 =
          static_cast<long long>(F.cert.c0 - 1) * (F.cert.c1 - 1) + 1;
      const long long via_max =
          static_cast<long long>(F.cert.c - 1) * (F.cert.c - 1) + 1;
      if (F.cert.c_min > F.rank) {
        return detail(F, "min certificate " + std::to_string(F.cert.c_min) +
                             " exceeds rank " + std::to_string(F.rank));
      }
      if (!F.f.is_constant() && F.rank > via_01) {
        return detail(F, "rank " + std::to_string(F.rank) + " exceeds (C0-1)(C1-1)+1 = " +
                             std::to_string(via_01));
      }
      if (!F.f.is_constant() && via_01 > via_max)
        return detail(F, "(C0-1)(C1-1)+1 exceeds (C-1)^2+1");
      return std::nullopt;
    });

    add("depth_cert", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      if (F.cert.c > F.depth) return detail(F, "certificate complexity exceeds depth");
      if (F.depth > static_cast<long long>(F.cert.c0) * F.cert.c1) {
        return detail(F, "depth " + std::to_string(F.depth) + " exceeds C0*C1 = " +
                             std::to_string(static_cast<long long>(F.cert.c0) * F.cert.c1));
      }
      return std::nullopt;
    });

    add("symm_rank_gap", kMaxArity, has_profile, [](const FnFacts& F, CheckCtx&) -> Failure {
      const int g = gap(*F.profile);
      if (F.rank != F.n - g) {
        return detail(F, "symmetric rank " + std::to_string(F.rank) + " != n - gap = " +
                             std::to_string(F.n - g));
      }
      return std::nullopt;
    });

    add("symm_cert", kMaxArity, has_profile, [](const FnFacts& F, CheckCtx&) -> Failure {
      const int g = gap_min(*F.profile);
      if (F.cert.c != F.n - g) {
        return detail(F, "symmetric certificate " + std::to_string(F.cert.c) +
                             " != n - gap_min = " + std::to_string(F.n - g));
      }
      if (!F.f.is_constant()) {
        if (F.n - F.cert.c + 1 > F.rank || F.rank > F.cert.c)
          return detail(F, "rank outside [n-C+1, C] for a symmetric function");
        if (F.depth != F.n)
          return detail(F, "non-constant symmetric function is not evasive");
      }
      return std::nullopt;
    });

    add("game_rank", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx& ctx) -> Failure {
      const int value = game_value(F.f, ctx.exact);
      if (value != F.rank) {
        return detail(F, "game value " + std::to_string(value) + " != rank " +
                             std::to_string(F.rank));
      }
      return std::nullopt;
    });

    add("asym_game_size", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx& ctx) -> Failure {
      const long long value = asym_game_value(F.f, ctx.exact);
      if (value != F.size) {
        return detail(F, "asymmetric game value " + std::to_string(value) + " != size " +
                             std::to_string(F.size));
      }
      return std::nullopt;
    });

    add("halving", 6, nullptr, [](const FnFacts& F, CheckCtx&) -> Failure {
      for (std::uint32_t s = 1; s < F.f.table_size(); ++s) {
        if (!halving_check(F.f, s)) {
          std::ostringstream msg;
          msg << "halving fails for S mask 0x" << std::hex << s;
          return detail(F, msg.str());
        }
      }
      return std::nullopt;
    });

    add("neg_dual", kMaxArity, nullptr, [](const FnFacts& F, CheckCtx& ctx) -> Failure {
      const std::array<std::pair<const char*, BoolFun>, 2> variants = {
          std::pair<const char*, BoolFun>{"negation", F.f.negated()},
          std::pair<const char*, BoolFun>{"dual", F.f.dual()},
      };
      for (const auto& [tag, g] : variants) {
        if (opt_rank(g, ctx.exact).value != F.rank)
          return detail(F, std::string(tag) + " changes the rank");
        if (opt_depth(g, ctx.exact).value != F.depth)
          return detail(F, std::string(tag) + " changes the depth");
        if (opt_size(g, ctx.exact).value != F.size)
          return detail(F, std::string(tag) + " changes the size");
      }
      return std::nullopt;
    });

    add("restriction_monotone", kMaxArity, nullptr,
        [](const FnFacts& F, CheckCtx& ctx) -> Failure {
          for (int i = 0; i < F.n; ++i) {
            for (int b = 0; b < 2; ++b) {
              const int r = opt_rank(F.f.cofactor(i, b != 0), ctx.exact).value;
              if (r > F.rank) {
                return detail(F, "restriction x" + std::to_string(i + 1) + "=" +
                                     std::to_string(b) + " raises rank to " +
                                     std::to_string(r));
              }
            }
          }
          return std::nullopt;
        });

    add("conj_sandwich", 4, nullptr, [](const FnFacts& F, CheckCtx& ctx) -> Failure {
      const std::uint32_t key =
          (static_cast<std::uint32_t>(F.n) << 20) | npn_canonical(F.f);
      auto it = ctx.conj_cache.find(key);
      int conj_depth = 0;
      if (it != ctx.conj_cache.end()) {
        conj_depth = it->second;
      } else {
        conj_depth = exact_conj_depth(BoolFun::from_words(F.n, {key & 0xFFFFFu}));
        ctx.conj_cache.emplace(key, conj_depth);
      }
      if (F.rank > conj_depth) {
        return detail(F, "rank " + std::to_string(F.rank) + " exceeds conjunction depth " +
                             std::to_string(conj_depth));
      }
      // Balancing bound: d <= 2*log_{3/2}(size), i.e. 3^d <= 2^d * size^2.
      // (log2(size) alone is too strong: table 0xe9 on 3 vars has
      // conjunction depth 3 with only 7 leaves.)
      unsigned __int128 pow3 = 1;
      for (int i = 0; i < conj_depth; ++i) pow3 *= 3;
      const unsigned __int128 budget =
          (static_cast<unsigned __int128>(F.size) * F.size) << conj_depth;
      if (pow3 > budget) {
        return detail(F, "conjunction depth " + std::to_string(conj_depth) +
                             " exceeds the balancing bound for size " +
                             std::to_string(F.size));
      }
      return std::nullopt;
    });

    return out;
  }();
  return checks;
}

const std::vector<std::string>& all_known_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out = check_names();
    for (const auto& name : composition_check_names()) out.push_back(name);
    for (const auto& name : named_check_names()) out.push_back(name);
    return out;
  }();
  return names;
}

void validate_check_names(const std::vector<std::string>& wanted) {
  for (const auto& name : wanted) {
    const auto& known = all_known_names();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw std::invalid_argument("unknown check: " + name);
  }
}

bool name_selected(const std::vector<std::string>& wanted, const std::string& name) {
  return wanted.empty() || std::find(wanted.begin(), wanted.end(), name) != wanted.end();
}

// ---------------------------------------------------------------------------
// Per-function suite runner.

struct Slot {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t first_index = std::numeric_limits<std::uint64_t>::max();
  std::string first_message;
  bool complete = true;
};

}  // namespace

Corpus::Corpus(std::string describe, std::uint64_t size,
               std::function<BoolFun(std::uint64_t)> at)
    : describe_(std::move(describe)), size_(size), at_(std::move(at)) {}

Corpus Corpus::exhaustive(int n) {
  if (n < 0 || n > 4)
    throw std::invalid_argument("exhaustive corpus supports arity 0..4");
  const std::uint64_t count = 1ull << (1u << n);
  return Corpus("exhaustive n=" + std::to_string(n), count, [n](std::uint64_t index) {
    return BoolFun::from_words(n, {index});
  });
}

Corpus Corpus::all_symmetric(int n) {
  if (n < 1 || n > 10)
    throw std::invalid_argument("symmetric corpus supports arity 1..10");
  const std::uint64_t count = 1ull << (n + 1);
  return Corpus("symmetric n=" + std::to_string(n), count, [n](std::uint64_t index) {
    SymmetricProfile profile;
    profile.values.resize(n + 1);
    for (int w = 0; w <= n; ++w)
      profile.values[w] = static_cast<std::uint8_t>((index >> w) & 1u);
    return function_from_profile(profile);
  });
}

Corpus Corpus::catalog(int max_arity) {
  if (max_arity < 2 || max_arity > kMaxArity)
    throw std::invalid_argument("catalog corpus supports max arity 2..16");
  auto fns = std::make_shared<std::vector<BoolFun>>();
  std::vector<std::string> seen;
  auto push = [&](const BoolFun& f) {
    const std::string id = fn_id(f);
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) return;
    seen.push_back(id);
    fns->push_back(f);
  };
  for (int n = 2; n <= max_arity; ++n) {
    push(catalog::and_fn(n));
    push(catalog::or_fn(n));
    push(catalog::parity(n));
    push(catalog::majority(n));
    for (int k = 2; k < n; ++k) push(catalog::threshold(k, n));
    push(catalog::maj_or_parity(n));
  }
  for (int rows = 2; rows <= max_arity / 2; ++rows) {
    for (int cols = 2; rows * cols <= max_arity; ++cols) {
      push(catalog::tribes(rows, cols));
      push(catalog::tribes_dual(rows, cols));
    }
  }
  const std::uint64_t count = fns->size();
  return Corpus("catalog n<=" + std::to_string(max_arity), count,
                [fns](std::uint64_t index) { return (*fns)[index]; });
}

Corpus Corpus::random(int n, std::uint64_t count, std::uint64_t seed) {
  if (n < 1 || n > kMaxArity)
    throw std::invalid_argument("random corpus supports arity 1..16");
  return Corpus(
      "random n=" + std::to_string(n) + " seed=" + std::to_string(seed), count,
      [n, seed](std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
        std::mt19937_64 rng(seq);
        const std::uint32_t bits = 1u << n;
        std::vector<std::uint64_t> words(bits < 64 ? 1 : bits / 64);
        for (auto& word : words) word = rng();
        if (bits < 64) words[0] &= (1ull << bits) - 1;
        return BoolFun::from_words(n, std::move(words));
      });
}

CompositionCorpus CompositionCorpus::exhaustive_pairs(int outer_arity, int inner_arity) {
  if (outer_arity < 1 || outer_arity > 3 || inner_arity < 1 || inner_arity > 3)
    throw std::invalid_argument("exhaustive pairs support arities 1..3");
  std::vector<Composition> items;
  const std::uint64_t full_outer = (1ull << (1u << outer_arity)) - 1;
  const std::uint64_t full_inner = (1ull << (1u << inner_arity)) - 1;
  for (std::uint64_t to = 1; to < full_outer; ++to) {
    const BoolFun outer = BoolFun::from_words(outer_arity, {to});
    for (std::uint64_t ti = 1; ti < full_inner; ++ti) {
      const BoolFun inner = BoolFun::from_words(inner_arity, {ti});
      items.push_back(Composition{
          outer, std::vector<BoolFun>(static_cast<std::size_t>(outer_arity), inner)});
    }
  }
  return CompositionCorpus("compose exhaustive " + std::to_string(outer_arity) + "o" +
                               std::to_string(inner_arity),
                           std::move(items));
}

namespace {
BoolFun random_nonconstant(int n, std::mt19937_64& rng) {
  const std::uint32_t bits = 1u << n;
  for (;;) {
    std::vector<std::uint64_t> words(bits < 64 ? 1 : bits / 64);
    for (auto& word : words) word = rng();
    if (bits < 64) words[0] &= (1ull << bits) - 1;
    BoolFun f = BoolFun::from_words(n, std::move(words));
    if (!f.is_constant()) return f;
  }
}
}  // namespace

CompositionCorpus CompositionCorpus::random_pairs(int outer_arity, int inner_arity,
                                                  std::uint64_t count,
                                                  std::uint64_t seed) {
  if (outer_arity < 1 || inner_arity < 1 ||
      outer_arity * inner_arity > kMaxArity)
    throw std::invalid_argument("random pairs exceed the arity cap");
  std::vector<Composition> items;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(i >> 32), 0xc0de0001u};
    std::mt19937_64 rng(seq);
    const BoolFun outer = random_nonconstant(outer_arity, rng);
    const BoolFun inner = random_nonconstant(inner_arity, rng);
    items.push_back(Composition{
        outer, std::vector<BoolFun>(static_cast<std::size_t>(outer_arity), inner)});
  }
  return CompositionCorpus("compose random " + std::to_string(outer_arity) + "o" +
                               std::to_string(inner_arity) + " seed=" +
                               std::to_string(seed),
                           std::move(items));
}

CompositionCorpus CompositionCorpus::mixed(int max_arity) {
  std::vector<Composition> candidates = {
      {catalog::majority(3), {catalog::and_fn(2), catalog::or_fn(2), catalog::parity(2)}},
      {catalog::and_fn(2), {catalog::or_fn(2), catalog::majority(3)}},
      {catalog::or_fn(2), {catalog::parity(3), catalog::and_fn(2)}},
      {catalog::parity(2), {catalog::majority(3), catalog::or_fn(3)}},
      {catalog::threshold(2, 3), {catalog::parity(2), catalog::and_fn(3), catalog::or_fn(2)}},
      {catalog::or_fn(3), {catalog::and_fn(2), catalog::and_fn(2), catalog::parity(3)}},
      {catalog::and_fn(2), {catalog::tribes_dual(2, 2), catalog::or_fn(2)}},
      {catalog::majority(3), {catalog::parity(3), catalog::and_fn(3), catalog::or_fn(3)}},
  };
  std::vector<Composition> items;
  for (auto& candidate : candidates) {
    int total = 0;
    for (const auto& inner : candidate.inners) total += inner.arity();
    if (total <= max_arity) items.push_back(std::move(candidate));
  }
  return CompositionCorpus("compose mixed n<=" + std::to_string(max_arity),
                           std::move(items));
}

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const auto& check : all_fn_checks()) names.push_back(check.name);
  return names;
}

std::vector<std::string> composition_check_names() {
  return {"compose_sandwich", "depth_compose", "compose_weighted_lb"};
}

std::vector<std::string> named_check_names() {
  return {"counterexamples", "tribes_leaves", "iterated_bounds"};
}

Report run_suite(const Corpus& corpus, const SuiteOptions& opts) {
  validate_check_names(opts.checks);
  std::vector<const FnCheck*> selected;
  for (const auto& check : all_fn_checks())
    if (name_selected(opts.checks, check.name)) selected.push_back(&check);

  const int jobs = std::max(1, opts.jobs);
  const bool bounded = opts.budget_ms > 0;
  const auto deadline = Clock::now() + std::chrono::milliseconds(opts.budget_ms);

  std::vector<std::vector<Slot>> slots(jobs, std::vector<Slot>(selected.size()));
  std::vector<std::exception_ptr> errors(jobs);

  auto worker = [&](int w) {
    try {
      CheckCtx ctx;
      ctx.exact = opts.exact;
      ctx.exact.progress = nullptr;  // progress callbacks do not mix with workers
      auto& mine = slots[w];
      for (std::uint64_t i = w; i < corpus.size(); i += std::uint64_t(jobs)) {
        if (bounded && Clock::now() >= deadline) {
          for (auto& slot : mine) slot.complete = false;
          break;
        }
        const FnFacts facts = compute_facts(corpus.at(i), ctx.exact, opts.corrupt_rank);
        for (std::size_t k = 0; k < selected.size(); ++k) {
          const FnCheck& check = *selected[k];
          if (facts.n > check.max_arity) continue;
          if (check.applies && !check.applies(facts)) continue;
          ++mine[k].checked;
          if (auto message = check.run(facts, ctx)) {
            ++mine[k].failures;
            if (i < mine[k].first_index) {
              mine[k].first_index = i;
              mine[k].first_message = std::move(*message);
            }
          }
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& thread : threads) thread.join();
  }
  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);

  Report report;
  for (std::size_t k = 0; k < selected.size(); ++k) {
    CheckResult row;
    row.check = selected[k]->name;
    row.corpus = corpus.describe();
    std::uint64_t first = std::numeric_limits<std::uint64_t>::max();
    for (int w = 0; w < jobs; ++w) {
      row.checked += slots[w][k].checked;
      row.failures += slots[w][k].failures;
      row.complete = row.complete && slots[w][k].complete;
      if (slots[w][k].first_index < first) {
        first = slots[w][k].first_index;
        row.first_failure = slots[w][k].first_message;
      }
    }
    report.checks.push_back(std::move(row));
  }
  return report;
}

Report run_composition_suite(const CompositionCorpus& corpus, const SuiteOptions& opts) {
  validate_check_names(opts.checks);
  const std::vector<std::string> names = composition_check_names();
  std::vector<Slot> slots(names.size());
  auto slot_of = [&](const std::string& name) -> Slot* {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return &slots[k];
    return nullptr;
  };
  auto record = [&](const std::string& name, std::uint64_t index,
                    const Failure& failure) {
    Slot* slot = slot_of(name);
    ++slot->checked;
    if (failure) {
      ++slot->failures;
      if (index < slot->first_index) {
        slot->first_index = index;
        slot->first_message = *failure;
      }
    }
  };

  ExactOptions exact = opts.exact;
  exact.progress = nullptr;
  const bool bounded = opts.budget_ms > 0;
  const auto deadline = Clock::now() + std::chrono::milliseconds(opts.budget_ms);
  const int corrupt = opts.corrupt_rank ? 1 : 0;

  for (std::uint64_t i = 0; i < corpus.size(); ++i) {
    if (bounded && Clock::now() >= deadline) {
      for (auto& slot : slots) slot.complete = false;
      break;
    }
    const Composition& comp = corpus.at(i);
    int total = 0;
    for (const auto& inner : comp.inners) total += inner.arity();
    if (total > exact.effective_cap()) continue;

    bool nonconstant = !comp.outer.is_constant();
    bool uniform = true;
    for (const auto& inner : comp.inners) {
      nonconstant = nonconstant && !inner.is_constant();
      uniform = uniform && inner == comp.inners.front();
    }

    const BoolFun h = comp.build(exact.effective_cap());
    std::string id = fn_id(comp.outer) + " o [";
    for (std::size_t b = 0; b < comp.inners.size(); ++b)
      id += (b ? ", " : "") + fn_id(comp.inners[b]);
    id += "]";

    const int depth_f = opt_depth(comp.outer, exact).value;
    const int rank_h = opt_rank(h, exact).value + corrupt;

    if (uniform && nonconstant && name_selected(opts.checks, "compose_sandwich")) {
      const int rank_g = opt_rank(comp.inners.front(), exact).value;
      const long long lower = static_cast<long long>(depth_f) * (rank_g - 1) + 1;
      const long long upper = static_cast<long long>(depth_f) * rank_g;
      Failure failure;
      if (rank_h < lower || rank_h > upper) {
        failure = id + ": composed rank " + std::to_string(rank_h) + " outside [" +
                  std::to_string(lower) + ", " + std::to_string(upper) + "]";
      }
      record("compose_sandwich", i, failure);
    }
    if (uniform && nonconstant && name_selected(opts.checks, "depth_compose")) {
      const int depth_g = opt_depth(comp.inners.front(), exact).value;
      const int depth_h = opt_depth(h, exact).value;
      Failure failure;
      if (depth_h != depth_f * depth_g) {
        failure = id + ": composed depth " + std::to_string(depth_h) +
                  " != " + std::to_string(depth_f) + "*" + std::to_string(depth_g);
      }
      record("depth_compose", i, failure);
    }
    if (nonconstant && name_selected(opts.checks, "compose_weighted_lb")) {
      std::vector<int> weights;
      for (const auto& inner : comp.inners)
        weights.push_back(opt_rank(inner, exact).value - 1);
      const long long lower = opt_weighted_depth(comp.outer, weights, exact).value + 1;
      Failure failure;
      if (rank_h < lower) {
        failure = id + ": composed rank " + std::to_string(rank_h) +
                  " below weighted-depth bound " + std::to_string(lower);
      }
      record("compose_weighted_lb", i, failure);
    }
  }

  Report report;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!name_selected(opts.checks, names[k])) continue;
    CheckResult row;
    row.check = names[k];
    row.corpus = corpus.describe();
    row.checked = slots[k].checked;
    row.failures = slots[k].failures;
    row.first_failure = slots[k].first_message;
    row.complete = slots[k].complete;
    report.checks.push_back(std::move(row));
  }
  return report;
}

namespace {

struct HeavyFacts {
  int rank = 0;
  CertStats cert;
};

HeavyFacts compute_heavy(const SuiteOptions& opts) {
  const BoolFun h = BoolFun::iterate(catalog::tribes_dual(2, 2), 2);
  HeavyFacts facts;
  facts.cert = certificates(h, opts.exact);
  facts.rank = opt_rank(h, opts.exact).value + (opts.corrupt_rank ? 1 : 0);
  return facts;
}

CheckResult named_row(const char* name) {
  CheckResult row;
  row.check = name;
  row.corpus = "named";
  return row;
}

void expect(CheckResult& row, bool ok, const std::string& what) {
  ++row.checked;
  if (!ok) {
    ++row.failures;
    if (row.first_failure.empty()) row.first_failure = what;
  }
}

CheckResult check_counterexamples(const SuiteOptions& opts,
                                  const std::optional<HeavyFacts>& heavy) {
  CheckResult row = named_row("counterexamples");
  ExactOptions exact = opts.exact;
  exact.progress = nullptr;
  const int corrupt = opts.corrupt_rank ? 1 : 0;

  // Majority-or-parity: rank drops below both one-sided certificates.
  for (int n : {6, 8}) {
    const std::array<std::pair<const char*, BoolFun>, 2> variants = {
        std::pair<const char*, BoolFun>{"strict", catalog::maj_or_parity(n)},
        std::pair<const char*, BoolFun>{
            "inclusive", BoolFun::from_lambda(n, [n](std::uint32_t x) {
              const int ones = std::popcount(x);
              return 2 * ones >= n || (ones & 1) != 0;
            })},
    };
    for (const auto& [tag, f] : variants) {
      const CertStats cert = certificates(f, exact);
      const int rank = opt_rank(f, exact).value + corrupt;
      expect(row, rank < std::min(cert.c0, cert.c1),
             fn_id(f) + ": " + tag + " majority-or-parity n=" + std::to_string(n) +
                 ": rank " + std::to_string(rank) + " not below min(C0,C1) = " +
                 std::to_string(std::min(cert.c0, cert.c1)));
    }
  }

  // Average certificate complexity falls on either side of the rank.
  {
    const BoolFun f = catalog::and_fn(3);
    const CertStats cert = certificates(f, exact);
    const int rank = opt_rank(f, exact).value + corrupt;
    expect(row, cert.c_avg == Rational(5, 4),
           fn_id(f) + ": C_avg(AND_3) = " + rational_string(cert.c_avg) + " != 5/4");
    expect(row, Rational(rank) < cert.c_avg,
           fn_id(f) + ": rank " + std::to_string(rank) + " not below C_avg");
  }
  {
    const BoolFun f = catalog::tribes_dual(3, 2);
    const CertStats cert = certificates(f, exact);
    const int rank = opt_rank(f, exact).value + corrupt;
    expect(row, cert.c_avg == Rational(155, 64),
           fn_id(f) + ": C_avg = " + rational_string(cert.c_avg) + " != 155/64");
    expect(row, cert.c_avg < Rational(rank),
           fn_id(f) + ": C_avg not below rank " + std::to_string(rank));
  }

  // Tightness of rank <= (C0-1)(C1-1)+1 at the base of the iterated family.
  {
    const BoolFun f = catalog::tribes_dual(2, 2);
    const CertStats cert = certificates(f, exact);
    const int rank = opt_rank(f, exact).value + corrupt;
    expect(row, cert.c0 == 2 && cert.c1 == 2,
           fn_id(f) + ": certificates (" + std::to_string(cert.c0) + ", " +
               std::to_string(cert.c1) + ") != (2, 2)");
    expect(row, rank == (cert.c0 - 1) * (cert.c1 - 1) + 1,
           fn_id(f) + ": rank " + std::to_string(rank) + " not tight");
  }
  if (heavy) {
    expect(row, heavy->cert.c0 == 4 && heavy->cert.c1 == 4,
           "iterated tribes_dual(2,2): certificates (" + std::to_string(heavy->cert.c0) +
               ", " + std::to_string(heavy->cert.c1) + ") != (4, 4)");
    expect(row, heavy->rank >= 5,
           "iterated tribes_dual(2,2): rank " + std::to_string(heavy->rank) +
               " below C^2/4 + 1 = 5");
  }
  return row;
}

void count_leaves(const DNodePtr& node, long long& zeros, long long& ones) {
  if (node->is_leaf()) {
    ++(node->leaf_value ? ones : zeros);
    return;
  }
  count_leaves(node->lo, zeros, ones);
  count_leaves(node->hi, zeros, ones);
}

CheckResult check_tribes_leaves(const SuiteOptions& opts) {
  CheckResult row = named_row("tribes_leaves");
  ExactOptions exact = opts.exact;
  exact.progress = nullptr;
  const std::array<BlockShape, 4> shapes = {
      BlockShape{2, 2}, BlockShape{2, 3}, BlockShape{3, 2}, BlockShape{3, 3}};
  for (const BlockShape& shape : shapes) {
    const BoolFun f = catalog::tribes_dual(shape.rows, shape.cols);
    const SizeResult best = opt_size(f, exact);
    const std::string id = fn_id(f) + ": tribes_dual(" + std::to_string(shape.rows) +
                           "," + std::to_string(shape.cols) + ")";
    long long zeros = 0, ones = 0;
    count_leaves(best.witness.root(), zeros, ones);
    expect(row, best.witness.computes(f), id + ": size witness is not the function");
    expect(row, best.witness.size() == best.value,
           id + ": witness has " + std::to_string(best.witness.size()) +
               " leaves but optimum is " + std::to_string(best.value));
    expect(row, ones >= ipow(shape.cols, shape.rows),
           id + ": " + std::to_string(ones) + " 1-leaves, expected >= " +
               std::to_string(ipow(shape.cols, shape.rows)));
    expect(row, zeros >= shape.rows,
           id + ": " + std::to_string(zeros) + " 0-leaves, expected >= " +
               std::to_string(shape.rows));
  }
  return row;
}

CheckResult check_iterated_bounds(const SuiteOptions& opts,
                                  const std::optional<HeavyFacts>& heavy) {
  CheckResult row = named_row("iterated_bounds");
  ExactOptions exact = opts.exact;
  exact.progress = nullptr;
  const int corrupt = opts.corrupt_rank ? 1 : 0;

  auto check_instance = [&](const BoolFun& f, int k, std::optional<int> known) {
    const int d = opt_depth(f, exact).value;
    const int r = opt_rank(f, exact).value;
    const BoolFun h = BoolFun::iterate(f, k);
    const int rank_h =
        known ? *known : opt_rank(h, exact).value + corrupt;
    const long long lower = ipow(d, k - 1) * (r - 1) + 1;
    const long long upper = ipow(d, k - 1) * r;
    expect(row, lower <= rank_h && rank_h <= upper,
           fn_id(h) + ": rank of iterate(" + fn_id(f) + ", " + std::to_string(k) +
               ") = " + std::to_string(rank_h) + " outside [" + std::to_string(lower) +
               ", " + std::to_string(upper) + "]");
  };

  for (std::uint64_t t = 1; t <= 14; ++t) {
    const BoolFun f = BoolFun::from_words(2, {t});
    check_instance(f, 2, std::nullopt);
    check_instance(f, 3, std::nullopt);
  }
  check_instance(catalog::majority(3), 2, std::nullopt);
  if (heavy) {
    check_instance(catalog::tribes_dual(2, 2), 2, heavy->rank);
    expect(row, heavy->rank == 6,
           "iterated tribes_dual(2,2): rank " + std::to_string(heavy->rank) + " != 6");
  }
  return row;
}

Report timed_out(const std::vector<std::string>& names, const std::string& corpus,
                 const std::vector<std::string>& wanted) {
  Report report;
  for (const auto& name : names) {
    if (!name_selected(wanted, name)) continue;
    CheckResult row;
    row.check = name;
    row.corpus = corpus;
    row.complete = false;
    report.checks.push_back(std::move(row));
  }
  return report;
}

}  // namespace

Report run_named_checks(const SuiteOptions& opts) {
  validate_check_names(opts.checks);
  std::optional<HeavyFacts> heavy;
  if (opts.exact.heavy &&
      (name_selected(opts.checks, "counterexamples") ||
       name_selected(opts.checks, "iterated_bounds")))
    heavy = compute_heavy(opts);
  Report report;
  if (name_selected(opts.checks, "counterexamples"))
    report.checks.push_back(check_counterexamples(opts, heavy));
  if (name_selected(opts.checks, "tribes_leaves"))
    report.checks.push_back(check_tribes_leaves(opts));
  if (name_selected(opts.checks, "iterated_bounds"))
    report.checks.push_back(check_iterated_bounds(opts, heavy));
  return report;
}

bool Report::all_passed() const {
  for (const auto& row : checks)
    if (row.failures != 0) return false;
  return true;
}

bool Report::complete() const {
  for (const auto& row : checks)
    if (!row.complete) return false;
  return true;
}

void Report::append(Report other) {
  for (auto& row : other.checks) checks.push_back(std::move(row));
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : checks) {
    rows.push_back({{"check", row.check},
                    {"corpus", row.corpus},
                    {"checked", row.checked},
                    {"failures", row.failures},
                    {"first_failure", row.first_failure},
                    {"complete", row.complete}});
  }
  return nlohmann::ordered_json{
      {"all_passed", all_passed()}, {"complete", complete()}, {"checks", rows}};
}

std::string Report::table() const {
  std::size_t check_width = 5, corpus_width = 6;
  for (const auto& row : checks) {
    check_width = std::max(check_width, row.check.size());
    corpus_width = std::max(corpus_width, row.corpus.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(check_width) + 2) << "check"
      << std::setw(static_cast<int>(corpus_width) + 2) << "corpus" << std::right
      << std::setw(9) << "checked" << std::setw(6) << "fail"
      << "  " << std::left << std::setw(9) << "status"
      << "first failure" << '\n';
  for (const auto& row : checks) {
    const char* status =
        row.failures != 0 ? "FAIL" : (row.complete ? "ok" : "partial");
    out << std::left << std::setw(static_cast<int>(check_width) + 2) << row.check
        << std::setw(static_cast<int>(corpus_width) + 2) << row.corpus << std::right
        << std::setw(9) << row.checked << std::setw(6) << row.failures << "  "
        << std::left << std::setw(9) << status << row.first_failure << '\n';
  }
  return out.str();
}

Report run_standard(const StandardOptions& opts) {
  validate_check_names(opts.suite.checks);
  Report report;
  const auto start = Clock::now();
  const std::uint64_t budget = opts.suite.budget_ms;

  // Remaining wall-clock budget in ms; -1 means unlimited, 0 means spent.
  auto remaining_ms = [&]() -> std::int64_t {
    if (budget == 0) return -1;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             Clock::now() - start)
                             .count();
    return std::max<std::int64_t>(static_cast<std::int64_t>(budget) - elapsed, 0);
  };
  auto stage_opts = [&](std::int64_t rem) {
    SuiteOptions stage = opts.suite;
    stage.budget_ms = rem < 0 ? 0 : static_cast<std::uint64_t>(std::max<std::int64_t>(rem, 1));
    return stage;
  };

  auto run_functions = [&](const Corpus& corpus) {
    const std::int64_t rem = remaining_ms();
    if (rem == 0)
      report.append(timed_out(check_names(), corpus.describe(), opts.suite.checks));
    else
      report.append(run_suite(corpus, stage_opts(rem)));
  };
  auto run_compositions = [&](const CompositionCorpus& corpus) {
    const std::int64_t rem = remaining_ms();
    if (rem == 0)
      report.append(
          timed_out(composition_check_names(), corpus.describe(), opts.suite.checks));
    else
      report.append(run_composition_suite(corpus, stage_opts(rem)));
  };

  if (opts.exhaustive_n >= 0) run_functions(Corpus::exhaustive(opts.exhaustive_n));
  if (opts.symmetric_n >= 1) run_functions(Corpus::all_symmetric(opts.symmetric_n));
  if (opts.catalog_max_arity >= 2) run_functions(Corpus::catalog(opts.catalog_max_arity));
  if (opts.random_n >= 1 && opts.random_count > 0)
    run_functions(Corpus::random(opts.random_n, opts.random_count, opts.seed));
  if (opts.compose_outer >= 1 && opts.compose_inner >= 1) {
    run_compositions(
        CompositionCorpus::exhaustive_pairs(opts.compose_outer, opts.compose_inner));
    if (opts.random_pairs > 0)
      run_compositions(CompositionCorpus::random_pairs(3, 3, opts.random_pairs, opts.seed));
    run_compositions(CompositionCorpus::mixed(9));
  }
  if (opts.named) {
    const std::int64_t rem = remaining_ms();
    if (rem == 0)
      report.append(timed_out(named_check_names(), "named", opts.suite.checks));
    else
      report.append(run_named_checks(stage_opts(rem)));
  }
  return report;
}

}  // namespace dtrank
