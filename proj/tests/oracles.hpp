#pragma once

// Brute-force reference implementations used only by the tests.  They work
// on plain 0/1 vectors and recurse without memoization so the optimized
// library code is checked against an independent computation.  Intended for
// tiny arities (the rank/depth/size recursions are O(2n)!! paths).

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdint>
#include <functional>
#include <vector>

#include "dtrank/boolfun.hpp"
#include "dtrank/util.hpp"

namespace oracle {

struct Table {
  int n = 0;
  std::vector<int> bits;  // 2^n entries
};

inline Table table_of(const dtrank::BoolFun& f) {
  Table t;
  t.n = f.arity();
  t.bits.resize(std::size_t(1) << f.arity());
  for (std::uint32_t x = 0; x < t.bits.size(); ++x)
    t.bits[x] = f.evaluate(x) ? 1 : 0;
  return t;
}

inline bool constant(const Table& t) {
  return std::adjacent_find(t.bits.begin(), t.bits.end(),
                            std::not_equal_to<>()) == t.bits.end();
}

//! Fix variable `var` to `value`; free variables keep their order.
inline Table cofactor(const Table& t, int var, int value) {
  Table r;
  r.n = t.n - 1;
  r.bits.reserve(t.bits.size() / 2);
  for (std::uint32_t x = 0; x < t.bits.size(); ++x)
    if (((x >> var) & 1u) == std::uint32_t(value)) r.bits.push_back(t.bits[x]);
  return r;
}

inline int rank(const Table& t) {
  if (constant(t)) return 0;
  int best = t.n;
  for (int i = 0; i < t.n; ++i) {
    const int r0 = rank(cofactor(t, i, 0));
    const int r1 = rank(cofactor(t, i, 1));
    best = std::min(best, r0 == r1 ? r0 + 1 : std::max(r0, r1));
  }
  return best;
}

inline int depth(const Table& t) {
  if (constant(t)) return 0;
  int best = t.n;
  for (int i = 0; i < t.n; ++i)
    best = std::min(best, 1 + std::max(depth(cofactor(t, i, 0)),
                                       depth(cofactor(t, i, 1))));
  return best;
}

inline long long size(const Table& t) {
  if (constant(t)) return 1;
  long long best = LLONG_MAX;
  for (int i = 0; i < t.n; ++i)
    best = std::min(best, size(cofactor(t, i, 0)) + size(cofactor(t, i, 1)));
  return best;
}

inline long long weighted_depth(const Table& t, std::vector<int> weights) {
  if (constant(t)) return 0;
  long long best = LLONG_MAX;
  for (int i = 0; i < t.n; ++i) {
    std::vector<int> rest = weights;
    rest.erase(rest.begin() + i);
    const long long cost =
        weights[i] + std::max(weighted_depth(cofactor(t, i, 0), rest),
                              weighted_depth(cofactor(t, i, 1), rest));
    best = std::min(best, cost);
  }
  return best;
}

//! Minimum certificate size at input x, by searching subsets in
//! increasing popcount order.
inline int cert_at(const Table& t, std::uint32_t x) {
  for (int k = 0; k <= t.n; ++k) {
    for (std::uint32_t s = 0; s < t.bits.size(); ++s) {
      if (std::popcount(s) != k) continue;
      bool ok = true;
      for (std::uint32_t y = 0; y < t.bits.size() && ok; ++y)
        if ((y & s) == (x & s) && t.bits[y] != t.bits[x]) ok = false;
      if (ok) return k;
    }
  }
  return t.n;
}

struct Certs {
  int c0 = 0, c1 = 0, c = 0, c_min = 0;
  dtrank::Rational c_avg{0};
};

inline Certs certs(const Table& t) {
  Certs out;
  out.c_min = t.n;
  long long sum = 0;
  for (std::uint32_t x = 0; x < t.bits.size(); ++x) {
    const int c = cert_at(t, x);
    sum += c;
    (t.bits[x] ? out.c1 : out.c0) = std::max(t.bits[x] ? out.c1 : out.c0, c);
    out.c_min = std::min(out.c_min, c);
  }
  out.c = std::max(out.c0, out.c1);
  out.c_avg = dtrank::Rational(sum, static_cast<long long>(t.bits.size()));
  return out;
}

//! Minimum number of variables whose fixing makes the function constant.
inline int kill(const Table& t) {
  int best = t.n;
  for (std::uint32_t x = 0; x < t.bits.size(); ++x)
    best = std::min(best, cert_at(t, x));
  return best;
}

//! Raw correlation sum  sum_x (-1)^{f(x)} (-1)^{<s,x>}  (2^n times the
//! Fourier coefficient of the +/-1 version of f).
inline long long coefficient(const Table& t, std::uint32_t s) {
  long long sum = 0;
  for (std::uint32_t x = 0; x < t.bits.size(); ++x) {
    const int sign = (std::popcount(x & s) & 1) != 0 ? -1 : 1;
    sum += (t.bits[x] != 0 ? -1 : 1) * sign;
  }
  return sum;
}

inline long long spar(const Table& t) {
  long long count = 0;
  for (std::uint32_t s = 0; s < t.bits.size(); ++s)
    if (coefficient(t, s) != 0) ++count;
  return count;
}

}  // namespace oracle
