#include "dtrank/boolfun.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace dtrank {

namespace {

constexpr std::uint64_t kVarMask[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
    0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
};

std::size_t word_count(int n) {
  return n <= 6 ? 1 : (std::size_t{1} << (n - 6));
}

std::uint64_t tail_mask(int n) {
  return n >= 6 ? ~0ull : ((1ull << (1u << n)) - 1ull);
}

// Keep the bits of w whose index has bit `var` equal to `value`
// (var < 6) and pack them into the low 32 bits.
std::uint64_t squeeze(std::uint64_t w, int var, bool value) {
  std::uint64_t t = (w >> (static_cast<unsigned>(value) << var)) & kVarMask[var];
  for (int s = var; s < 5; ++s) t = (t | (t >> (1u << s))) & kVarMask[s + 1];
  return t;
}

int hex_digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

int Subcube::codim() const { return std::popcount(support); }

Subcube Subcube::fixed(int var, bool value) const {
  const std::uint32_t bit = 1u << var;
  if (support & bit) throw std::invalid_argument("subcube: variable already fixed");
  return Subcube{support | bit, values | (value ? bit : 0u)};
}

BoolFun::BoolFun(int n) : arity_(n), words_(word_count(n), 0) {
  if (n < 0 || n > kMaxArity)
    throw std::invalid_argument("arity must be between 0 and " + std::to_string(kMaxArity));
}

BoolFun BoolFun::constant(int n, bool value) {
  BoolFun r(n);
  if (value) {
    std::fill(r.words_.begin(), r.words_.end(), ~0ull);
    r.words_.back() &= tail_mask(n);
  }
  return r;
}

BoolFun BoolFun::from_words(int n, std::vector<std::uint64_t> words) {
  BoolFun r(n);
  if (words.size() != word_count(n))
    throw std::invalid_argument("truth table has wrong word count for arity");
  r.words_ = std::move(words);
  if ((r.words_.back() & ~tail_mask(n)) != 0)
    throw std::invalid_argument("truth table has nonzero padding bits");
  return r;
}

BoolFun BoolFun::from_hex(int n, const std::string& hex) {
  BoolFun r(n);
  const std::size_t digits = std::max<std::size_t>(1, (std::size_t{1} << n) / 4);
  if (hex.size() != digits)
    throw std::invalid_argument("expected " + std::to_string(digits) +
                                " hex digits for arity " + std::to_string(n));
  for (std::size_t d = 0; d < digits; ++d) {
    const int v = hex_digit_value(hex[d]);
    if (v < 0) throw std::invalid_argument("invalid hex digit in truth table");
    r.words_[d / 16] |= static_cast<std::uint64_t>(v) << ((d % 16) * 4);
  }
  if ((r.words_.back() & ~tail_mask(n)) != 0)
    throw std::invalid_argument("truth table has nonzero padding bits");
  return r;
}

bool BoolFun::evaluate(std::uint32_t x) const {
  check_index(x);
  return get(x);
}

void BoolFun::set(std::uint32_t x, bool v) {
  check_index(x);
  const std::uint64_t bit = 1ull << (x & 63u);
  if (v)
    words_[x >> 6] |= bit;
  else
    words_[x >> 6] &= ~bit;
}

void BoolFun::check_index(std::uint32_t x) const {
  if (x >= table_size()) throw std::out_of_range("input index exceeds 2^arity");
}

BoolFun BoolFun::cofactor(int var, bool value) const {
  if (var < 0 || var >= arity_) throw std::invalid_argument("cofactor: no such variable");
  BoolFun r(arity_ - 1);
  if (arity_ <= 6) {
    r.words_[0] = squeeze(words_[0], var, value) & tail_mask(arity_ - 1);
    return r;
  }
  if (var >= 6) {
    // Whole words move: output word w reads the input word whose index
    // has bit (var - 6) equal to `value`.
    const int p = var - 6;
    const std::size_t low = (std::size_t{1} << p) - 1;
    for (std::size_t w = 0; w < r.words_.size(); ++w) {
      const std::size_t src = ((w >> p) << (p + 1)) |
                              (static_cast<std::size_t>(value) << p) | (w & low);
      r.words_[w] = words_[src];
    }
    return r;
  }
  // In-word extraction: each pair of input words yields one output word.
  for (std::size_t w = 0; w < r.words_.size(); ++w)
    r.words_[w] = squeeze(words_[2 * w], var, value) |
                  (squeeze(words_[2 * w + 1], var, value) << 32);
  return r;
}

BoolFun BoolFun::restricted(const Subcube& cube) const {
  if (cube.support >= (1u << arity_) && cube.support != 0)
    throw std::invalid_argument("restriction mentions variables beyond the arity");
  if ((cube.values & ~cube.support) != 0)
    throw std::invalid_argument("restriction values outside the support");
  BoolFun r = *this;
  // Fix from the highest variable down so lower indices stay stable.
  for (int v = arity_ - 1; v >= 0; --v)
    if (cube.support & (1u << v)) r = r.cofactor(v, (cube.values >> v) & 1u);
  return r;
}

BoolFun BoolFun::compose(const BoolFun& outer, const std::vector<BoolFun>& inners,
                         int arity_cap) {
  if (static_cast<int>(inners.size()) != outer.arity())
    throw std::invalid_argument("compose: need one inner function per outer variable");
  int total = 0;
  for (const BoolFun& g : inners) total += g.arity();
  if (total > arity_cap || total > kMaxArity)
    throw CapExceeded("compose: composite arity " + std::to_string(total) +
                      " exceeds the cap");
  BoolFun r(total);
  for (std::uint32_t x = 0; x < (1u << total); ++x) {
    std::uint32_t y = 0, shift = 0;
    for (std::size_t i = 0; i < inners.size(); ++i) {
      const int m = inners[i].arity();
      const std::uint32_t block = (x >> shift) & ((1u << m) - 1u);
      y |= static_cast<std::uint32_t>(inners[i].get(block)) << i;
      shift += m;
    }
    if (outer.get(y)) r.set(x, true);
  }
  return r;
}

BoolFun BoolFun::iterate(const BoolFun& f, int k, int arity_cap) {
  if (k < 1) throw std::invalid_argument("iterate: k must be at least 1");
  BoolFun r = f;
  for (int i = 1; i < k; ++i)
    r = compose(f, std::vector<BoolFun>(f.arity(), r), arity_cap);
  return r;
}

BoolFun BoolFun::negated() const {
  BoolFun r = *this;
  for (std::uint64_t& w : r.words_) w = ~w;
  r.words_.back() &= tail_mask(arity_);
  return r;
}

BoolFun BoolFun::dual() const {
  const std::uint32_t all = table_size() - 1;
  BoolFun r(arity_);
  for (std::uint32_t x = 0; x < table_size(); ++x)
    if (!get(all ^ x)) r.set(x, true);
  return r;
}

BoolFun BoolFun::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != arity_)
    throw std::invalid_argument("permutation size must equal the arity");
  std::vector<bool> seen(arity_, false);
  for (int p : perm) {
    if (p < 0 || p >= arity_ || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
  BoolFun r(arity_);
  for (std::uint32_t x = 0; x < table_size(); ++x) {
    std::uint32_t y = 0;
    for (int i = 0; i < arity_; ++i)
      if ((x >> i) & 1u) y |= 1u << perm[i];
    if (get(x)) r.set(y, true);
  }
  return r;
}

bool BoolFun::is_constant() const { return constant_value().has_value(); }

std::optional<bool> BoolFun::constant_value() const {
  bool all_zero = true, all_one = true;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t full = (i + 1 == words_.size()) ? tail_mask(arity_) : ~0ull;
    all_zero &= words_[i] == 0;
    all_one &= words_[i] == full;
  }
  if (all_zero) return false;
  if (all_one) return true;
  return std::nullopt;
}

std::optional<SymmetricProfile> BoolFun::symmetric_profile() const {
  SymmetricProfile p;
  p.values.assign(arity_ + 1, 0);
  std::vector<bool> filled(arity_ + 1, false);
  for (std::uint32_t x = 0; x < table_size(); ++x) {
    const int w = std::popcount(x);
    const std::uint8_t v = get(x) ? 1 : 0;
    if (!filled[w]) {
      filled[w] = true;
      p.values[w] = v;
    } else if (p.values[w] != v) {
      return std::nullopt;
    }
  }
  return p;
}

std::uint32_t BoolFun::ones_count() const {
  std::uint32_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::uint32_t>(std::popcount(w));
  return c;
}

std::string BoolFun::to_hex() const {
  const std::size_t digits = std::max<std::size_t>(1, (std::size_t{1} << arity_) / 4);
  std::string s(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    const int v = static_cast<int>((words_[d / 16] >> ((d % 16) * 4)) & 0xf);
    s[d] = v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
  }
  return s;
}

std::size_t BoolFun::hash() const {
  // FNV-1a over the words, seeded with the arity.
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(arity_);
  for (std::uint64_t w : words_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

BoolFun function_from_profile(const SymmetricProfile& profile) {
  const int n = profile.arity();
  if (n < 0 || n > kMaxArity) throw std::invalid_argument("profile has invalid length");
  return BoolFun::from_lambda(
      n, [&](std::uint32_t x) { return profile.values[std::popcount(x)] != 0; });
}

std::string rational_string(const Rational& r) {
  std::ostringstream out;
  out << r.numerator() << '/' << r.denominator();
  return out.str();
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text), 1);
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid rational: " + text);
  }
}

double rational_log2(const Rational& r) {
  return std::log2(static_cast<double>(r.numerator())) -
         std::log2(static_cast<double>(r.denominator()));
}

}  // namespace dtrank
