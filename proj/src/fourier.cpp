#include "dtrank/fourier.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dtrank {

long long Spectrum::spar() const {
  long long c = 0;
  for (long long v : coeffs) c += v != 0;
  return c;
}

long long Spectrum::spar_tilde() const { return spar() - (coeffs[0] != 0 ? 1 : 0); }

bool Spectrum::parseval_holds() const {
  unsigned long long sum = 0;
  for (long long v : coeffs) sum += static_cast<unsigned long long>(v) * v;
  return sum == (1ull << (2 * n));
}

nlohmann::ordered_json Spectrum::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t s = 0; s < coeffs.size(); ++s)
    if (coeffs[s] != 0) j[std::to_string(s)] = coeffs[s];
  return j;
}

Spectrum wht(const BoolFun& f) {
  const int n = f.arity();
  Spectrum s;
  s.n = n;
  s.coeffs.resize(std::size_t{1} << n);
  for (std::uint32_t x = 0; x < f.table_size(); ++x) s.coeffs[x] = f.get(x) ? -1 : 1;
  for (int level = 0; level < n; ++level) {
    const std::size_t half = std::size_t{1} << level;
    for (std::size_t block = 0; block < s.coeffs.size(); block += 2 * half)
      for (std::size_t i = block; i < block + half; ++i) {
        const long long a = s.coeffs[i], b = s.coeffs[i + half];
        s.coeffs[i] = a + b;
        s.coeffs[i + half] = a - b;
      }
  }
  return s;
}

BoolFun inverse_wht(const Spectrum& s) {
  if (s.coeffs.size() != (std::size_t{1} << s.n))
    throw std::invalid_argument("spectrum has wrong length");
  std::vector<long long> v = s.coeffs;
  for (int level = 0; level < s.n; ++level) {
    const std::size_t half = std::size_t{1} << level;
    for (std::size_t block = 0; block < v.size(); block += 2 * half)
      for (std::size_t i = block; i < block + half; ++i) {
        const long long a = v[i], b = v[i + half];
        v[i] = a + b;
        v[i + half] = a - b;
      }
  }
  const long long scale = 1ll << s.n;
  BoolFun f = BoolFun::constant(s.n, false);
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (v[x] == scale) continue;
    if (v[x] == -scale)
      f.set(static_cast<std::uint32_t>(x), true);
    else
      throw std::invalid_argument("spectrum is not that of a Boolean function");
  }
  return f;
}

bool halving_check(const BoolFun& f, std::uint32_t s_mask) {
  if (s_mask == 0 || s_mask >= f.table_size())
    throw std::invalid_argument("halving_check: bad variable set");
  bool killed = false;
  std::vector<BoolFun> restrictions;
  // Enumerate assignments of S by iterating the submasks of s_mask.
  std::uint32_t rho = 0;
  while (true) {
    const BoolFun r = f.restricted(Subcube{s_mask, rho});
    killed |= r.is_constant();
    restrictions.push_back(r);
    if (rho == s_mask) break;
    rho = (rho - s_mask) & s_mask;  // next submask
  }
  if (!killed) return true;
  const long long bound = wht(f).spar_tilde();
  for (const BoolFun& r : restrictions)
    if (2 * wht(r).spar_tilde() > bound) return false;
  return true;
}

}  // namespace dtrank
