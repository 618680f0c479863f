#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtrank/boolfun.hpp"

namespace dtrank {

/*! Integer Walsh-Hadamard spectrum of a Boolean function in the +/-1
 *  encoding.  Entry S holds  sum_x (-1)^{f(x)} * (-1)^{<S,x>},  i.e. the
 *  usual Fourier coefficient scaled by 2^n, so everything stays exact.
 */
struct Spectrum {
  int n = 0;
  std::vector<long long> coeffs;  // indexed by the character's support mask

  //! Number of nonzero coefficients.
  long long spar() const;
  //! Nonzero coefficients with the empty character excluded.
  long long spar_tilde() const;
  //! Parseval: sum of squared entries equals 4^n.
  bool parseval_holds() const;
  //! JSON object mapping each nonzero mask (decimal string) to its value.
  nlohmann::ordered_json to_json() const;
};

Spectrum wht(const BoolFun& f);
//! Inverse transform; throws if the spectrum is not a +/-1 function's.
BoolFun inverse_wht(const Spectrum& s);

/*! Restriction-halving property for a variable set S (bit i set = x_{i+1}
 *  in S): if some assignment of S makes the restriction constant, then
 *  every assignment of S at least halves spar~.  Returns true when the
 *  property holds for this S (vacuously true when no assignment kills f).
 */
bool halving_check(const BoolFun& f, std::uint32_t s_mask);

}  // namespace dtrank
