#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dtrank {

/*! Exact rational arithmetic for average certificate complexity and
 *  asymmetric game scores.  Values stay tiny (numerators bounded by
 *  n * 2^n for the arities this library accepts), so a 64-bit rational
 *  is always sufficient.
 */
using Rational = boost::rational<long long>;

//! Render a rational as "p/q" (e.g. "5/4", "3/1").
std::string rational_string(const Rational& r);

//! Parse "p/q" or a bare integer "p".  Throws std::invalid_argument on junk.
Rational parse_rational(const std::string& text);

//! log2 of a rational, as a double (the exact value is the rational itself).
double rational_log2(const Rational& r);

//! Raised when an expression cannot be parsed; keeps the offending offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

//! Raised when an exact computation would exceed the configured arity cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Raised by the game engine when a strategy breaks the rules
//! (querying a fixed variable, announcing an invalid distribution, ...).
class StrategyFault : public std::runtime_error {
 public:
  StrategyFault(std::string offender, const std::string& message)
      : std::runtime_error(offender + ": " + message), offender_(std::move(offender)) {}
  const std::string& offender() const { return offender_; }

 private:
  std::string offender_;
};

//! Insert bit `value` at position `pos` of `x`, shifting higher bits up.
constexpr std::uint32_t insert_bit(std::uint32_t x, int pos, bool value) {
  const std::uint32_t low = x & ((1u << pos) - 1u);
  const std::uint32_t high = (x >> pos) << (pos + 1);
  return high | (static_cast<std::uint32_t>(value) << pos) | low;
}

}  // namespace dtrank
