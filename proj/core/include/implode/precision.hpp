#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <mutex>
#include <string>

namespace implode {

using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultBits = 256;
inline constexpr unsigned kMinBits = 64;

unsigned bits_to_digits10(unsigned bits);

// Working precision for Reals created while the scope is alive. Boost keeps
// the default precision in a process-wide static, so scopes are serialized
// through a recursive mutex; nesting on one thread is allowed.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_digits10_;
  unsigned bits_;
};

unsigned current_bits();

// Copies and arithmetic keep the precision of their operands, not the scope
// default, so values crossing into a scope are rounded to it explicitly.
inline Real at_current(const Real& x) { return Real(x, Real::default_precision()); }

// Decimal string that parses back to the identical value at `bits`.
std::string to_exact_string(const Real& x, unsigned bits);
// Accepts ordinary decimals and "p/q" rationals.
Real parse_real(const std::string& text);

inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline long double to_ldouble(const Real& x) { return x.convert_to<long double>(); }

}  // namespace implode
