#include "implode/precision.hpp"

#include <cmath>
#include <stdexcept>

namespace implode {

namespace {
std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits)
    : lock_(precision_mutex()), saved_digits10_(Real::default_precision()), bits_(bits) {
  if (bits < kMinBits) throw std::invalid_argument("precision below 64 bits");
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned current_bits() {
  return static_cast<unsigned>(std::floor((Real::default_precision() - 1) / 0.30102999566398120));
}

std::string to_exact_string(const Real& x, unsigned bits) {
  // bits*log10(2) + 2 significant digits always round-trip.
  auto digits = static_cast<std::streamsize>(std::ceil(bits * 0.30102999566398120)) + 2;
  return x.str(digits, std::ios_base::scientific);
}

Real parse_real(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Real(text);
  Real num(text.substr(0, slash));
  Real den(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in " + text);
  return num / den;
}

}  // namespace implode
