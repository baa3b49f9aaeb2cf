#pragma once

#include "implode/fields.hpp"

#include <functional>
#include <string>

namespace implode {

// Numerical sign certificate on an open interval: the function is sampled at
// cell centres and each cell is accepted if sign*f exceeds half a cell width
// times a guarded Lipschitz bound taken from the analytic derivative.
struct SignCertificate {
  std::string name;
  double lo = 0, hi = 0;
  int expected_sign = 0;
  std::size_t samples = 0;
  bool holds = false;
  double min_value = 0;        // min over samples of expected_sign * f
  double min_guarded = 0;      // min over cells of expected_sign * f - L h / 2
  double worst_tau = 0;        // abscissa of min_guarded
  double max_lipschitz = 0;
};

inline constexpr std::size_t kDefaultCertificateSamples = 4096;
inline constexpr double kLipschitzGuard = 2.0;

SignCertificate certify_sign(const std::string& name, const std::function<Jet<double>(double)>& f,
                             double lo, double hi, int expected_sign,
                             std::size_t samples = kDefaultCertificateSamples);

}  // namespace implode
