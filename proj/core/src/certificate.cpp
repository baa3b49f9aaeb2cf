#include "implode/certificate.hpp"

#include <cmath>
#include <limits>

namespace implode {

SignCertificate certify_sign(const std::string& name, const std::function<Jet<double>(double)>& f,
                             double lo, double hi, int expected_sign, std::size_t samples) {
  SignCertificate c;
  c.name = name;
  c.lo = lo;
  c.hi = hi;
  c.expected_sign = expected_sign;
  c.samples = samples;
  c.min_value = std::numeric_limits<double>::infinity();
  c.min_guarded = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / static_cast<double>(samples);
  bool ok = samples > 0 && hi > lo;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = lo + (static_cast<double>(i) + 0.5) * h;
    const Jet<double> j = f(t);
    const double v = expected_sign * j.v;
    const double lip = kLipschitzGuard * std::abs(j.d);
    const double guarded = v - lip * h / 2;
    if (!std::isfinite(v) || !std::isfinite(guarded)) ok = false;
    if (v < c.min_value) c.min_value = v;
    if (guarded < c.min_guarded) {
      c.min_guarded = guarded;
      c.worst_tau = t;
    }
    if (lip > c.max_lipschitz) c.max_lipschitz = lip;
  }
  c.holds = ok && c.min_value > 0 && c.min_guarded > 0;
  return c;
}

}  // namespace implode
