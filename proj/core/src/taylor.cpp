#include "implode/taylor.hpp"

#include "implode/errors.hpp"

#include <algorithm>
#include <cmath>

namespace implode {

namespace mp = boost::multiprecision;

namespace {

double log2_abs(const Real& x) {
  if (x == 0) return -HUGE_VAL;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.backend().data(), MPFR_RNDN);
  return std::log2(std::abs(m)) + static_cast<double>(e);
}

// Root-test radius from the upper half of the coefficients.
Real radius_estimate(const std::vector<Real>& c) {
  const int K = static_cast<int>(c.size()) - 1;
  double worst = -HUGE_VAL;
  for (int k = std::max(1, K / 2); k <= K; ++k) worst = std::max(worst, log2_abs(c[k]) / k);
  if (!std::isfinite(worst)) return Real(1e6);
  return mp::pow(Real(2), Real(-worst));
}

}  // namespace

TaylorCoeffs tu_taylor_coeffs(const Real& alpha_in, const Real& t0_in, const Real& u0_in, int K, bool with_x) {
  const Real al = at_current(alpha_in), t0 = at_current(t0_in);
  const Real P[4] = {-3 * al - (4 * al - 1) * t0 - (al - 2) * t0 * t0 + t0 * t0 * t0,
                     -(4 * al - 1) - 2 * (al - 2) * t0 + 3 * t0 * t0, -(al - 2) + 3 * t0, Real(1)};
  const Real g[3] = {2 - Real(4) / 3 * (al - 4) * t0 + Real(10) / 3 * t0 * t0,
                     -Real(4) / 3 * (al - 4) + Real(20) / 3 * t0, Real(10) / 3};
  TaylorCoeffs out;
  auto& c = out.u;
  c.reserve(K + 1);
  c.push_back(at_current(u0_in));
  std::vector<Real> D;
  D.reserve(K + 1);
  for (int k = 0; k < K; ++k) {
    Real Dk = 3 * (al - t0) * c[k];
    if (k >= 1) Dk -= 3 * c[k - 1];
    if (k < 4) Dk += P[k];
    D.push_back(Dk);
    Real E = 0;
    for (int i = 0; i <= k; ++i) E -= 2 * c[i] * c[k - i];
    for (int i = 0; i <= std::min(k, 2); ++i) E += g[i] * c[k - i];
    Real s = 0;
    for (int i = 1; i <= k; ++i) s += D[i] * (k - i + 1) * c[k - i + 1];
    if (D[0] == 0) fail(Errc::Pole, "Delta_tau vanishes at the expansion centre");
    c.push_back((E - s) / (D[0] * (k + 1)));
  }
  {
    Real DK = 3 * (al - t0) * c[K] - 3 * c[K - 1];
    if (K < 4) DK += P[K];
    D.push_back(DK);
  }
  if (with_x) {
    const Real one_t = 1 + t0;
    const Real sq[3] = {one_t * one_t, 2 * one_t, Real(1)};
    out.q.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
      Real num = c[k];
      if (k < 3) num -= sq[k];
      for (int i = 1; i <= k; ++i) num -= D[i] * out.q[k - i];
      out.q.push_back(num / D[0]);
    }
  }
  out.radius = radius_estimate(c);
  return out;
}

TaylorPath continue_tu(const ParamSet& p, const Real& t0, const Real& u0, const Real& x0, const Real& t_end,
                       const TaylorOptions& opt) {
  PrecisionScope scope(opt.bits);
  TaylorPath path;
  path.bits = opt.bits;
  path.order = opt.order > 0 ? opt.order : static_cast<int>(opt.bits / 2);
  const int K = path.order;
  const Real al = at_current(p.alpha);
  Real t = at_current(t0), u = at_current(u0), x = at_current(x0);
  const Real te = at_current(t_end);
  const int dir = te >= t ? 1 : -1;

  TaylorCoeffs tc = tu_taylor_coeffs(al, t, u, K, true);
  path.nodes.push_back({t, u, tc.u[1], x});
  for (int step = 0;; ++step) {
    if (step >= opt.max_steps) {
      path.stop = TaylorPath::Stop::MaxSteps;
      break;
    }
    Real remaining = mp::abs(te - t);
    if (remaining == 0) break;
    Real h = tc.radius * opt.radius_fraction;
    if (opt.max_step > 0 && h > opt.max_step) h = opt.max_step;
    bool last = h >= remaining;
    if (last) h = remaining;
    if (!last && h < opt.min_step) {
      path.stop = TaylorPath::Stop::RadiusCollapse;
      break;
    }
    const Real hs = dir * h;
    Real un = 0, dun = 0, xn = 0;
    for (int k = K; k >= 0; --k) un = un * hs + tc.u[k];
    for (int k = K; k >= 1; --k) dun = dun * hs + k * tc.u[k];
    for (int k = K; k >= 0; --k) xn = xn * hs + tc.q[k] / (k + 1);
    xn = x + xn * hs;
    double tail = log2_abs(tc.u[K]) + K * log2_abs(h);
    path.truncation_error += std::exp2(tail);
    t = last ? te : Real(t + hs);
    u = un;
    x = xn;
    path.nodes.push_back({t, u, dun, x});
    if (last) break;
    tc = tu_taylor_coeffs(al, t, u, K, true);
  }
  return path;
}

std::vector<Real> x_series_at_sonic(const SonicSeries& s) {
  PrecisionScope scope(s.precision_bits);
  const auto& a = s.coeffs;
  const Real al = s.params.alpha;
  const int K = s.K;
  const Real P[4] = {-3 * al, -(4 * al - 1), -(al - 2), Real(1)};
  const Real sq[3] = {Real(1), Real(2), Real(1)};
  std::vector<Real> D(K + 1), num(K + 1);
  for (int k = 0; k <= K; ++k) {
    D[k] = 3 * al * a[k];
    if (k >= 1) D[k] -= 3 * a[k - 1];
    if (k < 4) D[k] += P[k];
    num[k] = a[k];
    if (k < 3) num[k] -= sq[k];
  }
  // Both series vanish at tau = 0; divide out one power of tau.
  std::vector<Real> q(K);
  for (int k = 0; k < K; ++k) {
    Real v = num[k + 1];
    for (int i = 2; i <= k + 1; ++i) v -= D[i] * q[k + 1 - i];
    q[k] = v / D[1];
  }
  std::vector<Real> x(K + 1);
  x[0] = 0;
  for (int k = 0; k < K; ++k) x[k + 1] = q[k] / (k + 1);
  return x;
}

unsigned continuation_bits(double R, double t_from, double t_to) {
  double grow = R * std::log2(std::max(1.0, std::abs(t_to / t_from)));
  unsigned bits = static_cast<unsigned>(std::ceil(128 + grow + 64));
  return (bits + 63) / 64 * 64;
}

}  // namespace implode
