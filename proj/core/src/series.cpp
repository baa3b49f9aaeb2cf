#include "implode/series.hpp"

#include "implode/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace implode {

namespace mp = boost::multiprecision;

namespace {

double log2_abs(const Real& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.backend().data(), MPFR_RNDN);
  return std::log2(std::abs(m)) + static_cast<double>(e);
}

// sum_{j=lo}^{hi} a_j a_{m-j} using the pairing j <-> m - j.
Real paired_convolution(const std::vector<Real>& a, int lo, int hi, int m) {
  Real s = 0;
  if (lo > hi) return s;
  int j = lo, k = hi;
  while (j < k) {
    s += a[j] * a[m - j];
    ++j;
    --k;
  }
  s *= 2;
  if (j == k) s += a[j] * a[m - j];
  return s;
}

// Same sum in plain descending order; used only for the residual check.
Real descending_convolution(const std::vector<Real>& a, int lo, int hi, int m) {
  Real s = 0;
  for (int j = hi; j >= lo; --j) s += a[j] * a[m - j];
  return s;
}

struct RhsParts {
  Real value;
  double log2_max_term;
};

RhsParts rhs_with_scale(const ParamSet& p, const std::vector<Real>& a, const std::vector<double>& l2,
                        int n, bool paired) {
  const Real& al = p.alpha;
  Real c1 = (al - 2) * (n - 1) - Real(4) / 3 * (al - 4);
  Real c2 = -(Real(n) - Real(16) / 3);
  Real c3 = -Real(3) / 2 * al * (n + 1);
  Real c4 = Real(3) / 2 * n - 2;
  auto conv = paired ? paired_convolution : descending_convolution;
  Real s1 = conv(a, 2, n - 1, n + 1);
  Real s2 = conv(a, 1, n - 1, n);
  RhsParts out;
  out.value = c1 * a[n - 1] + c2 * a[n - 2] + c3 * s1 + c4 * s2;

  double mx = std::max(log2_abs(c1) + l2[n - 1], log2_abs(c2) + l2[n - 2]);
  double lc3 = log2_abs(c3), lc4 = log2_abs(c4);
  for (int j = 2; j <= n - 1; ++j) mx = std::max(mx, lc3 + l2[j] + l2[n + 1 - j]);
  for (int j = 1; j <= n - 1; ++j) mx = std::max(mx, lc4 + l2[j] + l2[n - j]);
  out.log2_max_term = mx;
  return out;
}

}  // namespace

double log_catalan(int m) {
  return std::lgamma(2.0 * m + 1) - 2 * std::lgamma(m + 1.0) - std::log(m + 1.0);
}

Real recurrence_rhs(const ParamSet& p, const std::vector<Real>& a, int n) {
  std::vector<double> l2(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) l2[i] = log2_abs(a[i]);
  return rhs_with_scale(p, a, l2, n, true).value;
}

Real SonicSeries::eval(const Real& tau, int order) const {
  PrecisionScope scope(precision_bits);
  int top = order < 0 ? K : std::min(order, K);
  Real t = at_current(tau), s = 0;
  for (int n = top; n >= 0; --n) s = s * t + coeffs[n];
  return s;
}

Real SonicSeries::deriv(const Real& tau, int order) const {
  PrecisionScope scope(precision_bits);
  int top = order < 0 ? K : std::min(order, K);
  Real t = at_current(tau), s = 0;
  for (int n = top; n >= 1; --n) s = s * t + n * coeffs[n];
  return s;
}

double SonicSeries::tail_estimate(double tau) const {
  double t = std::abs(tau);
  if (t == 0) return 0;
  double l = (log2_abs(coeffs[K]) + K * std::log2(t)) * std::log(2.0);
  double q = t * K_geo;
  if (q >= 1) return std::numeric_limits<double>::infinity();
  return std::exp(l) * q / (1 - q);
}

SonicSeries compute_sonic_series(const ParamSet& p_in, int K, const SeriesOptions& opt) {
  if (K < 1) fail(Errc::OutOfRange, "series order must be at least 1");
  unsigned bits = std::max(opt.precision_bits, p_in.bits);
  for (;;) {
    PrecisionScope scope(bits);
    ParamSet p = bits == p_in.bits ? p_in : params_from_R(p_in.R, bits);

    // gamma_n must stay resolvable at this precision for every n <= K.
    const Real thresh = p.R * mp::pow(Real(2), -static_cast<int>(bits - opt.guard_bits));
    for (int n = 2; n <= K; ++n) {
      if (mp::abs(p.R - n) <= thresh)
        fail(Errc::IntegerResonance, "delta(R - n) vanishes at working precision for n = " + std::to_string(n));
    }

    SonicSeries s;
    s.K = K;
    s.precision_bits = bits;
    s.coeffs.resize(K + 1);
    std::vector<double> l2(K + 1);
    s.coeffs[0] = 1;
    s.coeffs[1] = (2 * p.lambda + 4) / (3 * p.lambda);
    l2[0] = 0;
    l2[1] = log2_abs(s.coeffs[1]);
    double min_guard = bits;
    double max_res = 0;
    for (int n = 2; n <= K; ++n) {
      RhsParts e = rhs_with_scale(p, s.coeffs, l2, n, true);
      s.coeffs[n] = e.value / p.gamma(n);
      l2[n] = log2_abs(s.coeffs[n]);
      double lost = e.log2_max_term - log2_abs(e.value);
      min_guard = std::min(min_guard, bits - std::max(0.0, lost));
      RhsParts alt = rhs_with_scale(p, s.coeffs, l2, n, false);
      Real check = p.gamma(n) * s.coeffs[n] - alt.value;
      if (check != 0) max_res = std::max(max_res, std::exp2(log2_abs(check) - e.log2_max_term));
    }
    if (min_guard < opt.guard_bits) {
      if (opt.escalate && bits * 2 <= opt.max_bits) {
        bits *= 2;
        continue;
      }
      fail(Errc::PrecisionExhausted, "guard bits fell to " + std::to_string(min_guard));
    }
    s.params = p;
    s.min_guard_bits = min_guard;
    s.max_residual = max_res;

    double kg = 0, kc = 0;
    for (int n = 1; n <= K; ++n) {
      if (!std::isfinite(l2[n])) continue;
      kg = std::max(kg, std::exp2(l2[n] / n));
      if (n >= 2) {
        double lc = l2[n] * std::log(2.0) - log_catalan(n - 1);
        kc = std::max(kc, std::exp(lc / (n - SonicSeries::kBeta)));
      }
    }
    s.K_geo = kg;
    s.tau0 = kg > 0 ? 1 / (2 * kg) : 0;
    s.K_catalan = kc;
    return s;
  }
}

// ---- reformulation --------------------------------------------------------

ComparisonTables reformulate(const SonicSeries& s) {
  if (s.K < 5) fail(Errc::OutOfRange, "reformulation needs the series through n = 5");
  PrecisionScope scope(s.precision_bits);
  const ParamSet& p = s.params;
  const auto& a = s.coeffs;
  const Real& al = p.alpha;
  ComparisonTables t;
  t.A1 = 3 * al * a[2] - 3 * a[1] - al + 2;
  t.B1 = 3 * al * a[2] + 4 * a[1] + (7 * al - 22) / 3;
  t.A2 = 3 * al * a[3] - 3 * a[2] + 1;
  t.B2 = 3 * al * a[3] + 4 * a[2] - Real(16) / 3;
  t.A3 = 3 * al * a[4] - 3 * a[3];
  t.B3 = 3 * al * a[4] + 4 * a[3];
  t.A4 = 3 * al * a[5] - 3 * a[4];
  t.B4 = 3 * al * a[5] + 4 * a[4];
  t.det = t.A2 * t.A2 - t.A1 * t.A3;
  if (mp::abs(t.det) <= mp::pow(Real(2), -static_cast<int>(s.precision_bits - 32)))
    fail(Errc::DegenerateK, "A2^2 - A1 A3 vanishes");
  t.k1 = (t.A1 * t.A4 - t.A2 * t.A3) / t.det;
  t.k2 = (t.A3 * t.A3 - t.A4 * t.A2) / t.det;
  t.s1 = -t.B3 + (t.A2 - t.B2) * t.k1 + (2 * t.A1 - t.B1) * t.k2;
  t.s2 = -t.B4 + (t.A3 - t.B3) * t.k1 + (2 * t.A2 - t.B2) * t.k2;

  const Real Ap1sq = (p.A + 1) * (p.A + 1);
  t.g1 = -8 / Ap1sq;
  t.g0 = 8 * p.R / Ap1sq;
  t.p1 = -t.A1 / 2 + 4 * t.k1 / Ap1sq;
  t.p0 = -t.B1 / 2 - 4 * t.k1 * (p.R + 1) / Ap1sq;
  t.q1 = -t.A2 - t.A1 * t.k1 + 8 * t.k2 / Ap1sq;
  t.q0 = -t.B2 + (t.A1 - t.B1) * t.k1 - 8 * t.k2 * (p.R + 2) / Ap1sq;

  for (int n = 10; n <= s.K; ++n) {
    Real lhs = p.gamma(n) * a[n];
    Real terms[5] = {2 * t.p_t(Real(n)) * a[n - 1], t.q_t(Real(n)) * a[n - 2], t.s1 * a[n - 3],
                     t.s2 * a[n - 4], tilde_epsilon(t, p, a, n)};
    Real rhs = 0;
    Real scale = mp::abs(lhs);
    for (auto& x : terms) {
      rhs += x;
      scale = mp::max(scale, Real(mp::abs(x)));
    }
    double r = scale == 0 ? 0.0 : to_double(mp::abs(lhs - rhs) / scale);
    t.reform_residual.push_back(r);
    t.max_reform_residual = std::max(t.max_reform_residual, r);
  }
  return t;
}

Real tilde_epsilon(const ComparisonTables& t, const ParamSet& p, const std::vector<Real>& a, int n) {
  const Real& al = p.alpha;
  auto conv = [&](int lo, int hi, int m) { return paired_convolution(a, lo, hi, m); };
  Real e = -Real(3) / 2 * al * (n + 1) * conv(6, n - 5, n + 1);
  e += (Real(3 * n - 4) / 2 - Real(3) / 2 * al * t.k1 * n) * conv(5, n - 5, n);
  e += (Real(3 * n - 7) / 2 * t.k1 - Real(3) / 2 * al * t.k2 * (n - 1)) * conv(4, n - 5, n - 1);
  e += Real(3 * n - 10) / 2 * t.k2 * conv(3, n - 5, n - 2);
  return e;
}

void comparison_M(const ParamSet& p, ComparisonTables& t, const Real& a1, int n_max) {
  PrecisionScope scope(p.bits);
  if (n_max < 0) n_max = static_cast<int>(mp::ceil(p.R).convert_to<long>()) - 1;
  if (n_max < 1) fail(Errc::OutOfRange, "comparison sequences need n_max >= 1");
  t.n_max = n_max;
  const std::size_t sz = static_cast<std::size_t>(n_max) + 1;
  t.gamma.assign(sz, Real(0));
  t.p.assign(sz, Real(0));
  t.q.assign(sz, Real(0));
  t.M.assign(sz, Real(0));
  for (int n = 0; n <= n_max; ++n) {
    t.gamma[n] = t.gamma_t(Real(n));
    t.p[n] = t.p_t(Real(n));
    t.q[n] = t.q_t(Real(n));
  }
  t.M[0] = 1;
  t.M[1] = at_current(a1);
  for (int n = 2; n <= n_max && n < p.R; ++n)
    t.M[n] = (2 * t.p[n] * t.M[n - 1] + t.q[n] * t.M[n - 2]) / t.gamma[n];
  t.M_positive = true;
  for (int n = 0; n <= n_max && n < p.R; ++n)
    if (!(t.M[n] > 0)) t.M_positive = false;
}

void comparison_sequences(const ParamSet& p, ComparisonTables& t, const Real& a1, int n_max) {
  comparison_M(p, t, a1, n_max);
  PrecisionScope scope(p.bits);
  n_max = t.n_max;
  const std::size_t sz = static_cast<std::size_t>(n_max) + 1;
  t.mu_star.assign(sz, Real(0));
  t.mu.assign(sz, Real(0));
  t.lambda.assign(sz, Real(0));
  t.Mhat.assign(sz, Real(0));
  const Real half = Real(1) / 2;
  // mu_0 never enters Mhat, so the sequences start at n = 1.
  for (int n = 1; n + 1 <= n_max; ++n) {
    Real disc = t.gamma_t(n + half) * t.q_t(n + 3 * half) + t.p_t(Real(n + 1)) * t.p_t(Real(n + 1));
    if (disc < 0)
      fail(Errc::NegativeDiscriminant, "mu*_n is complex at n = " + std::to_string(n));
    t.mu_star[n] = mp::sqrt(disc);
    t.mu[n] = t.mu_star[n] + t.p_t(n + half);
    t.lambda[n] = t.q_t(Real(n + 1)) / t.mu[n];
  }
  t.mu_star_increasing = true;
  for (int n = 2; n + 1 <= n_max; ++n)
    if (!(t.mu_star[n] > t.mu_star[n - 1])) t.mu_star_increasing = false;
  t.Mhat[1] = at_current(a1);
  for (int n = 2; n <= n_max; ++n) t.Mhat[n] = t.mu[n - 1] / t.gamma[n] * t.Mhat[n - 1];
}

NextCoefficient a_next_after_R(const ParamSet& p, const SeriesOptions& opt) {
  PrecisionScope scope(std::max(opt.precision_bits, p.bits));
  Real fl = mp::floor(p.R);
  if (fl == p.R) fail(Errc::IntegerResonance, "R is an integer");
  int N = static_cast<int>(fl.convert_to<long>());
  SonicSeries s = compute_sonic_series(p, N + 1, opt);
  ComparisonTables t = reformulate(s);
  comparison_M(s.params, t, s.coeffs[1], N);
  NextCoefficient out;
  out.N = N;
  out.value = s.coeffs[N + 1];
  out.negative = out.value < 0;
  Real A3 = s.params.A * s.params.A * s.params.A;
  out.scaled = to_double(mp::abs(out.value) * (N + 1 - s.params.R) / (A3 * t.M[N]));
  return out;
}

SharpBand a_over_M_band(const SonicSeries& s, const ComparisonTables& t) {
  PrecisionScope scope(s.precision_bits);
  SharpBand b;
  b.n_lo = static_cast<int>(mp::ceil(mp::sqrt(s.params.R)).convert_to<long>());
  b.n_hi = std::min({static_cast<int>(mp::floor(s.params.R).convert_to<long>()), t.n_max, s.K});
  b.c0 = std::numeric_limits<double>::infinity();
  b.C0 = -std::numeric_limits<double>::infinity();
  b.all_positive = true;
  for (int n = b.n_lo; n <= b.n_hi; ++n) {
    double r = to_double(s.coeffs[n] / t.M[n]);
    b.c0 = std::min(b.c0, r);
    b.C0 = std::max(b.C0, r);
    if (!(s.coeffs[n] > 0)) b.all_positive = false;
  }
  return b;
}

}  // namespace implode
