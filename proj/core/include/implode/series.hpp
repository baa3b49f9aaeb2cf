#pragma once

#include "implode/params.hpp"

#include <vector>

namespace implode {

struct SeriesOptions {
  unsigned precision_bits = kDefaultBits;
  unsigned guard_bits = 32;     // minimum surviving bits after cancellation
  unsigned max_bits = 8192;     // escalation ceiling
  bool escalate = true;         // double the precision when guard bits run out
};

// Coefficients a_0..a_K of the analytic solution u_L(tau) = sum a_n tau^n at Q2.
struct SonicSeries {
  ParamSet params;
  std::vector<Real> coeffs;
  int K = 0;
  unsigned precision_bits = 0;
  // max over n of |gamma_n a_n - E_n| / (largest term magnitude in E_n)
  double max_residual = 0;
  // fewest surviving bits observed across the recurrence
  double min_guard_bits = 0;
  // K_geo = max_n |a_n|^(1/n); tau0 = 1/(2 K_geo)
  double K_geo = 0;
  double tau0 = 0;
  // Catalan envelope |a_n| <= c_(n-1) K_cat^(n - beta), beta = 3/2
  double K_catalan = 0;
  static constexpr double kBeta = 1.5;

  // Partial sum of the first `order`+1 terms (order < 0: all terms).
  Real eval(const Real& tau, int order = -1) const;
  Real deriv(const Real& tau, int order = -1) const;
  // |a_K tau^K| / (1 - K_geo |tau|) style tail estimate from the last terms.
  double tail_estimate(double tau) const;
};

SonicSeries compute_sonic_series(const ParamSet& p, int K, const SeriesOptions& opt = {});

// Right-hand side E_n of gamma_n a_n = E_n using a_0..a_(n-1).
Real recurrence_rhs(const ParamSet& p, const std::vector<Real>& a, int n);

// Log of the Catalan number c_m.
double log_catalan(int m);

// ---- reformulated recurrence and comparison sequences ---------------------

struct ComparisonTables {
  Real A1, A2, A3, A4, B1, B2, B3, B4;
  Real k1, k2, s1, s2;
  Real det;  // A2^2 - A1 A3
  // gamma_t = g1 t + g0, p_t = p1 t + p0, q_t = q1 t + q0 for real t
  Real g1, g0, p1, p0, q1, q0;

  // Aligned by n in [0, n_max]; entries that are undefined for small n are zero.
  int n_max = -1;
  std::vector<Real> gamma, p, q, M, mu_star, mu, lambda, Mhat;

  // Residual of the reformulated recurrence for 10 <= n <= K, relative to the
  // largest term, indexed from n = 10.
  std::vector<double> reform_residual;
  double max_reform_residual = 0;

  // Set by comparison_sequences: M_n > 0 for every filled n, mu*_n increasing.
  bool M_positive = true;
  bool mu_star_increasing = true;

  Real gamma_t(const Real& t) const { return g1 * t + g0; }
  Real p_t(const Real& t) const { return p1 * t + p0; }
  Real q_t(const Real& t) const { return q1 * t + q0; }
};

// Needs the series through n = 5. Throws DEGENERATE_K when A2^2 - A1 A3 = 0.
ComparisonTables reformulate(const SonicSeries& s);

// tilde-epsilon_n of the reformulated recurrence.
Real tilde_epsilon(const ComparisonTables& t, const ParamSet& p, const std::vector<Real>& a, int n);

// Fills gamma, p, q and M only. M needs no square roots, so it exists for
// every R while mu* can be complex for small n at moderate R.
void comparison_M(const ParamSet& p, ComparisonTables& t, const Real& a1, int n_max = -1);

// Fills M, mu*, mu, lambda, Mhat for n in [0, n_max], n_max defaulting to
// ceil(R) - 1. Throws NEGATIVE_DISCRIMINANT where mu* would be complex.
void comparison_sequences(const ParamSet& p, ComparisonTables& t, const Real& a1, int n_max = -1);

// a_(N+1) for R in (N, N+1) with its scale diagnostic.
struct NextCoefficient {
  int N = 0;
  Real value;
  // |a_(N+1)| (N + 1 - R) / (A^3 M_N)
  double scaled = 0;
  bool negative = false;
};
NextCoefficient a_next_after_R(const ParamSet& p, const SeriesOptions& opt = {});

// min/max of a_n / M_n over n in [ceil(sqrt R), N].
struct SharpBand {
  int n_lo = 0, n_hi = 0;
  double c0 = 0, C0 = 0;
  bool all_positive = false;
};
SharpBand a_over_M_band(const SonicSeries& s, const ComparisonTables& t);

}  // namespace implode
