#pragma once

#include "implode/series.hpp"

#include <functional>
#include <vector>

namespace implode {

// Analytic continuation of tau -> u(tau), the solution of
// Delta_tau u' = Delta_u, by recentred Taylor series in extended precision.
// x(tau) is carried along through dx/dtau = (u - (1 + tau)^2) / Delta_tau.

struct TaylorCoeffs {
  std::vector<Real> u;  // u(t0 + s) = sum u_k s^k
  std::vector<Real> q;  // dx/dtau(t0 + s) = sum q_k s^k (empty when not requested)
  Real radius;          // root-test estimate of the convergence radius
};

TaylorCoeffs tu_taylor_coeffs(const Real& alpha, const Real& t0, const Real& u0, int order, bool with_x);

struct TaylorOptions {
  unsigned bits = kDefaultBits;
  int order = 0;                 // 0: bits / 2
  double radius_fraction = 0.25; // step = fraction * estimated radius
  double min_step = 1e-4;        // smaller proposed steps end the run
  double max_step = 0;           // cap on the step, 0 for none
  int max_steps = 100000;
};

struct TaylorNode {
  Real t, u, du, x;
};

struct TaylorPath {
  enum class Stop { Reached, RadiusCollapse, MaxSteps };
  Stop stop = Stop::Reached;
  std::vector<TaylorNode> nodes;  // includes the start node
  double truncation_error = 0;    // sum of per-step remainder estimates
  unsigned bits = 0;
  int order = 0;
};

TaylorPath continue_tu(const ParamSet& p, const Real& t0, const Real& u0, const Real& x0, const Real& t_end,
                       const TaylorOptions& opt);

// Coefficients of x(tau) = sum x_k tau^k at the sonic point (x_0 = 0), from
// the sonic series by power-series division.
std::vector<Real> x_series_at_sonic(const SonicSeries& s);

// Bits needed to continue u_L from the series at t_from to t_to: errors grow
// like (t_to / t_from)^R away from the sonic point.
unsigned continuation_bits(double R, double t_from, double t_to);

}  // namespace implode
