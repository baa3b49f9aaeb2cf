#pragma once

#include "implode/series.hpp"
#include "implode/taylor.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace implode {

enum class Frame { SW, TU };

enum class Termination {
  ReachedTarget,
  CrossedDelta1,    // sigma_1 / x_A on the sigma-w plane
  CrossedDeltaTau,  // Q_A on the tau-u plane
  ApproachedP4,
  FieldDegenerate,
};

const char* termination_name(Termination t);

// SW: abscissa sigma, ordinate w, fields (Delta, Delta_1, Delta_2).
// TU: abscissa tau, ordinate u, fields (Delta_u, Delta_tau, 0).
struct CurveSample {
  double abscissa = 0, ordinate = 0;
  double x = std::numeric_limits<double>::quiet_NaN();
  double f0 = 0, f1 = 0, f2 = 0;
  double residual = 0;  // |denominator * slope - numerator| / local scale, mid-step
};

struct SolutionCurve {
  Frame frame = Frame::SW;
  std::vector<CurveSample> samples;
  int direction = -1;  // sign of the abscissa increment
  Termination termination = Termination::ReachedTarget;
  double max_residual = 0;
  long steps = 0;
};

struct IntegrateOptions {
  long double rtol = 1e-15L;
  long double atol = 1e-18L;
  double sigma_max = 1e4;
  double sigma_floor = 1e-6;
  double event_tol = 1e-14;
  double tail_tol = 1e-20;  // series tail allowed at a handoff
  long max_steps = 5'000'000;
  double max_step = 0;      // cap on the log sigma step of sigma-w legs, 0 for none
  bool record = true;       // keep per-step samples
};

struct FarFieldStart {
  double sigma = 0, w = 0;
  double truncation = 0;  // size of the omitted O(sigma^-4) term
};

// w_F(sigma) = r - 1 + (r - 1)(2 - r) / (5 sigma^2) + O(sigma^-4).
FarFieldStart start_far_field(const ParamSet& p, double sigma_max);

struct FarFieldBranch {
  SolutionCurve curve;  // SW frame, x measured from x = 0 at sigma_max
  double tau_star = 0;
  double sigma_star = 0;
  long double u_F = 0;  // u at tau_star
  double u_F_error = 0; // difference against a run at 1/16 of the tolerance
  double x_star = 0;    // x at tau_star in the same gauge
};

// Integrates the P6 branch inward in log sigma until tau = tau_star.
// Throws SANDWICH_VIOLATION or STEP_UNDERFLOW.
FarFieldBranch integrate_P6_to_Q2(const ParamSet& p, double tau_star, const IntegrateOptions& opt = {});

struct SeriesLeg {
  SolutionCurve curve;  // TU frame, x from the sonic series gauge (x = 0 at Q2)
  double tau_end = 0, u_end = 0, x_end = 0;
  double sigma_end = 0, w_end = 0;
  bool used_continuation = false;
  TaylorPath continuation;  // empty unless used
};

// Starts at tau_from on the series and integrates toward tau_to in the tau-u
// plane. Outward legs first continue in extended precision until the local
// radius collapses, then finish in long double with the Delta_tau = 0 event.
// Throws TAIL_TOO_LARGE or EVENT_MISSED.
SeriesLeg integrate_from_series(const SonicSeries& s, double tau_from, double tau_to,
                                const IntegrateOptions& opt = {});

struct OriginLeg {
  SolutionCurve curve;  // SW frame
  int delta1_sign_changes = 0;
  double sigma_1 = std::numeric_limits<double>::quiet_NaN();  // Delta_1 = 0 crossing
  double x_A = std::numeric_limits<double>::quiet_NaN();
  double min_barrier_margin = 0;  // min of w - a(1+a) sigma^2
  double w_limit = 0;             // Richardson estimate of w as sigma -> 0
};

// dw/dsigma = Delta_1/Delta_2 with sigma decreasing to sigma_floor, carrying x.
// Throws SONIC_ESCAPE_FAILED or BARRIER_VIOLATION.
OriginLeg integrate_sw_to_origin(const ParamSet& p, double sigma0, double w0, double x0,
                                 const IntegrateOptions& opt = {});

struct XMap {
  std::vector<double> sigma, x;  // sigma increasing, x decreasing
  bool f_negative = true;        // dX/dsigma = -Delta/Delta_2 < 0 throughout
  double slope_large = 0;        // fitted dX/dlog sigma as sigma -> infinity (expect -1)
  double slope_small = 0;        // fitted dX/dlog sigma as sigma -> 0 (expect -1/r)
  double interpolation_error = 0;
};

// Builds the monotone map from an SW curve that carries x. Throws NON_MONOTONE.
XMap x_parametrize(const ParamSet& p, const SolutionCurve& curve);

}  // namespace implode
