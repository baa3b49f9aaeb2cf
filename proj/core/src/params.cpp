#include "implode/params.hpp"

#include "implode/errors.hpp"

#include <limits>

namespace implode {

using boost::multiprecision::sqrt;

Real r_upper() { return 3 - sqrt(Real(3)); }

Real ParamSet::gamma(const Real& n) const { return 8 * (R - n) / ((A + 1) * (A + 1)); }

namespace {

// Positive root of a^2 + (1 - alpha) a - 3 alpha = 0 without cancellation.
Real a_from_alpha(const Real& alpha) {
  Real b = 1 - alpha;
  return 6 * alpha / (b + sqrt(b * b + 12 * alpha));
}

ParamSet assemble(const Real& lambda, const Real& R, const Real& A, unsigned bits) {
  ParamSet p;
  p.bits = bits;
  p.R = R;
  p.A = A;
  p.lambda = lambda;
  p.alpha = lambda * lambda;
  p.a = a_from_alpha(p.alpha);
  p.w_minus = p.a / (1 + p.a);
  p.r = (p.a * p.a + 6 * p.a + 3) / ((p.a + 1) * (p.a + 3));
  p.w_plus = p.r - p.w_minus;
  p.delta = 2 * (1 - lambda) * (1 - lambda);
  return p;
}

}  // namespace

ParamSet params_from_R(const Real& R_in, unsigned bits) {
  PrecisionScope scope(bits);
  Real R = at_current(R_in);
  if (!(R > 1) || !boost::multiprecision::isfinite(R)) fail(Errc::OutOfRange, "R must exceed 1");
  Real A = sqrt(R);
  Real lambda = (A - 1) / (A + 1);
  return assemble(lambda, R, A, bits);
}

ParamSet params_from_lambda(const Real& lambda_in, unsigned bits) {
  PrecisionScope scope(bits);
  Real lambda = at_current(lambda_in);
  if (!(lambda > 0 && lambda < 1)) fail(Errc::OutOfRange, "lambda must lie in (0, 1)");
  Real A = (1 + lambda) / (1 - lambda);
  return assemble(lambda, A * A, A, bits);
}

ParamSet params_from_alpha(const Real& alpha_in, unsigned bits) {
  PrecisionScope scope(bits);
  Real alpha = at_current(alpha_in);
  if (!(alpha > 0 && alpha < 1)) fail(Errc::OutOfRange, "alpha must lie in (0, 1)");
  return params_from_lambda(sqrt(alpha), bits);
}

ParamSet params_from_a(const Real& a_in, unsigned bits) {
  PrecisionScope scope(bits);
  Real a = at_current(a_in);
  if (!(a > 0 && a < sqrt(Real(3)))) fail(Errc::OutOfRange, "a must lie in (0, sqrt 3)");
  return params_from_alpha(a * (a + 1) / (a + 3), bits);
}

ParamSet params_from_w_minus(const Real& wm_in, unsigned bits) {
  PrecisionScope scope(bits);
  Real wm = at_current(wm_in);
  if (!(wm > 0 && wm < 1)) fail(Errc::OutOfRange, "w_minus must lie in (0, 1)");
  return params_from_a(wm / (1 - wm), bits);
}

ParamSet params_from_r(const Real& r_in, unsigned bits) {
  PrecisionScope scope(bits);
  Real r = at_current(r_in);
  if (!(r > 1 && r < r_upper())) fail(Errc::OutOfRange, "r must lie in (1, 3 - sqrt 3)");
  Real disc = r * r - 6 * r + 6;
  if (!(disc > 0)) fail(Errc::OutOfRange, "r^2 - 6r + 6 must be positive");
  // w_- = (r - sqrt(disc))/2 rewritten to avoid cancellation.
  Real wm = 3 * (r - 1) / (r + sqrt(disc));
  return params_from_w_minus(wm, bits);
}

SpecialPoints special_points(const ParamSet& p) {
  PrecisionScope scope(p.bits);
  const Real inf = std::numeric_limits<Real>::infinity();
  SpecialPoints s;
  s.P1 = {Real(0), Real(1)};
  s.P2 = {1 - p.w_minus, p.w_minus};
  s.P3 = {1 - p.w_plus, p.w_plus};
  s.P4 = {Real(0), Real(0)};
  s.P5 = {sqrt(Real(3)) * p.r / 6, p.r / 2};
  s.P5prime = {Real(0), p.r};
  s.P6 = {inf, p.r - 1};
  s.Q2 = {Real(0), Real(1)};
  s.Q4 = {p.a, Real(0)};
  s.Q5 = {(p.a * p.a - 3) / (2 * (p.a + 3)),
          (p.a * p.a + 6 * p.a + 3) * (p.a * p.a + 6 * p.a + 3) / (12 * (p.a + 3) * (p.a + 3))};
  s.Q6 = {p.alpha, inf};
  s.sigma2 = 1 - p.w_minus;
  s.tauQ6 = p.alpha;

  // Delta_2 = 0 branches: w = (r + 3 +- sqrt(r^2 - 9r + 9 + 15 sigma^2))/5.
  Real disc = p.r * p.r - 9 * p.r + 9 + 15 * s.P3.sigma * s.P3.sigma;
  if (disc >= 0) {
    Real root = sqrt(disc);
    Real plus = (p.r + 3 + root) / 5, minus = (p.r + 3 - root) / 5;
    Real tol("1e-20");
    if (abs(plus - s.P3.w) < tol) s.p3_branch = 1;
    else if (abs(minus - s.P3.w) < tol) s.p3_branch = -1;
  }
  return s;
}

EigenPair eigenvalues(const ParamSet& p) {
  PrecisionScope scope(p.bits);
  // -2(sqrt(alpha) +- 1)^2; minus has the larger magnitude.
  return {-2 * (p.lambda + 1) * (p.lambda + 1), -2 * (p.lambda - 1) * (p.lambda - 1)};
}

Real eigen_residual(const ParamSet& p, const Real& x) {
  PrecisionScope scope(p.bits);
  return x * x + 4 * (p.alpha + 1) * x + 4 * (p.alpha - 1) * (p.alpha - 1);
}

}  // namespace implode
