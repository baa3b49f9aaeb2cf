#pragma once

#include "implode/precision.hpp"

#include <array>
#include <string>

namespace implode {

// The parameter cluster for d = l = 3. R is canonical: every other field is
// derived from it, and R itself is stored exactly as supplied so that
// gamma(n) = delta*(R - n) keeps full relative accuracy near integers.
struct ParamSet {
  Real r, w_minus, w_plus, a, alpha, lambda, A, R, delta;
  unsigned bits = kDefaultBits;
  static constexpr int d = 3;
  static constexpr int ell = 3;

  // delta*(R - n) evaluated as 8(R - n)/(A + 1)^2.
  Real gamma(const Real& n) const;
  Real gamma(long n) const { return gamma(Real(n)); }
};

ParamSet params_from_R(const Real& R, unsigned bits = kDefaultBits);
ParamSet params_from_r(const Real& r, unsigned bits = kDefaultBits);
ParamSet params_from_a(const Real& a, unsigned bits = kDefaultBits);
ParamSet params_from_alpha(const Real& alpha, unsigned bits = kDefaultBits);
ParamSet params_from_lambda(const Real& lambda, unsigned bits = kDefaultBits);
ParamSet params_from_w_minus(const Real& w_minus, unsigned bits = kDefaultBits);

// Upper end 3 - sqrt(3) of the admissible r interval.
Real r_upper();

struct PointSW {
  Real sigma, w;
};
struct PointTU {
  Real tau, u;
};

struct SpecialPoints {
  PointSW P1, P2, P3, P4, P5, P5prime, P6;  // P6.sigma is +inf
  PointTU Q2, Q4, Q5, Q6;                    // Q6.u is +inf
  Real sigma2;
  Real tauQ6;
  // Which branch of Delta_2 = 0 contains P3: +1, -1, or 0 if neither within 1e-20.
  int p3_branch = 0;
};

SpecialPoints special_points(const ParamSet& p);

// Roots lambda_- < lambda_+ of l^2 + 4(alpha+1) l + 4(alpha-1)^2 = 0.
struct EigenPair {
  Real minus, plus;
};
EigenPair eigenvalues(const ParamSet& p);
// Residual of the characteristic polynomial at x.
Real eigen_residual(const ParamSet& p, const Real& x);

}  // namespace implode
