#pragma once

#include "implode/params.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace implode {

// Scalar copies of the parameters needed by the field polynomials. The
// sigma-w fields keep general (d, l) as written; everything else is d = l = 3.
template <class T>
struct FieldCoeffs {
  T r, a, alpha, w_minus, w_plus;
  T d = T(3), ell = T(3);
};

template <class T>
FieldCoeffs<T> coeffs(const ParamSet& p) {
  FieldCoeffs<T> c;
  if constexpr (std::is_same_v<T, Real>) {
    c.r = p.r; c.a = p.a; c.alpha = p.alpha; c.w_minus = p.w_minus; c.w_plus = p.w_plus;
  } else {
    c.r = p.r.convert_to<T>();
    c.a = p.a.convert_to<T>();
    c.alpha = p.alpha.convert_to<T>();
    c.w_minus = p.w_minus.convert_to<T>();
    c.w_plus = p.w_plus.convert_to<T>();
  }
  return c;
}

template <class T>
struct SWFields {
  T delta, delta1, delta2;
};

template <class T>
struct TUFields {
  T delta_u, delta_tau;
};

template <class T>
SWFields<T> eval_sw_fields(const FieldCoeffs<T>& c, const T& sigma, const T& w) {
  const T s2 = sigma * sigma;
  SWFields<T> f;
  f.delta = (w - 1) * (w - 1) - s2;
  f.delta1 = w * (w - 1) * (w - c.r) - (c.d * w - c.ell * (c.r - 1)) * s2;
  f.delta2 = (sigma / c.ell) *
             ((c.ell + c.d - 1) * w * w - (c.ell + c.d + c.ell * c.r - c.r) * w + c.ell * c.r - c.ell * s2);
  return f;
}

template <class T>
TUFields<T> eval_tu_fields(const FieldCoeffs<T>& c, const T& tau, const T& u) {
  const T& al = c.alpha;
  TUFields<T> f;
  f.delta_u = -2 * u * u + 2 * u - T(4) / 3 * (al - 4) * tau * u + T(10) / 3 * tau * tau * u;
  f.delta_tau = 3 * (al - tau) * u - 3 * al - (4 * al - 1) * tau - (al - 2) * tau * tau + tau * tau * tau;
  return f;
}

// Psi(sigma, w) = (-(1 + a)(w - w_-), (1 + a)^2 sigma^2).
template <class T>
std::array<T, 2> psi(const FieldCoeffs<T>& c, const T& sigma, const T& w) {
  const T k = 1 + c.a;
  return {-k * (w - c.w_minus), k * k * sigma * sigma};
}

// Inverse on the sigma >= 0 sheet; throws NEGATIVE_U for u < 0.
template <class T>
std::array<T, 2> psi_inverse(const FieldCoeffs<T>& c, const T& tau, const T& u);

PointTU psi(const ParamSet& p, const PointSW& pt);
PointSW psi_inverse(const ParamSet& p, const PointTU& pt);

// Sorted roots w1 <= w2 <= w3 of w -> Delta_1(sigma, w), trigonometric method.
std::array<double, 3> root_curves_w(const ParamSet& p, double sigma);
std::array<Real, 3> root_curves_w(const ParamSet& p, const Real& sigma);

// Branches of Delta_2 = 0 at sigma, or nothing when the discriminant is negative.
std::optional<std::array<Real, 2>> delta2_curves(const ParamSet& p, const Real& sigma);
Real delta2_min_sigma(const ParamSet& p);  // sigma_2^(0); zero if the discriminant never vanishes

// Value and first derivative of a curve tau -> u(tau).
template <class T>
struct Jet {
  T v, d;
};

// L[u](tau) = Delta_tau(tau, u) u' - Delta_u(tau, u).
template <class T>
T L_operator(const FieldCoeffs<T>& c, const T& tau, const Jet<T>& u) {
  auto f = eval_tu_fields(c, tau, u.v);
  return f.delta_tau * u.d - f.delta_u;
}

// N[w](sigma) = Delta_2 w' - Delta_1 for a curve sigma -> w(sigma).
template <class T>
T N_operator(const FieldCoeffs<T>& c, const T& sigma, const Jet<T>& w) {
  auto f = eval_sw_fields(c, sigma, w.v);
  return f.delta2 * w.d - f.delta1;
}

}  // namespace implode
