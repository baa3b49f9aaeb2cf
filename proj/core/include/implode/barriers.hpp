#pragma once

// Closed-form barrier curves in the (tau, u) plane together with their
// hand-derived L-expressions. Templated on the abscissa type so the same
// formulas serve double, Real and autodiff evaluation.

#include "implode/fields.hpp"

#include <string>
#include <vector>

namespace implode::barrier {

enum class Id { Ug, Ub, UO, Usigma1, Usigma2 };
const char* name(Id id);

template <class T, class P>
T u_g(const P& al, const T& t) {
  return 1 - P(2) / 3 * (al - 4) * t + P(5) / 3 * t * t;
}
template <class T, class P>
T du_g(const P& al, const T& t) {
  return -P(2) / 3 * (al - 4) + P(10) / 3 * t;
}

template <class T, class P>
T u_b(const P& al, const T& t) {
  return (-t * t * t + (al - 2) * t * t + (4 * al - 1) * t + 3 * al) / (3 * (al - t));
}
template <class T, class P>
T du_b(const P& al, const T& t) {
  T num = -t * t * t + (al - 2) * t * t + (4 * al - 1) * t + 3 * al;
  T dnum = -3 * t * t + 2 * (al - 2) * t + (4 * al - 1);
  T den = 3 * (al - t);
  return (dnum * den + 3 * num) / (den * den);
}

template <class T, class P>
T U_O(const P& a, const T& t) {
  return 1 - t / a;
}
template <class T, class P>
T dU_O(const P& a, const T&) {
  return T(-1 / a);
}

template <class T, class P>
T U_sigma1(const P& al, const T& t) {
  T D = -2 * t + 3 * al + 1;
  T G = (2 * (al + 1) * t + 2 * (3 * al + 1)) / D + 1 + t;
  return G * G / 9;
}
template <class T, class P>
T dU_sigma1(const P& al, const T& t) {
  T D = -2 * t + 3 * al + 1;
  T G = (2 * (al + 1) * t + 2 * (3 * al + 1)) / D + 1 + t;
  T dG = 2 * (3 * al + 1) * (al + 3) / (D * D) + 1;
  return 2 * G * dG / 9;
}

template <class T, class P>
T U_sigma2(const P& al, const T& t) {
  T D = -2 * t + 3 * al + 1;
  return 4 * (1 + t) * ((3 * al + 1) + (al + 1) * t) / (3 * D) - (1 + t) * (1 + t) / 3;
}
template <class T, class P>
T dU_sigma2(const P& al, const T& t) {
  T D = -2 * t + 3 * al + 1;
  T n = (1 + t) * ((3 * al + 1) + (al + 1) * t);
  T dn = ((3 * al + 1) + (al + 1) * t) + (al + 1) * (1 + t);
  return 4 * (dn * D + 2 * n) / (3 * D * D) - 2 * (1 + t) / 3;
}

// ---- closed-form L-expressions ------------------------------------------

template <class T, class P>
T L_u_g(const P& al, const T& t) {
  return -P(4) / 3 * t * (t + 1 - al) * (2 * t + 1 - al) * (5 * t + 4 - al);
}

template <class T, class P>
T L_U_O(const P& a, const T& t) {
  return t * (t - a) * (7 * a * (a + 3) * t - 4 * a * a * a + 27 * a - 9) / (3 * a * a * (a + 3));
}

template <class T, class P>
T phi1(const P& al, const T& t) {
  const P b = 1 - al, c = 1 + 3 * al;
  T t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  return 9 * b * b * c * c + 6 * b * c * (2 + 11 * al - 5 * al * al) * t +
         c * (19 + 112 * al - 83 * al * al) * t2 + 4 * (-9 + 2 * al + 67 * al * al) * t3 -
         4 * (9 + 29 * al) * t4 + 16 * t5;
}

template <class T, class P>
T L_U_sigma1(const P& al, const T& t) {
  T D = -2 * t + 3 * al + 1;
  T G = (2 * (al + 1) * t + 2 * (3 * al + 1)) / D + 1 + t;
  T D2 = D * D;
  return -16 * t * (t + 1 - al) / (81 * D2 * D2) * G * phi1(al, t);
}

template <class T, class P>
T L_U_sigma2(const P& al, const T& t) {
  T D = -2 * t + 3 * al + 1;
  T tail = -(1 + al) * t * t + (3 * al + 1) * (-1 + al - 2 * t);
  return 16 * t * (t + 1) * (-1 + al - 2 * t) * (-1 + al - t) * tail / (3 * D * D * D);
}

template <class T, class P>
T U_sigma2_minus_u_b(const P& al, const T& t) {
  return -2 * t * (1 + t) * (-2 * t + al - 1) * (-t + al - 1) /
         (3 * (-2 * t + 3 * al + 1) * (al - t));
}

// u_(2) = 1 + a1 t + a2 t^2 has L[u_(2)] = V t^3 + W t^4 with
// V = -delta(R-3) a3 and W = -4 a2^2 - 4 a2 / 3.
template <class T, class P>
T L_u2(const P& gamma3, const P& a2, const P& a3, const T& t) {
  P V = -gamma3 * a3;
  P W = -4 * a2 * a2 - 4 * a2 / 3;
  return V * t * t * t + W * t * t * t * t;
}

// Evaluable catalogue entry with the domain on which it is finite.
struct Curve {
  Id id;
  double lo, hi;  // open interval of definition used by sampling
  Jet<double> operator()(double tau) const;
  double alpha = 0, a = 0;
};

// u_g, u_b, U_O, U_sigma1, U_sigma2. Evaluation throws POLE at tau = alpha for
// u_b and at tau = (3 alpha + 1)/2 for U_sigma1/U_sigma2.
std::vector<Curve> barrier_catalog(const ParamSet& p);

// Real-precision value and derivative, also raising POLE.
Jet<Real> eval_curve(Id id, const ParamSet& p, const Real& tau);
Real closed_form_L(Id id, const ParamSet& p, const Real& tau);

}  // namespace implode::barrier
