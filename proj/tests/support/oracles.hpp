#pragma once

// Reference computations for the tests. Nothing here calls into the library
// arithmetic it is used to check.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <utility>
#include <vector>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using Q = boost::rational<BigInt>;

// Sonic series coefficients for a rational lambda = (A - 1)/(A + 1), found
// order by order by substituting the truncated polynomial into
// Delta_tau u' - Delta_u = 0 and solving the tau^n coefficient for a_n.
// a_1 is the positive root of the order-one quadratic.
std::vector<Q> sonic_series(const Q& lambda, int K);

// L[u] = Delta_tau u' - Delta_u written out from the field polynomials,
// for any arithmetic type. Returns the value and the sum of the absolute
// values of its terms (a local scale for relative comparisons).
template <class T>
std::pair<T, T> L_generic(const T& al, const T& t, const T& u, const T& du) {
  using std::abs;
  const T terms[] = {
      3 * al * u * du, -3 * t * u * du, -3 * al * du, -(4 * al - 1) * t * du, -(al - 2) * t * t * du,
      t * t * t * du,  2 * u * u,       -2 * u,       T(4) / 3 * (al - 4) * t * u, -T(10) / 3 * t * t * u};
  T sum = 0, scale = 0;
  for (const T& v : terms) {
    sum += v;
    scale += abs(v);
  }
  return {sum, scale};
}

double to_double(const Q& q);

// Parameter chain from R in long double by a different route than the
// library: r recovered from w_- via r = (3 - 2 w^2)/(3 - 2 w).
struct ParamsLD {
  long double R, A, lambda, alpha, a, w_minus, r, delta;
};
ParamsLD params_from_R(long double R);
// Inverse: R from r through w_- = 3(r - 1)/(r + sqrt(r^2 - 6r + 6)).
long double R_from_r(long double r);

// Chain-rule slope of the tau-u curve through a sigma-w point:
// du/dtau = -2 (1 + a) sigma Delta_2 / Delta_1.
long double tu_slope_from_sw(long double r, long double a, long double sigma, long double w);

}  // namespace oracle
