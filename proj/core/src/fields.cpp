#include "implode/fields.hpp"

#include "implode/barriers.hpp"
#include "implode/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>

namespace implode {

namespace mp = boost::multiprecision;

template <class T>
std::array<T, 2> psi_inverse(const FieldCoeffs<T>& c, const T& tau, const T& u) {
  if (u < 0) fail(Errc::NegativeU, "psi_inverse requires u >= 0");
  using std::sqrt;
  using mp::sqrt;
  const T k = 1 + c.a;
  return {sqrt(u) / k, c.w_minus - tau / k};
}

template std::array<double, 2> psi_inverse(const FieldCoeffs<double>&, const double&, const double&);
template std::array<long double, 2> psi_inverse(const FieldCoeffs<long double>&, const long double&,
                                                const long double&);
template std::array<Real, 2> psi_inverse(const FieldCoeffs<Real>&, const Real&, const Real&);

PointTU psi(const ParamSet& p, const PointSW& pt) {
  PrecisionScope scope(p.bits);
  auto v = psi(coeffs<Real>(p), pt.sigma, pt.w);
  return {v[0], v[1]};
}

PointSW psi_inverse(const ParamSet& p, const PointTU& pt) {
  PrecisionScope scope(p.bits);
  auto v = psi_inverse(coeffs<Real>(p), pt.tau, pt.u);
  return {v[0], v[1]};
}

namespace {

template <class T>
std::array<T, 3> cubic_roots(const FieldCoeffs<T>& c, const T& sigma) {
  using std::acos; using std::cos; using std::sqrt; using std::abs;
  using mp::acos; using mp::cos; using mp::sqrt; using mp::abs;
  const T pi = boost::math::constants::pi<T>();
  const T s2 = sigma * sigma;
  // w^3 + b w^2 + k w + e
  const T b = -(1 + c.r);
  const T k = c.r - c.d * s2;
  const T e = c.ell * (c.r - 1) * s2;
  const T p = k - b * b / 3;
  const T q = 2 * b * b * b / 27 - b * k / 3 + e;
  if (!(p < 0) || 4 * p * p * p + 27 * q * q > 0)
    fail(Errc::RootFailure, "Delta_1 cubic does not have three real roots");
  const T m = 2 * sqrt(-p / 3);
  T arg = 3 * q / (p * m);
  if (arg > 1) arg = 1;
  if (arg < -1) arg = -1;
  const T theta = acos(arg) / 3;
  std::array<T, 3> w;
  for (int j = 0; j < 3; ++j) w[j] = m * cos(theta - 2 * pi * j / 3) - b / 3;
  std::sort(w.begin(), w.end());
  // Newton polish; the trigonometric formula loses digits near double roots.
  for (auto& x : w) {
    for (int it = 0; it < 3; ++it) {
      T f = ((x + b) * x + k) * x + e;
      T df = (3 * x + 2 * b) * x + k;
      if (df == 0) break;
      x -= f / df;
    }
  }
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace

std::array<double, 3> root_curves_w(const ParamSet& p, double sigma) {
  if (!(sigma > 0)) fail(Errc::OutOfRange, "root_curves_w requires sigma > 0");
  return cubic_roots(coeffs<double>(p), sigma);
}

std::array<Real, 3> root_curves_w(const ParamSet& p, const Real& sigma) {
  if (!(sigma > 0)) fail(Errc::OutOfRange, "root_curves_w requires sigma > 0");
  PrecisionScope scope(p.bits);
  return cubic_roots(coeffs<Real>(p), sigma);
}

std::optional<std::array<Real, 2>> delta2_curves(const ParamSet& p, const Real& sigma) {
  PrecisionScope scope(p.bits);
  Real disc = p.r * p.r - 9 * p.r + 9 + 15 * sigma * sigma;
  if (disc < 0) return std::nullopt;
  Real root = mp::sqrt(disc);
  return std::array<Real, 2>{(p.r + 3 - root) / 5, (p.r + 3 + root) / 5};
}

Real delta2_min_sigma(const ParamSet& p) {
  PrecisionScope scope(p.bits);
  Real c0 = p.r * p.r - 9 * p.r + 9;
  if (c0 >= 0) return Real(0);
  return mp::sqrt(-c0 / 15);
}

// ---- barrier catalogue ----------------------------------------------------

namespace barrier {

const char* name(Id id) {
  switch (id) {
    case Id::Ug: return "u_g";
    case Id::Ub: return "u_b";
    case Id::UO: return "U_O";
    case Id::Usigma1: return "U_sigma1";
    case Id::Usigma2: return "U_sigma2";
  }
  return "?";
}

namespace {

template <class T, class P>
Jet<T> eval_generic(Id id, const P& al, const P& a, const T& t) {
  auto pole = [&](const T& at) {
    if (t == at) fail(Errc::Pole, std::string(name(id)) + " evaluated at its pole");
  };
  switch (id) {
    case Id::Ug: return {u_g(al, t), du_g(al, t)};
    case Id::Ub: pole(T(al)); return {u_b(al, t), du_b(al, t)};
    case Id::UO: return {U_O(a, t), dU_O(a, t)};
    case Id::Usigma1: pole(T((3 * al + 1) / 2)); return {U_sigma1(al, t), dU_sigma1(al, t)};
    case Id::Usigma2: pole(T((3 * al + 1) / 2)); return {U_sigma2(al, t), dU_sigma2(al, t)};
  }
  return {T(0), T(0)};
}

}  // namespace

Jet<double> Curve::operator()(double tau) const { return eval_generic(id, alpha, a, tau); }

std::vector<Curve> barrier_catalog(const ParamSet& p) {
  const double al = to_double(p.alpha), a = to_double(p.a);
  const double q5 = to_double((p.a * p.a - 3) / (2 * (p.a + 3)));
  const double pole = (3 * al + 1) / 2;
  std::vector<Curve> out;
  out.push_back({Id::Ug, q5, al, al, a});
  out.push_back({Id::Ub, q5, al, al, a});
  out.push_back({Id::UO, 0.0, a, al, a});
  out.push_back({Id::Usigma1, 0.0, std::min(al, pole), al, a});
  out.push_back({Id::Usigma2, q5, 0.0, al, a});
  return out;
}

Jet<Real> eval_curve(Id id, const ParamSet& p, const Real& tau) {
  PrecisionScope scope(p.bits);
  return eval_generic<Real, Real>(id, p.alpha, p.a, tau);
}

Real closed_form_L(Id id, const ParamSet& p, const Real& tau) {
  PrecisionScope scope(p.bits);
  switch (id) {
    case Id::Ug: return L_u_g(p.alpha, tau);
    case Id::Ub: return Real(0);  // u_b is the Delta_tau = 0 curve: L = -Delta_u
    case Id::UO: return L_U_O(p.a, tau);
    case Id::Usigma1: return L_U_sigma1(p.alpha, tau);
    case Id::Usigma2: return L_U_sigma2(p.alpha, tau);
  }
  return Real(0);
}

}  // namespace barrier
}  // namespace implode
