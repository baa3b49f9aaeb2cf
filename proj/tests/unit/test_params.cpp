#include "implode/errors.hpp"
#include "implode/fields.hpp"
#include "implode/params.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace implode;

namespace {

double rel(const Real& a, const Real& b) { return to_double(abs(a - b) / abs(b)); }

}  // namespace

TEST(Params, MatchesLongDoubleOracle) {
  for (double R : {5.5, 9.0, 25.42, 61.43, 1e4}) {
    const ParamSet p = params_from_R(Real(R));
    const auto o = oracle::params_from_R(R);
    EXPECT_NEAR(to_double(p.A), double(o.A), 1e-15 * R);
    EXPECT_NEAR(to_double(p.lambda), double(o.lambda), 1e-16);
    EXPECT_NEAR(to_double(p.alpha), double(o.alpha), 1e-16);
    EXPECT_NEAR(to_double(p.a), double(o.a), 1e-16);
    EXPECT_NEAR(to_double(p.w_minus), double(o.w_minus), 1e-16);
    EXPECT_NEAR(to_double(p.r), double(o.r), 1e-15);
    EXPECT_NEAR(to_double(p.delta), double(o.delta), 1e-16);
  }
}

TEST(Params, ExactValuesAtRationalPoints) {
  // R = 9: A = 3, lambda = 1/2, alpha = 1/4, delta = 1/2.
  const ParamSet p = params_from_R(Real(9));
  EXPECT_LT(rel(p.lambda, Real(0.5)), 1e-70);
  EXPECT_LT(rel(p.alpha, Real(0.25)), 1e-70);
  EXPECT_LT(rel(p.delta, Real(0.5)), 1e-70);
  EXPECT_LT(rel(p.a * (p.a + 1) / (p.a + 3), p.alpha), 1e-70);
  // a = 1/2: w_- = 1/3, alpha = 3/14, r = 25/21.
  const ParamSet q = params_from_a(Real(0.5));
  PrecisionScope scope(q.bits);
  EXPECT_LT(rel(q.w_minus, Real(1) / 3), 1e-70);
  EXPECT_LT(rel(q.alpha, Real(3) / 14), 1e-70);
  EXPECT_LT(rel(q.r, Real(25) / 21), 1e-70);
}

TEST(Params, EntryPointsAgree) {
  const ParamSet p = params_from_R(Real(25.42));
  for (const ParamSet& q : {params_from_r(p.r), params_from_a(p.a), params_from_alpha(p.alpha),
                            params_from_lambda(p.lambda), params_from_w_minus(p.w_minus)}) {
    EXPECT_LT(rel(q.R, p.R), 1e-60);
    EXPECT_LT(rel(q.r, p.r), 1e-60);
  }
}

TEST(Params, WRootsSumToR) {
  const ParamSet p = params_from_R(Real(30.5));
  EXPECT_LT(rel(p.w_minus + p.w_plus, p.r), 1e-70);
  EXPECT_LT(rel(p.w_minus * p.w_plus, 3 * (p.r - 1) / 2), 1e-70);
}

TEST(Params, GammaIsDeltaTimesGap) {
  const ParamSet p = params_from_R(Real(25.5));
  EXPECT_LT(rel(p.gamma(25L), p.delta / 2), 1e-70);
  // gamma_n = 8 (R - n) / (A + 1)^2
  EXPECT_LT(rel(p.gamma(3L), 8 * (p.R - 3) / ((p.A + 1) * (p.A + 1))), 1e-70);
}

TEST(Params, OutOfRangeIsRejected) {
  for (double r : {1.0, 0.5, 1.3}) {
    if (r < to_double(r_upper()) && r > 1) continue;
    try {
      params_from_r(Real(r));
      FAIL() << "accepted r = " << r;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::OutOfRange);
    }
  }
  EXPECT_THROW(params_from_r(r_upper() + Real(0.01)), Error);
  EXPECT_THROW(params_from_R(Real(1)), Error);
  EXPECT_THROW(params_from_w_minus(Real(1.5)), Error);
}

TEST(Params, RIsIncreasingInR) {
  double prev = 0;
  for (int i = 1; i <= 200; ++i) {
    const double r = 1 + (to_double(r_upper()) - 1) * i / 201.0;
    const double R = to_double(params_from_r(Real(r)).R);
    EXPECT_GT(R, prev) << "r = " << r;
    prev = R;
  }
}

TEST(Params, RoundTripAgainstOracle) {
  for (int i = 1; i <= 50; ++i) {
    const long double r = 1 + (1.2679L - 1) * i / 51.0L;
    const ParamSet p = params_from_r(Real(double(r)));
    EXPECT_NEAR(to_double(p.R), double(oracle::R_from_r(double(r))), 1e-12 * to_double(p.R));
  }
}

TEST(Params, EigenvaluesSolveCharacteristicPolynomial) {
  for (double alpha : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const ParamSet p = params_from_alpha(Real(alpha));
    const EigenPair e = eigenvalues(p);
    EXPECT_LT(to_double(abs(eigen_residual(p, e.minus)) / (e.minus * e.minus)), 1e-70);
    EXPECT_LT(to_double(abs(eigen_residual(p, e.plus)) / (e.minus * e.minus)), 1e-70);
    EXPECT_LT(rel(e.minus / e.plus, p.R), 1e-70);
  }
}

TEST(Params, SpecialPointsMapUnderPsi) {
  const ParamSet p = params_from_R(Real(25.42));
  const SpecialPoints s = special_points(p);
  const PointTU q2 = psi(p, s.P2);
  // Q2 = (0, 1) exactly: (1 + a)(1 - w_-) = 1.
  EXPECT_LT(to_double(abs(q2.tau)), 1e-70);
  EXPECT_LT(rel(q2.u, Real(1)), 1e-70);
  const PointTU q4 = psi(p, s.P4);
  EXPECT_LT(rel(q4.tau, s.Q4.tau), 1e-70);
  EXPECT_TRUE(s.p3_branch == 1 || s.p3_branch == -1);
}
