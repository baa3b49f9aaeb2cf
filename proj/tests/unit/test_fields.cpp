#include "implode/barriers.hpp"
#include "implode/certificate.hpp"
#include "implode/errors.hpp"
#include "implode/fields.hpp"
#include "implode/series.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace implode;

namespace {

const double kAlphas[] = {0.1, 0.3, 0.5, 0.7, 0.9};

double rel_to(const Real& diff, const Real& scale) { return to_double(abs(diff) / scale); }

}  // namespace

TEST(Fields, PsiConjugatesTheTwoPlanes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sig(0.01, 5.0), ww(-1.0, 2.0);
  for (double R : {6.5, 25.42, 300.0}) {
    const ParamSet p = params_from_R(Real(R));
    PrecisionScope scope(p.bits);
    const auto c = coeffs<Real>(p);
    const Real k = 1 + p.a;
    for (int i = 0; i < 200; ++i) {
      const Real s = sig(rng), w = ww(rng);
      const auto sw = eval_sw_fields(c, s, w);
      const auto tu = psi(c, s, w);
      const auto f = eval_tu_fields(c, tu[0], tu[1]);
      const Real lhs1 = f.delta_tau, rhs1 = -k * k * k * sw.delta1;
      const Real lhs2 = f.delta_u, rhs2 = 2 * k * k * k * k * s * sw.delta2;
      EXPECT_LT(rel_to(lhs1 - rhs1, abs(rhs1) + 1e-30), 1e-12);
      EXPECT_LT(rel_to(lhs2 - rhs2, abs(rhs2) + 1e-30), 1e-12);
    }
  }
}

TEST(Fields, PsiInverseRoundTrip) {
  const ParamSet p = params_from_R(Real(25.42));
  for (double s : {0.05, 0.4, 1.0, 30.0}) {
    for (double w : {0.1, 0.5, 0.9}) {
      const PointSW back = psi_inverse(p, psi(p, PointSW{Real(s), Real(w)}));
      EXPECT_NEAR(to_double(back.sigma), s, 1e-14 * s);
      EXPECT_NEAR(to_double(back.w), w, 1e-14);
    }
  }
}

TEST(Fields, ChainRuleSlopeMatchesTauUField) {
  const ParamSet p = params_from_R(Real(25.42));
  const auto c = coeffs<long double>(p);
  const long double r = c.r, a = c.a;
  for (double s : {0.2, 0.7, 3.0}) {
    for (double w : {0.05, 0.3, 0.6}) {
      const auto tu = psi(c, (long double)s, (long double)w);
      const auto f = eval_tu_fields(c, tu[0], tu[1]);
      const long double slope = f.delta_u / f.delta_tau;
      const long double ref = oracle::tu_slope_from_sw(r, a, s, w);
      EXPECT_NEAR(double(slope), double(ref), 1e-12 * (1 + std::abs(double(ref))));
    }
  }
}

TEST(Fields, RootCurvesZeroDelta1) {
  const ParamSet p = params_from_R(Real(25.42));
  const auto c = coeffs<double>(p);
  for (double s : {0.01, 0.1, 0.3}) {
    for (double w : root_curves_w(p, s)) {
      EXPECT_NEAR(eval_sw_fields(c, s, w).delta1, 0.0, 1e-12);
    }
  }
}

TEST(Fields, ClosedFormLMatchesGenericOperator) {
  using barrier::Id;
  for (double alpha : kAlphas) {
    const ParamSet p = params_from_alpha(Real(alpha));
    PrecisionScope scope(p.bits);
    for (const auto& curve : barrier::barrier_catalog(p)) {
      if (curve.id == Id::Ub) continue;
      double worst = 0;
      for (int i = 1; i <= 1000; ++i) {
        const Real t = Real(curve.lo) + (Real(curve.hi) - Real(curve.lo)) * i / 1001;
        const Jet<Real> u = barrier::eval_curve(curve.id, p, t);
        const auto [L, scale] = oracle::L_generic<Real>(p.alpha, t, u.v, u.d);
        worst = std::max(worst, rel_to(L - barrier::closed_form_L(curve.id, p, t), scale));
      }
      EXPECT_LT(worst, 1e-10) << barrier::name(curve.id) << " alpha = " << alpha;
    }
  }
}

TEST(Fields, UbIsTheDeltaTauNullcline) {
  for (double alpha : kAlphas) {
    const ParamSet p = params_from_alpha(Real(alpha));
    const auto c = coeffs<double>(p);
    for (double t : {-0.2, -0.05, 0.02, alpha / 2}) {
      const double u = barrier::u_b(alpha, t);
      EXPECT_NEAR(eval_tu_fields(c, t, u).delta_tau, 0.0, 1e-13);
    }
  }
}

TEST(Fields, SecondOrderTruncationIdentity) {
  for (double alpha : kAlphas) {
    const ParamSet p = params_from_alpha(Real(alpha));
    if (p.R < 4) continue;
    const SonicSeries s = compute_sonic_series(p, 5);
    PrecisionScope scope(p.bits);
    const Real a1 = s.coeffs[1], a2 = s.coeffs[2], a3 = s.coeffs[3];
    double worst = 0;
    for (int i = 1; i <= 1000; ++i) {
      const Real t = Real(-0.3) + Real(0.6) * i / 1001;
      const Real u = 1 + a1 * t + a2 * t * t, du = a1 + 2 * a2 * t;
      const auto [L, scale] = oracle::L_generic<Real>(p.alpha, t, u, du);
      worst = std::max(worst, rel_to(L - barrier::L_u2(p.gamma(3L), a2, a3, t), scale));
    }
    EXPECT_LT(worst, 1e-10) << "alpha = " << alpha;
  }
}

TEST(Fields, SonicSlopeSandwich) {
  for (double alpha : {0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98}) {
    const ParamSet p = params_from_alpha(Real(alpha));
    const SonicSeries s = compute_sonic_series(p, 2);
    const double a1 = to_double(s.coeffs[1]);
    EXPECT_LT(barrier::du_g(alpha, 0.0), a1) << alpha;
    EXPECT_LT(a1, barrier::du_b(alpha, 0.0)) << alpha;
  }
}

TEST(Fields, BarrierSignsOnTheirDomains) {
  using barrier::Id;
  for (double R : {6.0, 25.42, 61.43}) {
    const ParamSet p = params_from_R(Real(R));
    for (const auto& c : barrier::barrier_catalog(p)) {
      auto L = [&](double t) {
        const Jet<double> u = c(t);
        const auto f = eval_tu_fields(coeffs<double>(p), t, u.v);
        return f.delta_tau * u.d - f.delta_u;
      };
      const double mid = 0.5 * (c.lo + c.hi);
      if (c.id == Id::Usigma1 || c.id == Id::UO) EXPECT_LT(L(mid), 0) << barrier::name(c.id) << " R = " << R;
      if (c.id == Id::Usigma2) EXPECT_GT(L(mid), 0) << "R = " << R;
    }
  }
}

TEST(Certificate, AcceptsAndRejects) {
  auto lin = [](double t) { return Jet<double>{t + 0.01, 1.0}; };
  const SignCertificate ok = certify_sign("lin", lin, 0.0, 1.0, +1, 256);
  EXPECT_TRUE(ok.holds);
  EXPECT_NEAR(ok.min_value, 0.01 + 0.5 / 256, 1e-12);
  const SignCertificate bad = certify_sign("lin", lin, -0.5, 1.0, +1, 256);
  EXPECT_FALSE(bad.holds);
  EXPECT_LT(bad.worst_tau, -0.01 + 1e-2);
  const SignCertificate neg = certify_sign("neg", lin, -1.0, -0.5, -1, 64);
  EXPECT_TRUE(neg.holds);
}

TEST(Certificate, LipschitzGuardCatchesNarrowDips) {
  // Positive at every cell centre but dips below zero between two of them.
  auto f = [](double t) {
    const double d = t - 0.5, k = 1e4;
    return Jet<double>{1 - 1.05 * std::exp(-k * d * d), 2.1 * k * d * std::exp(-k * d * d)};
  };
  const SignCertificate c = certify_sign("dip", f, 0.0, 1.0, +1, 64);
  EXPECT_GT(c.min_value, 0);
  EXPECT_FALSE(c.holds);
}
