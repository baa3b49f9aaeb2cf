#include "implode/dopri.hpp"
#include "implode/errors.hpp"
#include "implode/fields.hpp"
#include "implode/integrate.hpp"
#include "implode/series.hpp"
#include "implode/shoot.hpp"
#include "implode/taylor.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace implode;

namespace {

using D1 = Dopri5<double, 1>;
using D2 = Dopri5<double, 2>;

double decay_error(double rtol) {
  D1::Options o;
  o.rtol = rtol;
  o.atol = rtol * 1e-3;
  D1 solver([](double, const D1::State& y) { return D1::State{-y[0]}; }, o);
  const auto r = solver.run(0.0, {1.0}, 5.0);
  EXPECT_EQ(r.stop, D1::Stop::Reached);
  EXPECT_EQ(r.t, 5.0);
  return std::abs(r.y[0] - std::exp(-5.0));
}

}  // namespace

TEST(Dopri, ExponentialDecay) { EXPECT_LT(decay_error(1e-12), 1e-12); }

TEST(Dopri, ErrorScalesWithToleranceAtFifthOrder) {
  // Step sizes scale like tol^(1/5), so the global error tracks the tolerance.
  const double e1 = decay_error(1e-6), e2 = decay_error(1e-9);
  EXPECT_GT(e1 / e2, 1e2);
  EXPECT_LT(e2, 1e-8);
}

TEST(Dopri, BackwardIntegration) {
  D1::Options o;
  D1 solver([](double, const D1::State& y) { return D1::State{y[0]}; }, o);
  const auto r = solver.run(1.0, {std::exp(1.0)}, -1.0);
  EXPECT_EQ(r.t, -1.0);
  EXPECT_NEAR(r.y[0], std::exp(-1.0), 1e-11);
}

TEST(Dopri, EventIsLocatedOnDenseOutput) {
  // Harmonic oscillator: first zero of cos at pi/2.
  D2::Options o;
  o.event_tol = 1e-13;
  D2 solver([](double, const D2::State& y) { return D2::State{y[1], -y[0]}; }, o);
  std::vector<D2::EventFn> ev{[](double, const D2::State& y) { return y[0]; }};
  const auto r = solver.run(0.0, {1.0, 0.0}, 10.0, {}, ev);
  EXPECT_EQ(r.stop, D2::Stop::Event);
  EXPECT_EQ(r.event, 0);
  EXPECT_NEAR(r.t, M_PI / 2, 1e-12);
  EXPECT_NEAR(r.y[1], -1.0, 1e-11);
}

TEST(Dopri, DenseOutputBetweenSteps) {
  D2::Options o;
  D2 solver([](double, const D2::State& y) { return D2::State{y[1], -y[0]}; }, o);
  double worst = 0, worst_d = 0;
  solver.run(0.0, {1.0, 0.0}, 6.0, [&](const D2::Step& st) {
    for (double th : {0.25, 0.5, 0.75}) {
      const double t = st.t0 + th * st.h;
      worst = std::max(worst, std::abs(st.dense(t)[0] - std::cos(t)));
      worst_d = std::max(worst_d, std::abs(st.dense_derivative(t)[0] + std::sin(t)));
    }
    return true;
  });
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(worst_d, 1e-8);
}

TEST(Dopri, StepCallbackCanStop) {
  D1::Options o;
  D1 solver([](double, const D1::State&) { return D1::State{1.0}; }, o);
  int n = 0;
  const auto r = solver.run(0.0, {0.0}, 100.0, [&](const D1::Step&) { return ++n < 3; });
  EXPECT_EQ(r.stop, D1::Stop::Aborted);
  EXPECT_EQ(n, 3);
}

class IntegrateAt25 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    p_ = new ParamSet(params_from_R(Real(25.42)));
    s_ = new SonicSeries(compute_sonic_series(*p_, 120));
  }
  static void TearDownTestSuite() {
    delete s_;
    delete p_;
  }
  static ParamSet* p_;
  static SonicSeries* s_;
};
ParamSet* IntegrateAt25::p_ = nullptr;
SonicSeries* IntegrateAt25::s_ = nullptr;

TEST_F(IntegrateAt25, FarFieldStart) {
  const double r = to_double(p_->r);
  const FarFieldStart f = start_far_field(*p_, 1e4);
  EXPECT_EQ(f.sigma, 1e4);
  EXPECT_NEAR(f.w, r - 1 + (r - 1) * (2 - r) / (5e8), 1e-15);
  EXPECT_LT(f.truncation, 1e-15);
}

TEST_F(IntegrateAt25, FarFieldBranchReachesTauStar) {
  const double tau_star = to_double(params_from_R(Real(25.5)).alpha) / 2;
  IntegrateOptions io;
  io.max_step = std::log(io.sigma_max) / 4096;
  const FarFieldBranch fb = integrate_P6_to_Q2(*p_, tau_star, io);
  EXPECT_EQ(fb.curve.frame, Frame::SW);
  EXPECT_GT(fb.u_F, 1);
  EXPECT_LT(fb.u_F_error, 1e-10);
  // Residual of the mid-step dense derivative, third order in the step.
  EXPECT_LT(fb.curve.max_residual, 1e-7);
  const XMap m = x_parametrize(*p_, fb.curve);
  EXPECT_TRUE(m.f_negative);
  EXPECT_NEAR(m.slope_large, -1.0, 1e-3);
}

TEST_F(IntegrateAt25, InwardLegAgreesWithSeries) {
  const double t0 = s_->tau0;
  IntegrateOptions io;
  const SeriesLeg leg = integrate_from_series(*s_, t0, t0 / 4, io);
  EXPECT_FALSE(leg.used_continuation);
  PrecisionScope scope(s_->precision_bits);
  const double ref = to_double(s_->eval(Real(leg.tau_end)));
  EXPECT_NEAR(leg.tau_end, t0 / 4, 1e-14);
  EXPECT_LE(std::abs(leg.u_end - ref), 10 * static_cast<double>(io.rtol) * std::abs(ref) + 1e-16);
}

TEST_F(IntegrateAt25, TaylorContinuationAgreesWithSeries) {
  PrecisionScope scope(s_->precision_bits);
  const Real t0 = Real(s_->tau0) / 4, t1 = Real(s_->tau0) * 3 / 4;
  TaylorOptions to;
  to.bits = s_->precision_bits;
  const TaylorPath path = continue_tu(*p_, t0, s_->eval(t0), Real(0), t1, to);
  ASSERT_EQ(path.stop, TaylorPath::Stop::Reached);
  const auto& last = path.nodes.back();
  EXPECT_EQ(last.t, t1);
  EXPECT_LT(to_double(abs(last.u - s_->eval(t1)) / s_->eval(t1)), 1e-40);
  EXPECT_LT(to_double(abs(last.du - s_->deriv(t1)) / s_->deriv(t1)), 1e-38);
}

TEST_F(IntegrateAt25, SonicXSeriesMatchesQuadrature) {
  // The Taylor path integrates x alongside u from an independent start.
  PrecisionScope scope(s_->precision_bits);
  const std::vector<Real> xs = x_series_at_sonic(*s_);
  EXPECT_EQ(xs[0], 0);
  auto x_at = [&](const Real& t) {
    Real x = 0;
    for (int k = static_cast<int>(xs.size()) - 1; k >= 0; --k) x = x * t + xs[k];
    return x;
  };
  const Real t0 = Real(s_->tau0) / 4, t1 = Real(s_->tau0) / 2;
  TaylorOptions to;
  to.bits = s_->precision_bits;
  const TaylorPath path = continue_tu(*p_, t0, s_->eval(t0), x_at(t0), t1, to);
  EXPECT_LT(to_double(abs(path.nodes.back().x - x_at(t1))), 1e-30);
}

TEST_F(IntegrateAt25, OriginLegCrossesDelta1Once) {
  // Continue the smooth branch past the sonic point until the Taylor radius
  // collapses, then hand over to the sigma-w leg.
  const SpecialPoints sp = special_points(*p_);
  unsigned bits = 0;
  double tau_h = 0;
  const SonicSeries s = series_for_continuation(*p_, std::abs(to_double(sp.Q5.tau)), kDefaultBits, bits, tau_h);
  double sigma0 = 0, w0 = 0;
  {
    PrecisionScope scope(bits);
    TaylorOptions to;
    to.bits = bits;
    const TaylorPath path = continue_tu(*p_, -Real(tau_h), s.eval(-Real(tau_h)), Real(0), at_current(sp.Q5.tau), to);
    EXPECT_EQ(path.stop, TaylorPath::Stop::RadiusCollapse);
    const PointSW sw = psi_inverse(*p_, PointTU{path.nodes.back().t, path.nodes.back().u});
    sigma0 = to_double(sw.sigma);
    w0 = to_double(sw.w);
  }
  const OriginLeg ol = integrate_sw_to_origin(*p_, sigma0, w0, 0.0);
  EXPECT_EQ(ol.delta1_sign_changes, 1);
  EXPECT_GT(ol.x_A, 0);
  EXPECT_LT(ol.sigma_1, sigma0);
  EXPECT_GT(ol.min_barrier_margin, 0);
  EXPECT_NEAR(ol.w_limit, 0.0, 1e-4);
  EXPECT_LT(ol.curve.max_residual, 1e-8);
  const XMap m = x_parametrize(*p_, ol.curve);
  EXPECT_TRUE(m.f_negative);
  EXPECT_NEAR(m.slope_small, -1 / to_double(p_->r), 1e-3);
}

TEST(Taylor, ContinuationBitsGrowWithR) {
  EXPECT_GT(continuation_bits(61.4, 0.01, 0.2), continuation_bits(25.4, 0.01, 0.2));
  EXPECT_GE(continuation_bits(25.4, 0.01, 0.02), 128u);
}
