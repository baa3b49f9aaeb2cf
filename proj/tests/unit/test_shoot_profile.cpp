#include "implode/errors.hpp"
#include "implode/profile.hpp"
#include "implode/series.hpp"
#include "implode/shoot.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace implode;

namespace {

// Default matching point for the interval (N, N + 1).
double tau_star_for(int N) { return to_double(params_from_R(Real(N) + Real(0.5)).alpha) / 2; }

}  // namespace

TEST(Shoot, RejectsEvenAndSmallN) {
  for (int N : {2, 26, 1}) {
    try {
      find_R_N(N, 1e-10);
      FAIL() << "accepted N = " << N;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::OutOfRange);
    }
  }
}

TEST(Shoot, IntegerGuard) {
  const ParamSet p = params_from_R(Real(25) + Real(1e-8));
  try {
    matching_gap(p, tau_star_for(25));
    FAIL() << "evaluated inside the guard";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IntegerResonance);
  }
}

TEST(Shoot, GapSignsAtBracketEnds) {
  const GapResult lo = matching_gap(params_from_R(Real(25.001)), tau_star_for(25));
  const GapResult hi = matching_gap(params_from_R(Real(25.999)), tau_star_for(25));
  EXPECT_EQ(lo.sign(), 1);
  EXPECT_EQ(hi.sign(), -1);
  EXPECT_GT(std::abs(hi.value), hi.error);
  EXPECT_GT(lo.tau_star, lo.tau_handoff);
}

TEST(Shoot, GapSignIsStableUnderRefinement) {
  const ParamSet p = params_from_R(Real(25.6));
  const GapResult base = matching_gap(p, tau_star_for(25));
  ShootOptions fine;
  fine.integrate.rtol = 5e-16L;
  fine.min_bits = 2 * kDefaultBits;
  const GapResult refined = matching_gap(p, tau_star_for(25), fine);
  EXPECT_EQ(base.sign(), refined.sign());
  EXPECT_NEAR(base.value, refined.value, 10 * (base.error + refined.error));
}

class ProfileAt25 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    shoot_ = std::make_unique<ShootResult>(find_R_N(25, 1e-10));
    if (shoot_->status == ShootStatus::Converged) profile_ = std::make_unique<GlobalProfile>(build_profile(*shoot_));
  }
  static void TearDownTestSuite() {
    profile_.reset();
    shoot_.reset();
  }
  static std::unique_ptr<ShootResult> shoot_;
  static std::unique_ptr<GlobalProfile> profile_;
};
std::unique_ptr<ShootResult> ProfileAt25::shoot_;
std::unique_ptr<GlobalProfile> ProfileAt25::profile_;

TEST_F(ProfileAt25, ShootConverges) {
  ASSERT_EQ(shoot_->status, ShootStatus::Converged) << shoot_->note;
  EXPECT_LE(shoot_->width, 1e-10);
  EXPECT_GT(shoot_->lo, 25);
  EXPECT_LT(shoot_->hi, 26);
  EXPECT_NEAR(to_double(shoot_->midpoint()), 25.4217190063, 1e-9);
  for (const auto& g : shoot_->gap_history) {
    if (g.R <= to_double(shoot_->lo)) EXPECT_GT(g.value, 0) << g.R;
    if (g.R >= to_double(shoot_->hi)) EXPECT_LT(g.value, 0) << g.R;
  }
}

TEST_F(ProfileAt25, BracketIsIndependentOfTauStarAndIncreasesWithN) {
  ASSERT_EQ(shoot_->status, ShootStatus::Converged);
  const ShootResult a = find_R_N(27, 1e-10);
  ShootOptions half;
  half.tau_star = a.tau_star / 2;
  // The smaller matching point loses the gap in rounding noise near 1e-6
  // width; that bracket must still contain the other one.
  const ShootResult b = find_R_N(27, 1e-10, half);
  ASSERT_EQ(a.status, ShootStatus::Converged);
  ASSERT_NE(b.status, ShootStatus::NoBracket);
  EXPECT_LE(b.lo, a.hi);
  EXPECT_LE(a.lo, b.hi);
  EXPECT_GT(a.lo, shoot_->hi);
}

TEST_F(ProfileAt25, NextCoefficientNegativeAtRoot) {
  const NextCoefficient nc = a_next_after_R(params_from_R(shoot_->midpoint()));
  EXPECT_EQ(nc.N, 25);
  EXPECT_TRUE(nc.negative);
}

TEST_F(ProfileAt25, SonicSlopesMatchSeries) {
  ASSERT_TRUE(profile_);
  const ParamSet& p = profile_->params;
  const SonicSeries s = compute_sonic_series(p, 2);
  PrecisionScope scope(p.bits);
  // The smooth branch leaves P2 with dw/dsigma = -2 / a_1.
  const Real ref = -2 / at_current(s.coeffs[1]);
  EXPECT_LT(to_double(abs(profile_->slopes.c_minus - ref) / abs(ref)), 1e-60);
  EXPECT_LT(profile_->slope_mismatch, 1e-30);
  // w keeps rising through the sonic point toward its maximum at x_A.
  EXPECT_GT(profile_->slopes.w_prime0, 0);
  EXPECT_LT(profile_->slopes.sigma_prime0, 0);
}

TEST_F(ProfileAt25, GridAndSonicSample) {
  ASSERT_TRUE(profile_);
  const auto& g = *profile_;
  for (std::size_t i = 1; i < g.x_grid.size(); ++i) ASSERT_LT(g.x_grid[i - 1], g.x_grid[i]);
  EXPECT_EQ(g.x_grid[g.sonic_index], 0.0);
  EXPECT_NEAR(g.sigma[g.sonic_index], 1 - to_double(g.params.w_minus), 1e-15);
  EXPECT_NEAR(g.w[g.sonic_index], to_double(g.params.w_minus), 1e-15);
  EXPECT_LT(g.stitch_mismatch, 1e-8);
  EXPECT_LT(g.max_radial_residual, 1e-8);
  std::size_t left = 0, right = 0;
  for (double x : g.x_grid) (x < 0 ? left : right)++;
  EXPECT_GE(left, 4096u);
  EXPECT_GE(right, 4096u);
}

TEST_F(ProfileAt25, EmdenTransformIsConsistent) {
  ASSERT_TRUE(profile_);
  const auto& g = *profile_;
  for (std::size_t i = 0; i < g.x_grid.size(); i += 97) {
    const double Z = std::exp(g.x_grid[i]);
    EXPECT_NEAR(g.Z[i], Z, 1e-14 * Z);
    EXPECT_NEAR(g.U_E[i], -Z * g.w[i], 1e-13 * Z);
    EXPECT_NEAR(g.S_E[i], 3 * Z * g.sigma[i], 1e-13 * Z * g.sigma[i]);
  }
}

TEST_F(ProfileAt25, Repulsivity) {
  ASSERT_TRUE(profile_);
  const RepulsivityReport rep = verify_repulsivity(*profile_);
  const double r = to_double(profile_->params.r);
  EXPECT_TRUE(rep.sign_pattern_ok) << rep.sign_pattern_note;
  EXPECT_EQ(rep.delta1_zeros, 2);
  EXPECT_GT(rep.barrier_margin_min, 0);
  EXPECT_TRUE(rep.w_max_at_x_A);
  EXPECT_TRUE(rep.margins_positive);
  EXPECT_GT(rep.eta_min_corrected, 0);
  EXPECT_NEAR(rep.limit_right_ii, 1, 1e-3);
  EXPECT_NEAR(rep.limit_right_iii, 1, 1e-3);
  EXPECT_NEAR(rep.limit_left_ii, 2 - r, 1e-3);
  EXPECT_NEAR(rep.limit_left_iii, 2 - r, 1e-3);
  EXPECT_NEAR(rep.decay_right, r, 0.01 * r);
  EXPECT_NEAR(rep.decay_left, 1, 0.01);
  EXPECT_GT(rep.lower_bound_c, 0);
  EXPECT_GT(rep.envelope_lo, 0);
  EXPECT_LT(rep.envelope_hi / rep.envelope_lo, 1e2);
  EXPECT_LT(rep.f_identity_max, 1e-9);
  EXPECT_GT(rep.x_B, profile_->x_A);
  EXPECT_LT(rep.round_trip_max, 1e-12);
}

TEST_F(ProfileAt25, BarrierCertificates) {
  ASSERT_TRUE(profile_);
  const int N = 25;
  const SonicSeries s = compute_sonic_series(profile_->params, 64);
  const BarrierReport br = verify_barriers(profile_->params, s, N);
  EXPECT_TRUE(br.all_hold);
  EXPECT_EQ(br.certificates.size(), 8u);
  for (const auto& c : br.certificates) EXPECT_TRUE(c.holds) << c.name;
  EXPECT_LT(br.low_order_residual, 1e-50);
  EXPECT_LT(br.u_N_at_left, 0);
  EXPECT_LT(br.tau_N, 0);
  EXPECT_LT(br.V, 0);
  EXPECT_LT(br.W, 0);
}

TEST(Profile, RequiresConvergedShoot) {
  ShootResult bad;
  bad.N = 25;
  bad.status = ShootStatus::NoBracket;
  try {
    build_profile(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OutOfRange);
  }
}
