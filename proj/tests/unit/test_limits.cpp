#include "implode/errors.hpp"
#include "implode/limits.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace implode;

TEST(Limits, ExactTableMatchesKnownValues) {
  const std::vector<Rational> ref = {
      Rational(1),        Rational(2),          Rational(5, 3),      Rational(1),
      Rational(2, 3),     Rational(13, 24),     Rational(17, 36),    Rational(11, 24),
      Rational(97, 216),  Rational(6683, 13824), Rational(10547, 20736)};
  const auto got = limiting_exact(10);
  ASSERT_EQ(got.size(), ref.size());
  for (std::size_t n = 0; n < ref.size(); ++n) EXPECT_EQ(got[n], ref[n]) << "n = " << n;
}

TEST(Limits, ExactValuesArePositive) {
  const auto got = limiting_exact(64);
  for (std::size_t n = 0; n < got.size(); ++n) EXPECT_GT(got[n], 0) << "n = " << n;
}

TEST(Limits, FloatTablesContinueTheExactOnes) {
  LimitOptions opt;
  opt.K_rat = 20;
  const LimitTables t = limiting_tables(40, opt);
  const auto exact = limiting_exact(40);
  for (int n = 21; n <= 40; ++n) {
    const double ref = Rational(exact[n]).convert_to<double>();
    EXPECT_NEAR(static_cast<double>(t.a_inf(n)), ref, 1e-15 * ref) << "n = " << n;
  }
}

TEST(Limits, SInfinityAtSmallK) {
  const SInfinityResult s = s_infinity(2000);
  EXPECT_EQ(s.K, 2000);
  ASSERT_EQ(s.ratio_trace.size(), 2000u);
  EXPECT_TRUE(std::isfinite(s.value));
  EXPECT_GT(s.error_estimate, 0);
  EXPECT_DOUBLE_EQ(s.ratio_K, s.ratio_trace.back());
  EXPECT_EQ(s.claim_holds, s.value - s.error_estimate > 0.5);
}

class LimitsCheckpoint : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = (std::filesystem::temp_directory_path() /
             ("implode_ck_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
              ::testing::UnitTest::GetInstance()->current_test_info()->name()))
                .string();
    std::remove(path_.c_str());
  }
  void TearDown() override { std::remove(path_.c_str()); }
  std::string path_;
};

TEST_F(LimitsCheckpoint, ResumeIsBitExact) {
  const LimitTables fresh = limiting_tables(3000);
  LimitOptions opt;
  opt.checkpoint_path = path_;
  opt.checkpoint_every = 700;
  limiting_tables(1800, opt);
  const LimitTables resumed = limiting_tables(3000, opt);
  ASSERT_EQ(resumed.scaled.size(), fresh.scaled.size());
  for (std::size_t n = 0; n < fresh.scaled.size(); ++n) ASSERT_EQ(resumed.scaled[n], fresh.scaled[n]) << n;
  // A shorter run reads the longer checkpoint without shrinking it.
  const LimitTables shorter = limiting_tables(1000, opt);
  EXPECT_EQ(shorter.scaled.size(), 1001u);
  const LimitTables again = limiting_tables(3000, opt);
  EXPECT_EQ(again.scaled, fresh.scaled);
}

TEST_F(LimitsCheckpoint, SettingsMismatchIsAnIoError) {
  LimitOptions opt;
  opt.checkpoint_path = path_;
  limiting_tables(200, opt);
  opt.window_eps = 0x1p-60L;
  try {
    limiting_tables(300, opt);
    FAIL() << "mismatch accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
  }
}

TEST_F(LimitsCheckpoint, CorruptFileIsAnIoError) {
  { std::ofstream(path_) << "not a checkpoint\n"; }
  LimitOptions opt;
  opt.checkpoint_path = path_;
  EXPECT_THROW(limiting_tables(100, opt), Error);
}
