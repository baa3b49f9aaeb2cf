#include "implode/params.hpp"
#include "implode_cli/commands.hpp"
#include "implode_cli/serialize.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace implode;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("implode_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string sub(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ParamsJsonRoundTrip) {
  const CliRun r = run({"params", "--R", "51/2", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("alpha = "), std::string::npos);
  const auto j = cli::json::parse(slurp(dir_ / "params.json"));
  EXPECT_EQ(j.at("precision").at("bits"), 256);
  const ParamSet back = cli::params_from_json(j.at("results").at("params"));
  EXPECT_TRUE(cli::params_equal(back, params_from_R(Real(25.5))));
}

TEST_F(Cli, EntryPointsAreExclusive) {
  const CliRun r = run({"params", "--R", "25.5", "--r", "1.2", "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.err.find("\"USAGE\""), std::string::npos);
}

TEST_F(Cli, DomainErrorExitsOne) {
  const CliRun r = run({"params", "--r", "2.5", "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kExitDomain);
  const auto j = cli::json::parse(r.err);
  EXPECT_EQ(j.at("error").at("code"), "OUT_OF_RANGE");
  EXPECT_EQ(j.at("error").at("kind"), "domain");
}

TEST_F(Cli, BadPrecisionIsUsage) {
  const CliRun r = run({"params", "--R", "25.5", "--bits", "32", "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.err.find("usage"), std::string::npos);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"nonsense"}).code, cli::kExitDomain);
}

TEST_F(Cli, VerificationFailureExitsTwo) {
  // At this length the tail bound is too wide for the claim.
  const CliRun r = run({"sinfty", "--K", "2000", "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kExitVerification);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "sinfty.csv"));
}

TEST_F(Cli, SinftyCheckpointResume) {
  const std::string ck = sub("ck.txt");
  run({"sinfty", "--K", "1500", "--checkpoint", ck, "--checkpoint-every", "500", "--out", sub("a")});
  ASSERT_TRUE(fs::exists(ck));
  run({"sinfty", "--K", "2500", "--checkpoint", ck, "--out", sub("b")});
  run({"sinfty", "--K", "2500", "--out", sub("c")});
  EXPECT_EQ(slurp(dir_ / "b" / "sinfty.csv"), slurp(dir_ / "c" / "sinfty.csv"));
}

TEST_F(Cli, SeriesOutputsAreDeterministic) {
  // Same configuration, output directory included, run twice.
  const std::vector<std::string> args{"series", "--R", "25.5", "--K", "40", "--out", dir_.string()};
  const char* files[] = {"series.csv", "comparison.csv", "series.json"};
  ASSERT_EQ(run(args).code, 0);
  std::vector<std::string> first;
  for (const char* f : files) first.push_back(slurp(dir_ / f));
  ASSERT_EQ(run(args).code, 0);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_FALSE(first[i].empty()) << files[i];
    EXPECT_EQ(first[i], slurp(dir_ / files[i])) << files[i];
  }
}

TEST_F(Cli, ExportLabelsAllSpecialPoints) {
  ASSERT_EQ(run({"export", "--R", "25.5", "--out", dir_.string()}).code, 0);
  const std::string pts = slurp(dir_ / "portrait_points.csv");
  EXPECT_EQ(pts.rfind("label,sigma,w,tau,u\n", 0), 0u);
  for (const char* l : {"P1,", "P2,", "P3,", "P4,", "P5,", "P5',", "P6,", "Q2,", "Q4,", "Q5,", "Q6,"})
    EXPECT_NE(pts.find(std::string("\n") + l), std::string::npos) << l;
  EXPECT_TRUE(fs::exists(dir_ / "portrait_curves.csv"));
}

TEST_F(Cli, VerifyAtKnownRoot) {
  const CliRun r = run({"verify", "--N", "25", "--R", "25.4217190063", "--out", dir_.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const std::string prof = slurp(dir_ / "certificates.csv");
  EXPECT_FALSE(prof.empty());
}

TEST_F(Cli, ProfileColumns) {
  ASSERT_EQ(run({"profile", "--N", "25", "--R", "25.4217190063", "--samples-per-side", "512", "--out",
                 dir_.string()})
                .code,
            0);
  const std::string csv = slurp(dir_ / "profile.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "x,sigma,w,sigma_prime,w_prime,Z,U_E,S_E,margin_ii,margin_iii,sigma_plus_sigma_prime,delta,delta1,"
            "delta2,radial_residual,segment");
}
