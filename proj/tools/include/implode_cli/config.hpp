#pragma once

#include "implode/params.hpp"

#include <optional>
#include <string>

namespace implode::cli {

// Everything a run depends on. Two runs with equal configs write identical files.
struct RunConfig {
  std::string subcommand;

  // Parameter entry points; at most one may be set.
  std::optional<std::string> R, r, a, alpha, lambda, w_minus;
  std::optional<int> N;

  int K = 64;          // series order
  int K_limit = 100000;  // sinfty length
  int K_rat = 64;      // exact prefix of the limiting sequences
  unsigned precision_bits = kDefaultBits;
  int threads = 1;

  double rtol = 1e-15;         // integrator
  double bisect_tol = 1e-10;   // shooting bracket width
  double tau_star = 0;         // 0: alpha(N + 1/2) / 2
  int prescan = 0;             // gap samples before bisection, 0 to skip
  int cert_samples = 4096;
  int samples_per_side = 4096;
  int series_samples = 257;
  double sigma_max = 1e4;
  double sigma_floor = 1e-6;

  std::string out_dir = ".";
  std::string checkpoint;
  int checkpoint_every = 10000;
};

// Reads IMPLODE_PRECISION_BITS and IMPLODE_THREADS; flags given on the
// command line win over the environment.
void apply_environment(RunConfig& cfg, bool bits_from_flag, bool threads_from_flag);

// Throws Errc::Usage on inconsistent or out-of-range settings.
void validate(const RunConfig& cfg);

// Builds the ParamSet from whichever entry point is set. Throws Errc::Usage
// when none is.
ParamSet params_from_config(const RunConfig& cfg);

}  // namespace implode::cli
