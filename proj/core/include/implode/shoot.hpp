#pragma once

#include "implode/integrate.hpp"

#include <string>
#include <vector>

namespace implode {

struct ShootOptions {
  IntegrateOptions integrate;
  double margin = 1e-3;          // probes at N + margin and N + 1 - margin
  double integer_guard = 1e-6;   // R is never evaluated closer than this to an integer
  int n_floor = 25;              // validated-range floor (reporting only)
  int max_iterations = 60;
  double tau_star = 0;           // 0: alpha(N + 1/2) / 2
  unsigned min_bits = kDefaultBits;
};

struct GapResult {
  double R = 0;
  double tau_star = 0;
  double value = 0;   // u_L(tau*) - u_F(tau*); +inf when u_L exits through u_b first
  double error = 0;
  bool exited_through_ub = false;
  double u_L = 0, u_F = 0;
  double tau_handoff = 0;  // series / continuation handoff
  unsigned bits = 0;
  int K = 0;
  int sign() const { return value > 0 ? 1 : (value < 0 ? -1 : 0); }
};

// Sonic series sized for a Taylor continuation from its own tau0 out to
// |tau_to|: precision from the continuation budget, tail at tau0 below
// 2^(32 - bits). Reports the bits used and tau0.
SonicSeries series_for_continuation(const ParamSet& p, double tau_to, unsigned min_bits, unsigned& bits_out,
                                    double& tau_h);

// Throws INTEGER_RESONANCE, SANDWICH_VIOLATION, GAP_BELOW_NOISE.
GapResult matching_gap(const ParamSet& p, double tau_star, const ShootOptions& opt = {});

enum class ShootStatus { Converged, NoBracket, PrecisionLimit };
const char* status_name(ShootStatus s);

struct ShootResult {
  int N = 0;
  Real lo, hi;  // gap(lo) > 0 > gap(hi)
  double width = 0;
  double tau_star = 0;
  std::vector<GapResult> gap_history;
  ShootStatus status = ShootStatus::NoBracket;
  bool below_floor = false;
  int iterations = 0;
  std::string note;
  Real midpoint() const;
};

ShootResult find_R_N(int N, double tol, const ShootOptions& opt = {});

// Gap signs on an even grid of `samples` interior R values in (N, N+1);
// every sign change becomes a bracket.
struct PrescanResult {
  std::vector<GapResult> gaps;
  std::vector<std::pair<double, double>> brackets;
};
PrescanResult prescan(int N, int samples, const ShootOptions& opt = {});

}  // namespace implode
