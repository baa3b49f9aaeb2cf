#pragma once

#include "implode/certificate.hpp"
#include "implode/integrate.hpp"
#include "implode/shoot.hpp"

#include <string>
#include <vector>

namespace implode {

// Linearisation of (Delta_1, Delta_2) at P2 and the slopes of the smooth
// solution through it.
struct SonicSlopes {
  Real e1, e2, e3, e4;
  Real c_minus;       // dw/dsigma along the smooth branch
  Real w_prime0;      // dw/dx at x = 0
  Real sigma_prime0;  // dsigma/dx at x = 0
};

SonicSlopes sonic_slopes(const ParamSet& p);

enum class Segment { FarField, Series, Continuation, Origin };
const char* segment_name(Segment s);

struct ProfileOptions {
  IntegrateOptions integrate;
  int samples_per_side = 4096;  // target density in log sigma on each SW leg
  int series_samples = 257;     // uniform in tau over [-tau0, tau0], odd so tau = 0 is a node
  int continuation_steps = 256; // Taylor nodes between -tau0 and the radius collapse
  double stitch_tol = 1e-9;     // relative; STITCH_MISMATCH beyond 10x
  unsigned min_bits = kDefaultBits;
};

struct GlobalProfile {
  ParamSet params;
  int N = 0;
  double R = 0;
  std::vector<double> x_grid;  // strictly increasing
  std::vector<double> sigma, w, sigma_prime, w_prime;
  std::vector<double> F;  // sigma + sigma', summed before rounding
  std::vector<double> delta, delta1, delta2;
  std::vector<double> Z, U_E, S_E;
  std::vector<double> margin_ii, margin_iii;
  std::vector<double> radial_residual;  // max of the two radial equations, relative to local scale
  std::vector<Segment> segment;

  double eta_min = 0;            // min over samples of both margins
  double eta_min_corrected = 0;  // eta_min less half the largest jump between neighbours
  double x_at_eta_min = 0;
  double x_A = 0, sigma_1 = 0;
  double tau_handoff = 0;
  double stitch_mismatch = 0;  // |u_F - u_L| / u at tau_handoff
  double max_radial_residual = 0;
  std::size_t sonic_index = 0;  // sample at x = 0
  SonicSlopes slopes;
  double slope_mismatch = 0;  // closed-form sonic slopes against the series
  unsigned bits = 0;
  int K = 0;
};

// Builds the profile at the bracket midpoint of a CONVERGED shoot.
GlobalProfile build_profile(const ShootResult& result, const ProfileOptions& opt = {});
GlobalProfile build_profile(const ParamSet& p, int N, const ProfileOptions& opt = {});

struct RepulsivityReport {
  bool sign_pattern_ok = false;
  int delta1_zeros = 0;          // sign changes of Delta_1 along x, the sonic point included
  std::string sign_pattern_note; // first violation, empty when none
  double barrier_margin_min = 0; // min of w - a(1+a) sigma^2 over x > 0
  bool w_max_at_x_A = false;
  double x_w_max = 0;
  double eta_min = 0, eta_min_corrected = 0, x_at_eta_min = 0;
  double limit_right_ii = 0, limit_right_iii = 0;  // margins at x_max (expect 1)
  double limit_left_ii = 0, limit_left_iii = 0;    // margins at x_min (expect 2 - r)
  double decay_right = 0, decay_left = 0;          // fitted -d log sigma / dx
  double lower_bound_c = 0;       // min sigma / min(e^{-rx}, e^{-x})
  double envelope_lo = 0, envelope_hi = 0;  // range of S_E / <Z>^{1-r}
  double f_identity_max = 0;      // relative, x != 0
  double x_B = 0, F_at_x_B = 0, margin_at_x_B = 0;
  double round_trip_max = 0;      // inverse Emden map against (sigma, w)
  double max_radial_residual = 0;
  bool margins_positive = false;
};

// Throws MARGIN_NONPOSITIVE naming the offending x.
RepulsivityReport verify_repulsivity(const GlobalProfile& gp);

struct BarrierReport {
  int N = 0;
  std::vector<SignCertificate> certificates;
  double u_N_at_0 = 0;
  double u_N_at_left = 0;      // u_(N)(-9/(5 sqrt R))
  double tau_N = 0;            // root of u_(N) in (-9/(5 sqrt R), 0)
  double low_order_residual = 0;  // largest |coefficient| of L[u_(N)] below tau^(N+1), relative
  double V = 0, W = 0;         // L[u_(2)] = V tau^3 + W tau^4
  bool all_hold = false;
};

// Throws CERTIFICATE_FAILED naming the certificate and its worst sample.
BarrierReport verify_barriers(const ParamSet& p, const SonicSeries& s, int N,
                              std::size_t samples = kDefaultCertificateSamples);

}  // namespace implode
