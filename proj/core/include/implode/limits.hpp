#pragma once

#include "implode/precision.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <vector>

namespace implode {

using Rational = boost::multiprecision::mpq_rational;

// The A -> infinity limits of the sonic series and comparison sequences.
//
// Mhat^inf_n grows super-exponentially, so the float stage stores
// b_n = a^inf_n / Mhat^inf_n together with log Mhat^inf_n.
struct LimitTables {
  int K = 0;
  int K_rat = 0;
  std::vector<Rational> exact;      // a^inf_0 .. a^inf_min(K, K_rat)
  std::vector<long double> scaled;  // b_n for 0 <= n <= K (b_0 uses Mhat_0 := 1)
  std::vector<long double> log_Mhat;
  std::vector<double> ratio;        // ahat^inf_n / Mhat^inf_n, zero for n < 1

  static long double mu(long double n);      // sqrt(8n + 4/3)
  static long double lambda(long double n);  // (n - 1/3) / mu(n)
  long double Mhat(int n) const;             // may overflow for large n
  long double a_inf(int n) const;            // b_n Mhat_n, may overflow
};

struct LimitOptions {
  int K_rat = 64;
  // Convolution terms with relative weight below this are dropped.
  long double window_eps = 0x1p-72L;
  std::string checkpoint_path;  // empty: no checkpointing
  int checkpoint_every = 10000;
};

LimitTables limiting_tables(int K, const LimitOptions& opt = {});

// Exact a^inf_0..a^inf_K only.
std::vector<Rational> limiting_exact(int K);

struct SInfinityResult {
  int K = 0;
  double value = 0;            // extrapolated limit
  double error_estimate = 0;   // tail bound plus fit variation
  double ratio_K = 0;          // last computed ratio
  double C_envelope = 0;       // max_{100 <= n <= K} |ratio_n - ratio_(n-1)| n^(3/2)
  double C_tail = 0;           // the same maximum restricted to [K/2, K]
  double envelope_slope = 0;   // fitted log-log slope of the differences
  double fit_variation = 0;
  bool converged = false;
  bool claim_holds = false;    // value - error_estimate > 1/2
  std::vector<double> ratio_trace;  // ratio_n for 1 <= n <= K, index n - 1
};

// Throws NOT_CONVERGED when the differences do not follow the n^(-3/2) envelope.
SInfinityResult s_infinity(int K, const LimitOptions& opt = {});

}  // namespace implode
