#include "implode/limits.hpp"

#include "implode/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace implode {

namespace {

constexpr const char* kCheckpointMagic = "implode-sinfty-checkpoint 1";

std::string hexfloat(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%La", x);
  return buf;
}

struct Checkpoint {
  int K_rat = 0;
  std::string eps;
  std::vector<long double> scaled;
};

std::optional<Checkpoint> read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic)
    fail(Errc::Io, "not a checkpoint file: " + path);
  Checkpoint c;
  int count = 0;
  in >> c.K_rat >> c.eps >> count;
  if (!in || count < 0) fail(Errc::Io, "corrupt checkpoint header: " + path);
  c.scaled.reserve(count);
  for (int i = 0; i < count; ++i) {
    int n;
    std::string hex;
    in >> n >> hex;
    if (!in || n != i) fail(Errc::Io, "corrupt checkpoint body: " + path);
    c.scaled.push_back(std::strtold(hex.c_str(), nullptr));
  }
  return c;
}

void write_checkpoint(const std::string& path, const LimitOptions& opt, const std::vector<long double>& b) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(Errc::Io, "cannot write checkpoint: " + tmp);
    out << kCheckpointMagic << '\n' << opt.K_rat << ' ' << hexfloat(opt.window_eps) << ' ' << b.size() << '\n';
    for (std::size_t n = 0; n < b.size(); ++n) out << n << ' ' << hexfloat(b[n]) << '\n';
    if (!out) fail(Errc::Io, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(Errc::Io, "cannot move checkpoint into place: " + path);
}

// Windowed sum_{j=lo}^{hi} b_j b_(m-j) exp(L_j + L_(m-j) - L_n). The weights are
// largest at the two ends and fall off toward the middle, so each end is
// summed inward until the weight drops below eps.
long double windowed(const std::vector<long double>& b, const std::vector<long double>& L, int lo, int hi,
                     int m, int n, long double eps) {
  long double s = 0;
  int j = lo;
  for (; j <= hi; ++j) {
    long double w = std::exp(L[j] + L[m - j] - L[n]);
    if (w < eps && j > lo + 2) break;
    s += b[j] * b[m - j] * w;
  }
  for (int k = hi; k >= j; --k) {
    long double w = std::exp(L[k] + L[m - k] - L[n]);
    if (w < eps && k < hi - 2) break;
    s += b[k] * b[m - k] * w;
  }
  return s;
}

// Least-squares fit y = c0 + c1 x1 + c2 x2; returns c0.
double fit3(const std::vector<double>& y, const std::vector<double>& x1, const std::vector<double>& x2) {
  long double S[3][4] = {};
  for (std::size_t i = 0; i < y.size(); ++i) {
    long double v[3] = {1, x1[i], x2[i]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) S[r][c] += v[r] * v[c];
      S[r][3] += v[r] * y[i];
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::fabs(S[r][c]) > std::fabs(S[piv][c])) piv = r;
    for (int k = 0; k < 4; ++k) std::swap(S[c][k], S[piv][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      long double f = S[r][c] / S[c][c];
      for (int k = 0; k < 4; ++k) S[r][k] -= f * S[c][k];
    }
  }
  return static_cast<double>(S[0][3] / S[0][0]);
}

// Extrapolated limit from ratios on [lo, hi]. Consecutive ratios are averaged
// first because even and odd n approach the limit at different rates.
double extrapolate(const std::vector<double>& ratio, int lo, int hi) {
  std::vector<double> y, x1, x2;
  for (int n = std::max(lo, 2); n <= hi; ++n) {
    y.push_back(0.5 * (ratio[n] + ratio[n - 1]));
    double m = n - 0.5;
    x1.push_back(1 / std::sqrt(m));
    x2.push_back(1 / m);
  }
  return fit3(y, x1, x2);
}

}  // namespace

long double LimitTables::mu(long double n) { return std::sqrt(8 * n + 4.0L / 3); }

long double LimitTables::lambda(long double n) { return (n - 1.0L / 3) / mu(n); }

long double LimitTables::Mhat(int n) const { return std::exp(log_Mhat.at(n)); }

long double LimitTables::a_inf(int n) const { return scaled.at(n) * Mhat(n); }

std::vector<Rational> limiting_exact(int K) {
  std::vector<Rational> a{Rational(1)};
  if (K >= 1) a.emplace_back(2);
  const Rational three_halves(3, 2), sixteen_thirds(16, 3);
  for (int n = 2; n <= K; ++n) {
    Rational s1 = 0, s2 = 0;
    for (int j = 2; j <= n - 1; ++j) s1 += a[j] * a[n + 1 - j];
    for (int j = 1; j <= n - 1; ++j) s2 += a[j] * a[n - j];
    Rational v = Rational(5 - n) * a[n - 1] - (Rational(n) - sixteen_thirds) * a[n - 2] -
                 three_halves * Rational(n + 1) * s1 + (three_halves * Rational(n) - 2) * s2;
    a.push_back(v / 8);
  }
  return a;
}

LimitTables limiting_tables(int K, const LimitOptions& opt) {
  if (K < 2) fail(Errc::OutOfRange, "limiting tables need K >= 2");
  LimitTables t;
  t.K = K;
  t.K_rat = std::min(K, opt.K_rat);
  t.exact = limiting_exact(t.K_rat);

  t.log_Mhat.assign(K + 1, 0.0L);
  t.log_Mhat[1] = std::log(2.0L);
  for (int n = 2; n <= K; ++n) t.log_Mhat[n] = t.log_Mhat[n - 1] + std::log(LimitTables::mu(n - 1) / 8);
  const auto& L = t.log_Mhat;

  std::vector<long double>& b = t.scaled;
  b.reserve(K + 1);
  std::optional<Checkpoint> ck;
  if (!opt.checkpoint_path.empty()) ck = read_checkpoint(opt.checkpoint_path);
  if (ck) {
    if (ck->K_rat != opt.K_rat || ck->eps != hexfloat(opt.window_eps))
      fail(Errc::Io, "checkpoint was written with different settings: " + opt.checkpoint_path);
    b = ck->scaled;
    if (static_cast<int>(b.size()) > K + 1) b.resize(K + 1);
  }
  if (b.empty()) {
    PrecisionScope scope(128);
    for (int n = 0; n <= t.K_rat; ++n) {
      Real v = Real(numerator(t.exact[n])) / Real(denominator(t.exact[n]));
      b.push_back(to_ldouble(v) / std::exp(L[n]));
    }
  }

  const std::size_t start = b.size();
  for (int n = static_cast<int>(start); n <= K; ++n) {
    long double s1 = windowed(b, L, 2, n - 1, n + 1, n, opt.window_eps);
    long double s2 = windowed(b, L, 1, n - 1, n, n, opt.window_eps);
    long double v = (5 - n) * b[n - 1] * std::exp(L[n - 1] - L[n]) -
                    (n - 16.0L / 3) * b[n - 2] * std::exp(L[n - 2] - L[n]) - 1.5L * (n + 1) * s1 +
                    (1.5L * n - 2) * s2;
    b.push_back(v / 8);
    if (!opt.checkpoint_path.empty() && opt.checkpoint_every > 0 && n % opt.checkpoint_every == 0)
      write_checkpoint(opt.checkpoint_path, opt, b);
  }
  if (!opt.checkpoint_path.empty() && b.size() > start) write_checkpoint(opt.checkpoint_path, opt, b);

  t.ratio.assign(K + 1, 0.0);
  t.ratio[1] = static_cast<double>(b[1] + LimitTables::lambda(1) * b[0] * std::exp(L[0] - L[1]));
  for (int n = 2; n <= K; ++n)
    t.ratio[n] = static_cast<double>(b[n] + LimitTables::lambda(n) * b[n - 1] * std::exp(L[n - 1] - L[n]));
  return t;
}

SInfinityResult s_infinity(int K, const LimitOptions& opt) {
  if (K < 1000) fail(Errc::OutOfRange, "s_infinity needs K >= 1000");
  LimitTables t = limiting_tables(K, opt);
  const auto& r = t.ratio;
  SInfinityResult res;
  res.K = K;
  res.ratio_K = r[K];
  res.ratio_trace.assign(r.begin() + 1, r.end());

  for (int n = 100; n <= K; ++n) {
    double c = std::fabs(r[n] - r[n - 1]) * std::pow(static_cast<double>(n), 1.5);
    res.C_envelope = std::max(res.C_envelope, c);
    if (n >= K / 2) res.C_tail = std::max(res.C_tail, c);
  }

  // Slope of log max(|d_n|, |d_(n-1)|) against log n, sampled on even n.
  {
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = 102; n <= K; n += 2) {
      double d = std::max(std::fabs(r[n] - r[n - 1]), std::fabs(r[n - 1] - r[n - 2]));
      if (d <= 0) continue;
      long double x = std::log(static_cast<long double>(n)), y = std::log(static_cast<long double>(d));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    res.envelope_slope = static_cast<double>((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
  }

  res.value = extrapolate(r, K / 10, K);
  double coarse = extrapolate(r, K / 20, K / 2);
  res.fit_variation = std::fabs(res.value - coarse);
  res.error_estimate = 2 * res.C_tail / std::sqrt(static_cast<double>(K)) + res.fit_variation;
  res.converged = res.envelope_slope <= -1.25;
  res.claim_holds = res.converged && res.value - res.error_estimate > 0.5;
  if (!res.converged) {
    std::ostringstream os;
    os << "ratio differences decay with slope " << res.envelope_slope << ", expected about -1.5";
    fail(Errc::NotConverged, os.str());
  }
  return res;
}

}  // namespace implode
