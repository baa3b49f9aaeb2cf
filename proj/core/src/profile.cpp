#include "implode/profile.hpp"

#include "implode/barriers.hpp"
#include "implode/errors.hpp"
#include "implode/fields.hpp"

#include <boost/math/differentiation/autodiff.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace implode {

namespace mp = boost::multiprecision;

const char* segment_name(Segment s) {
  switch (s) {
    case Segment::FarField: return "far_field";
    case Segment::Series: return "series";
    case Segment::Continuation: return "continuation";
    case Segment::Origin: return "origin";
  }
  return "unknown";
}

SonicSlopes sonic_slopes(const ParamSet& p) {
  PrecisionScope scope(p.bits);
  const Real r = at_current(p.r), w = at_current(p.w_minus);
  const Real sigma = 1 - w;
  const Real d = ParamSet::d, l = ParamSet::ell;
  SonicSlopes s;
  s.e1 = -2 * (d * w - l * (r - 1)) * sigma;
  // dDelta_1/dw and dDelta_2/dw at P2; the omitted factors vanish there.
  s.e2 = 3 * w * w - 2 * (1 + r) * w + r - d * sigma * sigma;
  s.e3 = -2 * sigma * sigma;
  s.e4 = (sigma / l) * (2 * (l + d - 1) * w - (l + d + l * r - r));
  const Real diff = s.e3 - s.e2;
  s.c_minus = (diff - mp::sqrt(diff * diff + 4 * s.e1 * s.e4)) / (2 * mp::abs(s.e4));
  s.w_prime0 = (s.e1 + s.e2 * s.c_minus) / (2 * sigma * (1 + s.c_minus));
  s.sigma_prime0 = (s.e3 + s.e4 * s.c_minus) / (2 * sigma * (1 + s.c_minus));
  return s;
}

namespace {

struct Raw {
  double x, sigma, w, sigma_p, w_p;
  double F;  // sigma + sigma', formed before rounding to double
  Segment seg;
  bool sonic = false;
};

Raw sw_raw(const FieldCoeffs<long double>& c, double x, double sigma, double w, Segment seg) {
  auto f = eval_sw_fields<long double>(c, sigma, w);
  const long double sp = -f.delta2 / f.delta;
  return {x, sigma, w, static_cast<double>(sp), static_cast<double>(-f.delta1 / f.delta),
          static_cast<double>(sigma + sp), seg};
}

void append(GlobalProfile& gp, const FieldCoeffs<double>& c, const Raw& s) {
  const double r = c.r;
  auto f = eval_sw_fields(c, s.sigma, s.w);
  const double Z = std::exp(s.x);
  const double U = -Z * s.w, S = 3 * Z * s.sigma;
  const double UZ = -(s.w + s.w_p), SZ = 3 * s.F;
  const double t1[3] = {(r - 1) * U, (Z + U) * UZ, S * SZ / 3};
  const double t2[3] = {(r - 1) * S, (Z + U) * SZ, (UZ + 2 * U / Z) * S / 3};
  auto rel = [](const double* t) {
    double sc = std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]);
    return sc > 0 ? std::abs(t[0] + t[1] + t[2]) / sc : 0.0;
  };
  gp.x_grid.push_back(s.x);
  gp.sigma.push_back(s.sigma);
  gp.w.push_back(s.w);
  gp.sigma_prime.push_back(s.sigma_p);
  gp.w_prime.push_back(s.w_p);
  gp.F.push_back(s.F);
  gp.delta.push_back(f.delta);
  gp.delta1.push_back(f.delta1);
  gp.delta2.push_back(f.delta2);
  gp.Z.push_back(Z);
  gp.U_E.push_back(U);
  gp.S_E.push_back(S);
  const double F = std::abs(s.F);
  gp.margin_ii.push_back(1 - (s.w + s.w_p) - F);
  gp.margin_iii.push_back(1 - s.w - F);
  gp.radial_residual.push_back(std::max(rel(t1), rel(t2)));
  gp.segment.push_back(s.seg);
}

}  // namespace

GlobalProfile build_profile(const ShootResult& result, const ProfileOptions& opt) {
  if (result.status != ShootStatus::Converged)
    fail(Errc::OutOfRange, std::string("profile needs a CONVERGED shoot, got ") + status_name(result.status));
  ParamSet p;
  {
    PrecisionScope scope(opt.min_bits);
    p = params_from_R(at_current(result.midpoint()), opt.min_bits);
  }
  return build_profile(p, result.N, opt);
}

GlobalProfile build_profile(const ParamSet& p_in, int N, const ProfileOptions& opt) {
  if (opt.samples_per_side < 16 || opt.series_samples < 3 || opt.continuation_steps < 4)
    fail(Errc::OutOfRange, "profile grid too coarse");
  GlobalProfile gp;
  gp.N = N;
  gp.R = to_double(p_in.R);
  const SpecialPoints sp = special_points(p_in);
  const double tauQ5 = to_double(sp.Q5.tau);

  double tau_h = 0;
  SonicSeries s = series_for_continuation(p_in, std::abs(tauQ5), opt.min_bits, gp.bits, tau_h);
  const ParamSet& p = s.params;
  gp.params = p;
  gp.K = s.K;
  gp.tau_handoff = tau_h;
  gp.slopes = sonic_slopes(p);

  const auto cd = coeffs<double>(p);
  const auto cl = coeffs<long double>(p);
  std::vector<Raw> raw;

  // x < 0: the far-field branch down to tau_h, shifted into the series gauge.
  IntegrateOptions left = opt.integrate;
  left.record = true;
  const double log_range_left = std::log(left.sigma_max / to_double(1 - p.w_minus));
  left.max_step = log_range_left / opt.samples_per_side;
  FarFieldBranch fb = integrate_P6_to_Q2(p, tau_h, left);

  const std::vector<Real> xs = x_series_at_sonic(s);
  double x_shift = 0;
  {
    PrecisionScope scope(gp.bits);
    const Real one_a = 1 + at_current(p.a), wm = at_current(p.w_minus);
    auto x_at = [&](const Real& t) {
      Real x = 0;
      for (int k = s.K; k >= 0; --k) x = x * t + xs[k];
      return x;
    };
    const Real th = Real(tau_h);
    const Real uL = s.eval(th);
    gp.stitch_mismatch = static_cast<double>(mp::abs(Real(fb.u_F) - uL) / uL);
    if (!(gp.stitch_mismatch <= 10 * opt.stitch_tol)) {
      std::ostringstream os;
      os << "far-field and series disagree by " << gp.stitch_mismatch << " at tau = " << tau_h;
      fail(Errc::StitchMismatch, os.str());
    }
    x_shift = to_double(x_at(th)) - fb.x_star;

    // |tau| <= tau_h from the series; derivatives from field quotients in
    // working precision, closed-form slopes at tau = 0.
    const auto cr = coeffs<Real>(p);
    const int M = opt.series_samples | 1;
    const Real sig0 = 1 - wm;
    Real slope_err = 0;
    for (int i = 0; i < M; ++i) {
      const int j = i - M / 2;
      const Real t = -Real(tau_h) * j / (M / 2);  // x increases as tau decreases
      const Real u = s.eval(t);
      const Real sigma = mp::sqrt(u) / one_a, w = wm - t / one_a;
      Raw rw{to_double(x_at(t)), to_double(sigma), to_double(w), 0, 0, 0, Segment::Series};
      if (j == 0) {
        rw.sigma_p = to_double(gp.slopes.sigma_prime0);
        rw.w_p = to_double(gp.slopes.w_prime0);
        rw.F = to_double(sigma + gp.slopes.sigma_prime0);
        rw.sonic = true;
        // Same slopes from the series: dsigma/dx = (du/dtau) / (2 (1 + a)^2 sigma dx/dtau).
        const Real dsig = s.deriv(Real(0)) / (2 * one_a * one_a * sig0) / xs[1];
        const Real dw = -1 / (one_a * xs[1]);
        slope_err = mp::max(mp::abs(dsig - gp.slopes.sigma_prime0), mp::abs(dw - gp.slopes.w_prime0));
      } else {
        auto f = eval_sw_fields(cr, sigma, w);
        rw.sigma_p = to_double(-f.delta2 / f.delta);
        rw.w_p = to_double(-f.delta1 / f.delta);
        rw.F = to_double(sigma - f.delta2 / f.delta);
      }
      raw.push_back(rw);
    }
    gp.slope_mismatch = to_double(slope_err);
  }
  // The far-field leg ends on the series sample at tau_h; keep only the series copy.
  for (std::size_t i = 0; i + 1 < fb.curve.samples.size(); ++i) {
    const auto& cs = fb.curve.samples[i];
    raw.push_back(sw_raw(cl, cs.x + x_shift, cs.abscissa, cs.ordinate, Segment::FarField));
  }

  // x > 0: Taylor continuation from -tau_h until the radius collapses at the
  // fold near Q_A, then sigma-w toward P4.
  TaylorPath path;
  {
    PrecisionScope scope(gp.bits);
    const Real th = -Real(tau_h);
    Real x0 = 0;
    for (int k = s.K; k >= 0; --k) x0 = x0 * th + xs[k];
    TaylorOptions to;
    to.bits = gp.bits;
    to.max_step = (std::abs(tauQ5) - tau_h) / opt.continuation_steps;
    path = continue_tu(p, th, s.eval(th), x0, at_current(sp.Q5.tau), to);
  }
  double sig_end = 0, w_end = 0, x_end = 0;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const auto& n = path.nodes[i];
    PrecisionScope scope(gp.bits);
    auto sw = psi_inverse(p, PointTU{n.t, n.u});
    sig_end = to_double(sw.sigma);
    w_end = to_double(sw.w);
    x_end = to_double(n.x);
    if (i + 1 < path.nodes.size()) raw.push_back(sw_raw(cl, x_end, sig_end, w_end, Segment::Continuation));
  }
  IntegrateOptions right = opt.integrate;
  right.record = true;
  right.max_step = std::log(sig_end / right.sigma_floor) / opt.samples_per_side;
  OriginLeg ol = integrate_sw_to_origin(p, sig_end, w_end, x_end, right);
  if (ol.delta1_sign_changes != 1) {
    std::ostringstream os;
    os << "Delta_1 changes sign " << ol.delta1_sign_changes << " times on the way to P4";
    fail(Errc::SonicEscapeFailed, os.str());
  }
  gp.x_A = ol.x_A;
  gp.sigma_1 = ol.sigma_1;
  for (const auto& cs : ol.curve.samples) raw.push_back(sw_raw(cl, cs.x, cs.abscissa, cs.ordinate, Segment::Origin));

  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!gp.x_grid.empty() && !(raw[i].x > gp.x_grid.back())) {
      if (raw[i].sonic) {
        // never drop the sonic sample in favour of a neighbour
        gp.x_grid.pop_back();
        gp.sigma.pop_back(); gp.w.pop_back(); gp.sigma_prime.pop_back(); gp.w_prime.pop_back(); gp.F.pop_back();
        gp.delta.pop_back(); gp.delta1.pop_back(); gp.delta2.pop_back();
        gp.Z.pop_back(); gp.U_E.pop_back(); gp.S_E.pop_back();
        gp.margin_ii.pop_back(); gp.margin_iii.pop_back();
        gp.radial_residual.pop_back(); gp.segment.pop_back();
      } else {
        continue;
      }
    }
    if (raw[i].sonic) gp.sonic_index = gp.x_grid.size();
    append(gp, cd, raw[i]);
  }

  const std::size_t n = gp.x_grid.size();
  gp.eta_min = std::numeric_limits<double>::infinity();
  double jump = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::min(gp.margin_ii[i], gp.margin_iii[i]);
    if (m < gp.eta_min) {
      gp.eta_min = m;
      gp.x_at_eta_min = gp.x_grid[i];
    }
    if (i > 0)
      jump = std::max({jump, std::abs(gp.margin_ii[i] - gp.margin_ii[i - 1]),
                       std::abs(gp.margin_iii[i] - gp.margin_iii[i - 1])});
    gp.max_radial_residual = std::max(gp.max_radial_residual, gp.radial_residual[i]);
  }
  gp.eta_min_corrected = gp.eta_min - jump / 2;
  return gp;
}

namespace {

double lsq_slope(const std::vector<double>& X, const std::vector<double>& Y) {
  const double n = static_cast<double>(X.size());
  if (X.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = std::accumulate(X.begin(), X.end(), 0.0) / n, my = std::accumulate(Y.begin(), Y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxy += (X[i] - mx) * (Y[i] - my);
    sxx += (X[i] - mx) * (X[i] - mx);
  }
  return sxy / sxx;
}

int sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

RepulsivityReport verify_repulsivity(const GlobalProfile& gp) {
  const std::size_t n = gp.x_grid.size();
  if (n < 8) fail(Errc::OutOfRange, "profile has too few samples");
  const auto c = coeffs<double>(gp.params);
  const double r = c.r, wm = c.w_minus, wp = c.w_plus, a = c.a;
  RepulsivityReport rep;
  const std::size_t s0 = gp.sonic_index;

  // Sign pattern of (Delta, Delta_1, Delta_2).
  rep.sign_pattern_ok = true;
  auto violate = [&](std::size_t i, const char* what) {
    if (!rep.sign_pattern_ok) return;
    rep.sign_pattern_ok = false;
    std::ostringstream os;
    os << what << " at x = " << gp.x_grid[i];
    rep.sign_pattern_note = os.str();
  };
  int prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s0) continue;
    const double x = gp.x_grid[i];
    if (x < 0) {
      if (!(gp.delta[i] < 0)) violate(i, "Delta >= 0 for x < 0");
      if (!(gp.delta1[i] > 0)) violate(i, "Delta_1 <= 0 for x < 0");
      if (!(gp.delta2[i] < 0)) violate(i, "Delta_2 >= 0 for x < 0");
    } else {
      if (!(gp.delta[i] > 0)) violate(i, "Delta <= 0 for x > 0");
      if (!(gp.delta2[i] > 0)) violate(i, "Delta_2 <= 0 for x > 0");
      if (x < gp.x_A && !(gp.delta1[i] < 0)) violate(i, "Delta_1 >= 0 on (0, x_A)");
      if (x > gp.x_A && !(gp.delta1[i] > 0)) violate(i, "Delta_1 <= 0 beyond x_A");
    }
    const int sg = sgn(gp.delta1[i]);
    if (sg != 0) {
      if (prev != 0 && sg != prev) ++rep.delta1_zeros;
      prev = sg;
    }
  }
  if (rep.delta1_zeros != 2) violate(s0, "Delta_1 does not vanish exactly twice");

  rep.barrier_margin_min = std::numeric_limits<double>::infinity();
  std::size_t imax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gp.x_grid[i] > 0)
      rep.barrier_margin_min = std::min(rep.barrier_margin_min, gp.w[i] - a * (1 + a) * gp.sigma[i] * gp.sigma[i]);
    if (gp.w[i] > gp.w[imax]) imax = i;
  }
  rep.x_w_max = gp.x_grid[imax];
  {
    const double lo = gp.x_grid[imax > 0 ? imax - 1 : 0], hi = gp.x_grid[std::min(imax + 1, n - 1)];
    rep.w_max_at_x_A = lo <= gp.x_A && gp.x_A <= hi;
  }

  rep.eta_min = gp.eta_min;
  rep.eta_min_corrected = gp.eta_min_corrected;
  rep.x_at_eta_min = gp.x_at_eta_min;
  rep.limit_left_ii = gp.margin_ii.front();
  rep.limit_left_iii = gp.margin_iii.front();
  rep.limit_right_ii = gp.margin_ii.back();
  rep.limit_right_iii = gp.margin_iii.back();

  // Tail decay rates over the outermost two decades of sigma.
  {
    std::vector<double> X, Y;
    for (std::size_t i = 0; i < n; ++i)
      if (gp.x_grid[i] > 0 && gp.sigma[i] < 100 * gp.sigma.back()) {
        X.push_back(gp.x_grid[i]);
        Y.push_back(std::log(gp.sigma[i]));
      }
    rep.decay_right = -lsq_slope(X, Y);
    X.clear();
    Y.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (gp.x_grid[i] < 0 && gp.sigma[i] > gp.sigma.front() / 100) {
        X.push_back(gp.x_grid[i]);
        Y.push_back(std::log(gp.sigma[i]));
      }
    rep.decay_left = -lsq_slope(X, Y);
  }

  rep.lower_bound_c = std::numeric_limits<double>::infinity();
  rep.envelope_lo = std::numeric_limits<double>::infinity();
  rep.envelope_hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = gp.x_grid[i];
    rep.lower_bound_c = std::min(rep.lower_bound_c, gp.sigma[i] / std::min(std::exp(-r * x), std::exp(-x)));
    const double env = gp.S_E[i] / std::pow(std::hypot(1.0, gp.Z[i]), 1 - r);
    rep.envelope_lo = std::min(rep.envelope_lo, env);
    rep.envelope_hi = std::max(rep.envelope_hi, env);
    const double ds = std::abs(gp.S_E[i] / (3 * gp.Z[i]) - gp.sigma[i]) / gp.sigma[i];
    const double dw = std::abs(-gp.U_E[i] / gp.Z[i] - gp.w[i]) / std::max(std::abs(gp.w[i]), 1e-300);
    rep.round_trip_max = std::max({rep.round_trip_max, ds, dw});
    rep.max_radial_residual = std::max(rep.max_radial_residual, gp.radial_residual[i]);
    if (i != s0) {
      const double F = gp.F[i];
      const double Ff = -(c.d - 1) * gp.sigma[i] * (gp.w[i] - wm) * (gp.w[i] - wp) / (c.ell * gp.delta[i]);
      const double sc = std::abs(gp.sigma[i]) + std::abs(gp.sigma_prime[i]);
      rep.f_identity_max = std::max(rep.f_identity_max, std::abs(F - Ff) / sc);
    }
  }

  // x_B: w comes back down to w_- beyond x_A.
  rep.x_B = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < n; ++i) {
    if (gp.x_grid[i - 1] <= gp.x_A) continue;
    const double g0 = gp.w[i - 1] - wm, g1 = gp.w[i] - wm;
    if (g0 > 0 && g1 <= 0) {
      const double th = g0 / (g0 - g1);
      auto lerp = [&](const std::vector<double>& v) { return v[i - 1] + th * (v[i] - v[i - 1]); };
      rep.x_B = lerp(gp.x_grid);
      rep.F_at_x_B = lerp(gp.F);
      rep.margin_at_x_B = std::min(lerp(gp.margin_ii), lerp(gp.margin_iii));
      break;
    }
  }

  rep.margins_positive = gp.eta_min > 0;
  if (!rep.margins_positive) {
    std::ostringstream os;
    os << "repulsivity margin " << gp.eta_min << " at x = " << gp.x_at_eta_min;
    fail(Errc::MarginNonpositive, os.str());
  }
  return rep;
}

namespace {

using Poly = std::vector<Real>;

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, Real(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Jet<Real> horner(const Poly& c, const Real& t) {
  Real v = 0, d = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    d = d * t + v;
    v = v * t + c[k];
  }
  return {v, d};
}

Jet<double> to_jet(const Jet<Real>& j) { return {to_double(j.v), to_double(j.d)}; }

using boost::math::differentiation::make_fvar;

template <class F>
std::function<Jet<double>(double)> autodiff_jet(F f) {
  return [f](double t) {
    auto v = f(make_fvar<double, 1>(t));
    return Jet<double>{v.derivative(0), v.derivative(1)};
  };
}

}  // namespace

BarrierReport verify_barriers(const ParamSet& p_in, const SonicSeries& s, int N, std::size_t samples) {
  if (N < 3 || N % 2 == 0) fail(Errc::OutOfRange, "N must be an odd integer >= 3");
  if (s.K < N + 1) fail(Errc::OutOfRange, "series must reach order N + 1");
  BarrierReport rep;
  rep.N = N;
  const unsigned bits = std::max(s.precision_bits, p_in.bits);
  PrecisionScope scope(bits);
  const ParamSet p = params_from_R(at_current(p_in.R), bits);
  const Real al = p.alpha;
  const double R = to_double(p.R), ald = to_double(al), ad = to_double(p.a);
  const double sq = std::sqrt(R);

  Poly u(s.coeffs.begin(), s.coeffs.begin() + N + 1);
  for (auto& v : u) v = at_current(v);
  Poly du(N, Real(0));
  for (int k = 1; k <= N; ++k) du[k - 1] = k * u[k];

  // L[u] = Delta_tau u' - Delta_u as a sum of polynomial terms.
  const Poly uu = mul(u, du);
  std::vector<Poly> terms;
  terms.push_back(mul(Poly{3 * al, Real(-3)}, uu));
  terms.push_back(mul(Poly{-3 * al, -(4 * al - 1), -(al - 2), Real(1)}, du));
  terms.push_back(mul(Poly{Real(2)}, mul(u, u)));
  terms.push_back(mul(Poly{Real(-2), Real(4) / 3 * (al - 4), Real(-10) / 3}, u));
  std::size_t deg = 0;
  for (const auto& t : terms) deg = std::max(deg, t.size());
  Poly L(deg, Real(0)), Labs(deg, Real(0));
  for (const auto& t : terms)
    for (std::size_t k = 0; k < t.size(); ++k) {
      L[k] += t[k];
      Labs[k] += mp::abs(t[k]);
    }
  for (int k = 0; k <= N && k < static_cast<int>(deg); ++k)
    if (Labs[k] > 0) rep.low_order_residual = std::max(rep.low_order_residual, to_double(mp::abs(L[k]) / Labs[k]));
  const Poly Q(L.begin() + N + 1, L.end());

  auto cert = [&](const std::string& name, const std::function<Jet<double>(double)>& f, double lo, double hi,
                  int sign) { rep.certificates.push_back(certify_sign(name, f, lo, hi, sign, samples)); };

  // (a) L[u_(N)] / tau^(N+1) < 0 on [-4/sqrt R, 0).
  cert("L[u_N]/tau^(N+1) < 0", [&](double t) { return to_jet(horner(Q, Real(t))); }, -4 / sq, 0, -1);

  // (b) the root tau_N and positivity to its right.
  const double left = -9 / (5 * sq);
  rep.u_N_at_0 = to_double(u[0]);
  rep.u_N_at_left = to_double(horner(u, Real(left)).v);
  {
    Real lo = left, hi = 0;
    if (horner(u, lo).v < 0) {
      for (int i = 0; i < 200 && hi - lo > 1e-30; ++i) {
        Real mid = (lo + hi) / 2;
        (horner(u, mid).v < 0 ? lo : hi) = mid;
      }
      rep.tau_N = to_double((lo + hi) / 2);
    } else {
      rep.tau_N = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (std::isfinite(rep.tau_N)) {
    const Real tN = rep.tau_N;
    cert("u_N/(tau - tau_N) > 0", [&](double t) {
      const Real d = Real(t) - tN;
      auto j = horner(u, Real(t));
      return to_jet(Jet<Real>{j.v / d, (j.d * d - j.v) / (d * d)});
    }, rep.tau_N, 0, 1);
  } else {
    SignCertificate missing;
    missing.name = "u_N root in (-9/(5 sqrt R), 0)";
    missing.lo = left;
    missing.expected_sign = -1;
    missing.min_value = -rep.u_N_at_left;
    rep.certificates.push_back(missing);
  }

  // (c) (u_(N) - u_g)/tau > 0 on (-9/(5 sqrt R), 0).
  {
    Poly g = u;
    g[0] -= 1;
    g[1] += Real(2) / 3 * (al - 4);
    g[2] -= Real(5) / 3;
    const Poly gq(g.begin() + 1, g.end());  // g(0) = 0
    cert("(u_N - u_g)/tau > 0", [&](double t) { return to_jet(horner(gq, Real(t))); }, left, 0, 1);
  }

  // (d) the linear factor of L[U_O] on (0, a); L[U_O] < 0 there iff it is positive.
  cert("L[U_O] linear factor > 0", [ad](double t) {
    return Jet<double>{7 * ad * (ad + 3) * t - 4 * ad * ad * ad + 27 * ad - 9, 7 * ad * (ad + 3)};
  }, 0, ad, 1);

  // U_sigma1 and U_sigma2 with their vanishing factors divided out.
  cert("L[U_sigma1]/tau < 0", autodiff_jet([ald](auto t) {
    auto D = -2 * t + 3 * ald + 1;
    auto G = (2 * (ald + 1) * t + 2 * (3 * ald + 1)) / D + 1 + t;
    auto D2 = D * D;
    return -16 * (t + 1 - ald) / (81 * D2 * D2) * G * barrier::phi1(ald, t);
  }), 0, ald, -1);
  const double tq5 = (ald - 1) / 2;
  cert("L[U_sigma2]/(tau(alpha-1-2tau)) > 0", autodiff_jet([ald](auto t) {
    auto D = -2 * t + 3 * ald + 1;
    auto tail = -(1 + ald) * t * t + (3 * ald + 1) * (-1 + ald - 2 * t);
    return 16 * (t + 1) * (-1 + ald - t) * tail / (3 * D * D * D);
  }), tq5, 0, 1);
  cert("(U_sigma2 - u_b)/(tau(alpha-1-2tau)) > 0", autodiff_jet([ald](auto t) {
    return -2 * (1 + t) * (-t + ald - 1) / (3 * (-2 * t + 3 * ald + 1) * (ald - t));
  }), tq5, 0, 1);

  // L[u_(2)] = tau^3 (V + W tau) on (0, alpha).
  {
    const Real a2 = at_current(s.coeffs[2]), a3 = at_current(s.coeffs[3]);
    rep.V = to_double(-p.gamma(3) * a3);
    rep.W = to_double(-4 * a2 * a2 - 4 * a2 / 3);
    const double V = rep.V, W = rep.W;
    cert("L[u_2]/tau^3 < 0", [V, W](double t) { return Jet<double>{V + W * t, W}; }, 0, ald, -1);
  }

  rep.all_hold = true;
  for (const auto& c : rep.certificates) {
    if (c.holds) continue;
    rep.all_hold = false;
    std::ostringstream os;
    os << c.name << " fails: guarded margin " << c.min_guarded << " at tau = " << c.worst_tau;
    fail(Errc::CertificateFailed, os.str());
  }
  return rep;
}

}  // namespace implode
