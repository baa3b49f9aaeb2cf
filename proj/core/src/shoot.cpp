#include "implode/shoot.hpp"

#include "implode/barriers.hpp"
#include "implode/errors.hpp"
#include "implode/fields.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace implode {

namespace mp = boost::multiprecision;

const char* status_name(ShootStatus s) {
  switch (s) {
    case ShootStatus::Converged: return "CONVERGED";
    case ShootStatus::NoBracket: return "NO_BRACKET";
    case ShootStatus::PrecisionLimit: return "PRECISION_LIMIT";
  }
  return "UNKNOWN";
}

Real ShootResult::midpoint() const { return (lo + hi) / 2; }

SonicSeries series_for_continuation(const ParamSet& p, double tau_star, unsigned min_bits, unsigned& bits_out,
                                    double& tau_h) {
  SeriesOptions so;
  so.precision_bits = min_bits;
  SonicSeries s = compute_sonic_series(p, 64, so);
  unsigned bits = min_bits;
  int K = 64;
  for (int iter = 0; iter < 6; ++iter) {
    tau_h = s.tau0;
    bits = std::max(min_bits, continuation_bits(to_double(p.R), tau_h, tau_star));
    int want = static_cast<int>(bits) + 16;
    if (want > K || bits > s.precision_bits) {
      K = std::max(want, K);
      so.precision_bits = bits;
      s = compute_sonic_series(p, K, so);
      continue;
    }
    if (s.tail_estimate(tau_h) < std::ldexp(1.0, -static_cast<int>(bits) + 32)) break;
    K = K * 3 / 2;
    s = compute_sonic_series(p, K, so);
  }
  tau_h = s.tau0;
  bits_out = std::max(bits, s.precision_bits);
  return s;
}


GapResult matching_gap(const ParamSet& p, double tau_star, const ShootOptions& opt) {
  const double R = to_double(p.R);
  {
    PrecisionScope scope(p.bits);
    Real frac = p.R - mp::round(p.R);
    if (mp::abs(frac) < opt.integer_guard)
      fail(Errc::IntegerResonance, "R lies within the integer guard margin");
  }
  GapResult g;
  g.R = R;
  g.tau_star = tau_star;
  double tau_h = 0;
  SonicSeries s = series_for_continuation(p, tau_star, opt.min_bits, g.bits, tau_h);
  g.K = s.K;
  g.tau_handoff = tau_h;
  if (!(tau_h < tau_star)) fail(Errc::OutOfRange, "tau* lies inside the series disc");

  double uL_err = 0;
  {
    PrecisionScope scope(g.bits);
    Real th = Real(tau_h);
    Real u0 = s.eval(th);
    TaylorOptions to;
    to.bits = g.bits;
    TaylorPath path = continue_tu(s.params, th, u0, Real(0), Real(tau_star), to);
    const auto& last = path.nodes.back();
    if (path.stop == TaylorPath::Stop::Reached) {
      g.u_L = to_double(last.u);
    } else {
      // Radius collapse: only a fold of u_L at the Delta_tau = 0 curve stops
      // the continuation on this side; confirm before reading it as a sign.
      double t = to_double(last.t), u = to_double(last.u);
      double ub = barrier::u_b(to_double(p.alpha), t);
      if (std::abs(u - ub) > 0.05 * std::abs(ub)) {
        std::ostringstream os;
        os << "continuation stalled at tau = " << t << " away from u_b";
        fail(Errc::EventMissed, os.str());
      }
      g.exited_through_ub = true;
      g.u_L = u;
    }
    uL_err = path.truncation_error + s.tail_estimate(tau_h) * std::pow(tau_star / tau_h, R);
  }

  IntegrateOptions io = opt.integrate;
  io.record = false;
  FarFieldBranch fb = integrate_P6_to_Q2(p, tau_star, io);
  g.u_F = static_cast<double>(fb.u_F);
  g.error = fb.u_F_error + uL_err + 4 * std::numeric_limits<double>::epsilon() * std::abs(g.u_F);
  if (g.exited_through_ub) {
    g.value = std::numeric_limits<double>::infinity();
    return g;
  }
  // Both values are known to better than double resolution of the difference.
  g.value = g.u_L - g.u_F;
  if (std::abs(g.value) <= g.error) {
    std::ostringstream os;
    os << "gap " << g.value << " within its error " << g.error << " at R = " << R;
    fail(Errc::GapBelowNoise, os.str());
  }
  return g;
}

ShootResult find_R_N(int N, double tol, const ShootOptions& opt) {
  if (N < 3 || N % 2 == 0) fail(Errc::OutOfRange, "N must be an odd integer >= 3");
  if (!(tol > 0)) fail(Errc::OutOfRange, "tolerance must be positive");
  PrecisionScope scope(opt.min_bits);
  ShootResult res;
  res.N = N;
  res.below_floor = N < opt.n_floor;
  ParamSet mid = params_from_R(Real(N) + Real(1) / 2, opt.min_bits);
  res.tau_star = opt.tau_star > 0 ? opt.tau_star : to_double(mid.alpha) / 2;

  auto gap_at = [&](const Real& R) {
    ParamSet p = params_from_R(R, opt.min_bits);
    try {
      return matching_gap(p, res.tau_star, opt);
    } catch (const Error& e) {
      if (e.code() != Errc::GapBelowNoise) throw;
      ShootOptions tight = opt;
      tight.integrate.rtol /= 64;
      tight.integrate.atol /= 64;
      tight.min_bits = opt.min_bits * 2;
      return matching_gap(p, res.tau_star, tight);
    }
  };

  res.lo = Real(N) + Real(opt.margin);
  res.hi = Real(N + 1) - Real(opt.margin);
  GapResult glo, ghi;
  try {
    glo = gap_at(res.lo);
    ghi = gap_at(res.hi);
  } catch (const Error& e) {
    if (e.code() != Errc::GapBelowNoise) throw;
    res.status = ShootStatus::PrecisionLimit;
    res.note = e.what();
    return res;
  }
  res.gap_history = {glo, ghi};
  if (!(glo.sign() > 0 && ghi.sign() < 0)) {
    std::ostringstream os;
    os << "probe signs (" << glo.sign() << ", " << ghi.sign() << ") at R = " << glo.R << ", " << ghi.R;
    res.status = ShootStatus::NoBracket;
    res.note = os.str();
    res.width = to_double(res.hi - res.lo);
    return res;
  }
  for (; res.iterations < opt.max_iterations; ++res.iterations) {
    res.width = to_double(res.hi - res.lo);
    if (res.width <= tol) break;
    Real m = (res.lo + res.hi) / 2;
    GapResult gm;
    try {
      gm = gap_at(m);
    } catch (const Error& e) {
      if (e.code() != Errc::GapBelowNoise) throw;
      res.status = ShootStatus::PrecisionLimit;
      res.note = e.what();
      return res;
    }
    res.gap_history.push_back(gm);
    (gm.sign() > 0 ? res.lo : res.hi) = m;
  }
  res.width = to_double(res.hi - res.lo);
  res.status = res.width <= tol ? ShootStatus::Converged : ShootStatus::PrecisionLimit;
  if (res.status != ShootStatus::Converged) res.note = "iteration cap reached";
  return res;
}

PrescanResult prescan(int N, int samples, const ShootOptions& opt) {
  if (samples < 2) fail(Errc::OutOfRange, "prescan needs at least two samples");
  PrecisionScope scope(opt.min_bits);
  PrescanResult out;
  ParamSet mid = params_from_R(Real(N) + Real(1) / 2, opt.min_bits);
  double tau_star = opt.tau_star > 0 ? opt.tau_star : to_double(mid.alpha) / 2;
  for (int i = 0; i < samples; ++i) {
    double t = opt.margin + (1 - 2 * opt.margin) * i / (samples - 1);
    ParamSet p = params_from_R(Real(N) + Real(t), opt.min_bits);
    out.gaps.push_back(matching_gap(p, tau_star, opt));
  }
  for (std::size_t i = 1; i < out.gaps.size(); ++i)
    if (out.gaps[i - 1].sign() * out.gaps[i].sign() < 0) out.brackets.push_back({out.gaps[i - 1].R, out.gaps[i].R});
  return out;
}

}  // namespace implode
