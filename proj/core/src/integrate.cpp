#include "implode/integrate.hpp"

#include "implode/barriers.hpp"
#include "implode/dopri.hpp"
#include "implode/errors.hpp"
#include "implode/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace implode {

namespace mp = boost::multiprecision;
using LD = long double;

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::ReachedTarget: return "reached_target";
    case Termination::CrossedDelta1: return "crossed_delta1";
    case Termination::CrossedDeltaTau: return "crossed_delta_tau";
    case Termination::ApproachedP4: return "approached_p4";
    case Termination::FieldDegenerate: return "field_degenerate";
  }
  return "unknown";
}

namespace {

using SW = Dopri5<LD, 2>;  // state (w, x) over s = log sigma
using TU = Dopri5<LD, 3>;  // state (tau, u, x) over an arclength-like parameter

SW::Options sw_options(const IntegrateOptions& o) {
  SW::Options so;
  so.rtol = o.rtol;
  so.atol = o.atol;
  so.max_steps = o.max_steps;
  so.event_tol = o.event_tol;
  if (o.max_step > 0) so.h_max = o.max_step;
  return so;
}

SW::Rhs sw_rhs(const FieldCoeffs<LD>& c) {
  return [c](LD s, const SW::State& y) {
    LD sigma = std::exp(s);
    auto f = eval_sw_fields(c, sigma, y[0]);
    return SW::State{sigma * f.delta1 / f.delta2, -sigma * f.delta / f.delta2};
  };
}

// Residual of Delta_2 dw/dsigma = Delta_1 at the step midpoint, using the
// derivative of the interpolant rather than the field quotient.
double sw_residual(const FieldCoeffs<LD>& c, const SW::Step& st) {
  LD sm = st.t0 + st.h / 2;
  auto y = st.dense(sm);
  auto dy = st.dense_derivative(sm);
  LD sigma = std::exp(sm);
  auto f = eval_sw_fields(c, sigma, y[0]);
  LD slope = dy[0] / sigma;
  LD scale = std::abs(f.delta2 * slope) + std::abs(f.delta1);
  if (scale == 0) return 0;
  return static_cast<double>(std::abs(f.delta2 * slope - f.delta1) / scale);
}

CurveSample sw_sample(const FieldCoeffs<LD>& c, LD s, const SW::State& y, double residual) {
  LD sigma = std::exp(s);
  auto f = eval_sw_fields(c, sigma, y[0]);
  CurveSample cs;
  cs.abscissa = static_cast<double>(sigma);
  cs.ordinate = static_cast<double>(y[0]);
  cs.x = static_cast<double>(y[1]);
  cs.f0 = static_cast<double>(f.delta);
  cs.f1 = static_cast<double>(f.delta1);
  cs.f2 = static_cast<double>(f.delta2);
  cs.residual = residual;
  return cs;
}

CurveSample tu_sample(const FieldCoeffs<LD>& c, LD tau, LD u, LD x, double residual) {
  auto f = eval_tu_fields(c, tau, u);
  CurveSample cs;
  cs.abscissa = static_cast<double>(tau);
  cs.ordinate = static_cast<double>(u);
  cs.x = static_cast<double>(x);
  cs.f0 = static_cast<double>(f.delta_u);
  cs.f1 = static_cast<double>(f.delta_tau);
  cs.residual = residual;
  return cs;
}

struct P6Run {
  SolutionCurve curve;
  LD sigma_star = 0, x_star = 0;
};

P6Run run_p6(const ParamSet& p, LD tau_star, const IntegrateOptions& opt) {
  const auto c = coeffs<LD>(p);
  const FarFieldStart st = start_far_field(p, opt.sigma_max);
  const LD w_target = c.w_minus - tau_star / (1 + c.a);
  const LD opa = 1 + c.a;
  SW::Options so = sw_options(opt);
  so.event_tol = std::min<LD>(so.event_tol, 1e-17L);
  SW solver(sw_rhs(c), so);

  P6Run run;
  run.curve.frame = Frame::SW;
  run.curve.direction = -1;
  auto on_step = [&](const SW::Step& s) {
    LD sigma = std::exp(s.t1());
    LD w = s.y1[0];
    LD tau = -opa * (w - c.w_minus), u = opa * opa * sigma * sigma;
    if (tau > 0 && tau < c.alpha) {
      LD lo = barrier::u_g(c.alpha, tau), hi = barrier::u_b(c.alpha, tau);
      if (!(lo < u && u < hi)) {
        std::ostringstream os;
        os << "u_F = " << static_cast<double>(u) << " outside (" << static_cast<double>(lo) << ", "
           << static_cast<double>(hi) << ") at tau = " << static_cast<double>(tau);
        fail(Errc::SandwichViolation, os.str());
      }
    }
    if (opt.record) {
      double res = sw_residual(c, s);
      run.curve.max_residual = std::max(run.curve.max_residual, res);
      run.curve.samples.push_back(sw_sample(c, s.t1(), s.y1, res));
    }
    return true;
  };
  SW::EventFn hit = [w_target](LD, const SW::State& y) { return y[0] - w_target; };
  LD s0 = std::log(static_cast<LD>(st.sigma));
  LD s_end = std::log(static_cast<LD>(1 - c.w_minus)) - 40;
  if (opt.record) run.curve.samples.push_back(sw_sample(c, s0, {st.w, 0}, 0));
  auto res = solver.run(s0, {st.w, 0}, s_end, on_step, {hit});
  run.curve.steps = res.steps;
  if (res.stop != SW::Stop::Event) {
    if (res.stop == SW::Stop::StepUnderflow)
      fail(Errc::StepUnderflow, "P6 branch stalled before reaching tau*");
    fail(Errc::EventMissed, "P6 branch never reached tau*");
  }
  // Drop samples past the event and close the curve on it.
  while (!run.curve.samples.empty() && run.curve.samples.back().abscissa < std::exp(res.t))
    run.curve.samples.pop_back();
  run.sigma_star = std::exp(res.t);
  run.x_star = res.y[1];
  if (opt.record) run.curve.samples.push_back(sw_sample(c, res.t, res.y, 0));
  run.curve.termination = Termination::ReachedTarget;
  return run;
}

}  // namespace

FarFieldStart start_far_field(const ParamSet& p, double sigma_max) {
  if (!(sigma_max >= 1e3)) fail(Errc::OutOfRange, "sigma_max must be at least 1e3");
  const double r = to_double(p.r);
  FarFieldStart s;
  s.sigma = sigma_max;
  s.w = r - 1 + (r - 1) * (2 - r) / (5 * sigma_max * sigma_max);
  s.truncation = 1 / std::pow(sigma_max, 4);
  return s;
}

FarFieldBranch integrate_P6_to_Q2(const ParamSet& p, double tau_star, const IntegrateOptions& opt) {
  const double al = to_double(p.alpha);
  if (!(tau_star > 0 && tau_star < al)) fail(Errc::OutOfRange, "tau* must lie in (0, alpha)");
  const LD opa = 1 + to_ldouble(p.a);
  P6Run main = run_p6(p, tau_star, opt);
  IntegrateOptions fine = opt;
  fine.rtol /= 16;
  fine.atol /= 16;
  fine.record = false;
  P6Run check = run_p6(p, tau_star, fine);

  FarFieldBranch b;
  b.curve = std::move(main.curve);
  b.tau_star = tau_star;
  b.sigma_star = static_cast<double>(main.sigma_star);
  b.u_F = opa * opa * main.sigma_star * main.sigma_star;
  LD u_check = opa * opa * check.sigma_star * check.sigma_star;
  b.u_F_error = static_cast<double>(std::abs(b.u_F - u_check));
  b.x_star = static_cast<double>(main.x_star);
  return b;
}

SeriesLeg integrate_from_series(const SonicSeries& s, double tau_from, double tau_to, const IntegrateOptions& opt) {
  if (tau_from == 0 || tau_from == tau_to) fail(Errc::OutOfRange, "degenerate series leg");
  const ParamSet& p = s.params;
  const auto c = coeffs<LD>(p);
  SeriesLeg leg;
  leg.curve.frame = Frame::TU;
  leg.curve.direction = tau_to > tau_from ? 1 : -1;

  double tail = s.tail_estimate(tau_from);
  if (!(tail <= opt.tail_tol)) {
    std::ostringstream os;
    os << "series tail " << tail << " at tau = " << tau_from;
    fail(Errc::TailTooLarge, os.str());
  }
  const std::vector<Real> xs = x_series_at_sonic(s);
  LD tau0, u0, x0;
  {
    PrecisionScope scope(s.precision_bits);
    Real t = Real(tau_from);
    Real u = s.eval(t);
    Real x = 0;
    for (int k = s.K; k >= 0; --k) x = x * t + xs[k];
    tau0 = tau_from;
    u0 = to_ldouble(u);
    x0 = to_ldouble(x);
    const bool outward = std::abs(tau_to) > std::abs(tau_from) && (tau_to > 0) == (tau_from > 0);
    if (outward) {
      TaylorOptions to;
      to.bits = std::max(s.precision_bits, continuation_bits(to_double(p.R), std::abs(tau_from), std::abs(tau_to)));
      leg.continuation = continue_tu(p, t, u, x, Real(tau_to), to);
      leg.used_continuation = true;
      for (const auto& n : leg.continuation.nodes) {
        LD tn = to_ldouble(n.t), un = to_ldouble(n.u), xn = to_ldouble(n.x);
        auto f = eval_tu_fields(c, tn, un);
        LD sc = std::abs(f.delta_tau * to_ldouble(n.du)) + std::abs(f.delta_u);
        double res = sc > 0 ? static_cast<double>(std::abs(f.delta_tau * to_ldouble(n.du) - f.delta_u) / sc) : 0;
        leg.curve.samples.push_back(tu_sample(c, tn, un, xn, res));
        leg.curve.max_residual = std::max(leg.curve.max_residual, res);
      }
      const auto& last = leg.continuation.nodes.back();
      tau0 = to_ldouble(last.t);
      u0 = to_ldouble(last.u);
      x0 = to_ldouble(last.x);
      if (leg.continuation.stop == TaylorPath::Stop::Reached) {
        leg.curve.termination = Termination::ReachedTarget;
        leg.tau_end = static_cast<double>(tau0);
        leg.u_end = static_cast<double>(u0);
        leg.x_end = static_cast<double>(x0);
        auto sw = psi_inverse(c, tau0, u0);
        leg.sigma_end = static_cast<double>(sw[0]);
        leg.w_end = static_cast<double>(sw[1]);
        return leg;
      }
    } else {
      leg.curve.samples.push_back(tu_sample(c, tau0, u0, x0, 0));
    }
  }

  // Long double leg in an arclength-like parameter: tau' = Delta_tau,
  // u' = Delta_u, x' = u - (1 + tau)^2, which stays regular where Delta_tau = 0.
  const LD dir_tau = tau_to > static_cast<double>(tau0) ? 1 : -1;
  const LD orient = dir_tau * (eval_tu_fields(c, tau0, u0).delta_tau >= 0 ? 1 : -1);
  TU::Rhs rhs = [c, orient](LD, const TU::State& y) {
    auto f = eval_tu_fields(c, y[0], y[1]);
    return TU::State{orient * f.delta_tau, orient * f.delta_u, orient * (y[1] - (1 + y[0]) * (1 + y[0]))};
  };
  TU::Options so;
  so.rtol = opt.rtol;
  so.atol = opt.atol;
  so.max_steps = opt.max_steps;
  so.event_tol = std::min<LD>(opt.event_tol, 1e-17L);
  TU solver(rhs, so);
  const LD target = tau_to;
  std::vector<TU::EventFn> events = {
      [target](LD, const TU::State& y) { return y[0] - target; },
      [c](LD, const TU::State& y) { return eval_tu_fields(c, y[0], y[1]).delta_tau; },
  };
  auto on_step = [&](const TU::Step& st) {
    LD sm = st.t0 + st.h / 2;
    auto y = st.dense(sm);
    auto dy = st.dense_derivative(sm);
    auto f = eval_tu_fields(c, y[0], y[1]);
    double res = 0;
    if (dy[0] != 0) {
      LD slope = dy[1] / dy[0];
      LD sc = std::abs(f.delta_tau * slope) + std::abs(f.delta_u);
      res = sc > 0 ? static_cast<double>(std::abs(f.delta_tau * slope - f.delta_u) / sc) : 0;
    }
    leg.curve.max_residual = std::max(leg.curve.max_residual, res);
    if (opt.record) leg.curve.samples.push_back(tu_sample(c, st.y1[0], st.y1[1], st.y1[2], res));
    return true;
  };
  // The Delta_tau event is meaningless at the very start when it sits on Q_A.
  auto r = solver.run(0, {tau0, u0, x0}, 1e6L, on_step, events);
  leg.curve.steps += r.steps;
  if (r.stop != TU::Stop::Event) fail(Errc::EventMissed, "no tau target or Delta_tau = 0 crossing was found");
  if (opt.record) {
    // trim the overshoot of the last step
    leg.curve.samples.pop_back();
    leg.curve.samples.push_back(tu_sample(c, r.y[0], r.y[1], r.y[2], leg.curve.max_residual));
  }
  leg.curve.termination = r.event == 0 ? Termination::ReachedTarget : Termination::CrossedDeltaTau;
  leg.tau_end = static_cast<double>(r.y[0]);
  leg.u_end = static_cast<double>(r.y[1]);
  leg.x_end = static_cast<double>(r.y[2]);
  auto sw = psi_inverse(c, r.y[0], r.y[1]);
  leg.sigma_end = static_cast<double>(sw[0]);
  leg.w_end = static_cast<double>(sw[1]);
  return leg;
}

OriginLeg integrate_sw_to_origin(const ParamSet& p, double sigma0, double w0, double x0,
                                 const IntegrateOptions& opt) {
  const auto c = coeffs<LD>(p);
  {
    auto f = eval_sw_fields(c, static_cast<LD>(sigma0), static_cast<LD>(w0));
    if (!(f.delta2 > 0)) fail(Errc::OutOfRange, "start point must satisfy Delta_2 > 0");
  }
  const LD barrier_k = c.a * (1 + c.a);
  SW solver(sw_rhs(c), sw_options(opt));
  OriginLeg leg;
  leg.curve.frame = Frame::SW;
  leg.curve.direction = -1;
  leg.min_barrier_margin = std::numeric_limits<double>::infinity();

  auto delta1_at = [&](LD s, const SW::State& y) { return eval_sw_fields(c, std::exp(s), y[0]).delta1; };
  auto check = [&](LD s, const SW::State& y) {
    LD sigma = std::exp(s);
    LD margin = y[0] - barrier_k * sigma * sigma;
    leg.min_barrier_margin = std::min(leg.min_barrier_margin, static_cast<double>(margin));
    if (!(margin > 0)) {
      std::ostringstream os;
      os << "w - a(1+a) sigma^2 = " << static_cast<double>(margin) << " at sigma = " << static_cast<double>(sigma);
      fail(Errc::BarrierViolation, os.str());
    }
  };
  const LD s0 = std::log(static_cast<LD>(sigma0));
  check(s0, {w0, x0});
  leg.curve.samples.push_back(sw_sample(c, s0, {w0, x0}, 0));
  LD d1_prev = delta1_at(s0, {w0, x0});
  auto on_step = [&](const SW::Step& st) {
    check(st.t1(), st.y1);
    LD d1 = delta1_at(st.t1(), st.y1);
    if ((d1_prev < 0 && d1 >= 0) || (d1_prev > 0 && d1 <= 0)) {
      LD lo = st.t0, hi = st.t1(), glo = d1_prev;
      for (int i = 0; i < 200 && std::abs(hi - lo) > static_cast<LD>(opt.event_tol); ++i) {
        LD mid = lo + (hi - lo) / 2;
        LD gm = delta1_at(mid, st.dense(mid));
        if ((glo < 0) != (gm < 0)) {
          hi = mid;
        } else {
          lo = mid;
          glo = gm;
        }
      }
      ++leg.delta1_sign_changes;
      if (leg.delta1_sign_changes == 1) {
        leg.sigma_1 = static_cast<double>(std::exp(hi));
        leg.x_A = static_cast<double>(st.dense(hi)[1]);
      }
    }
    d1_prev = d1;
    double res = sw_residual(c, st);
    leg.curve.max_residual = std::max(leg.curve.max_residual, res);
    if (opt.record) leg.curve.samples.push_back(sw_sample(c, st.t1(), st.y1, res));
    return true;
  };
  SW::EventFn d2 = [c](LD s, const SW::State& y) { return eval_sw_fields(c, std::exp(s), y[0]).delta2; };
  auto r = solver.run(s0, {w0, x0}, std::log(static_cast<LD>(opt.sigma_floor)), on_step, {d2});
  leg.curve.steps = r.steps;
  if (r.stop == SW::Stop::Event) {
    std::ostringstream os;
    os << "curve meets Delta_2 = 0 at sigma = " << static_cast<double>(std::exp(r.t));
    fail(Errc::SonicEscapeFailed, os.str());
  }
  if (r.stop != SW::Stop::Reached) fail(Errc::StepUnderflow, "integration toward P4 stalled");
  leg.curve.termination = Termination::ApproachedP4;
  const auto& sm = leg.curve.samples;
  if (sm.size() >= 2) {
    const auto& a1 = sm[sm.size() - 2];
    const auto& a2 = sm.back();
    leg.w_limit = (a2.ordinate * a1.abscissa - a1.ordinate * a2.abscissa) / (a1.abscissa - a2.abscissa);
  }
  return leg;
}

XMap x_parametrize(const ParamSet& p, const SolutionCurve& curve) {
  if (curve.frame != Frame::SW) fail(Errc::OutOfRange, "x_parametrize needs a sigma-w curve");
  std::vector<CurveSample> sm = curve.samples;
  std::sort(sm.begin(), sm.end(), [](const CurveSample& a, const CurveSample& b) { return a.abscissa < b.abscissa; });
  XMap m;
  const auto c = coeffs<double>(p);
  for (std::size_t i = 0; i < sm.size(); ++i) {
    if (!std::isfinite(sm[i].x)) fail(Errc::OutOfRange, "curve sample without x");
    if (i > 0 && !(sm[i].x < sm[i - 1].x)) {
      if (sm[i].abscissa == sm[i - 1].abscissa) continue;
      std::ostringstream os;
      os << "X fails to decrease at sigma = " << sm[i].abscissa;
      fail(Errc::NonMonotone, os.str());
    }
    m.sigma.push_back(sm[i].abscissa);
    m.x.push_back(sm[i].x);
    auto f = eval_sw_fields(c, sm[i].abscissa, sm[i].ordinate);
    if (std::abs(f.delta) > 1e-9 && std::abs(f.delta2) > 1e-9 && !(-f.delta / f.delta2 < 0)) m.f_negative = false;
  }
  const std::size_t n = m.sigma.size();
  if (n < 4) fail(Errc::OutOfRange, "curve too short to parametrize");
  auto slope = [&](double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (m.sigma[i] < lo || m.sigma[i] > hi) continue;
      double X = std::log(m.sigma[i]), Y = m.x[i];
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      ++k;
    }
    if (k < 2) return std::numeric_limits<double>::quiet_NaN();
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
  };
  m.slope_large = slope(m.sigma.back() / 10, m.sigma.back());
  m.slope_small = slope(m.sigma.front(), m.sigma.front() * 10);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h1 = std::log(m.sigma[i] / m.sigma[i - 1]), h2 = std::log(m.sigma[i + 1] / m.sigma[i]);
    if (h1 <= 0 || h2 <= 0) continue;
    double d2 = 2 * ((m.x[i + 1] - m.x[i]) / h2 - (m.x[i] - m.x[i - 1]) / h1) / (h1 + h2);
    double h = std::max(h1, h2);
    m.interpolation_error = std::max(m.interpolation_error, std::abs(d2) * h * h / 8);
  }
  return m;
}

}  // namespace implode
