#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace implode {

// Dormand-Prince 5(4) with the standard 4th-order continuous extension,
// adaptive steps and sign-change events refined by bisection on the dense
// output. T is double or long double.
template <class T, std::size_t N>
class Dopri5 {
 public:
  using State = std::array<T, N>;
  using Rhs = std::function<State(T, const State&)>;
  using EventFn = std::function<T(T, const State&)>;

  struct Options {
    T rtol = T(1e-12);
    T atol = T(1e-14);
    T h0 = T(0);  // 0: pick from the tolerance
    T h_min = T(0);
    T h_max = std::numeric_limits<T>::infinity();
    long max_steps = 10'000'000;
    T event_tol = T(1e-14);  // absolute, in the independent variable
  };

  // One accepted step together with everything needed for dense output.
  struct Step {
    T t0, h;
    State y0, y1;
    State r3, r4, r5;  // continuous-extension coefficients
    T t1() const { return t0 + h; }
    State dense(T t) const {
      T th = (t - t0) / h, th1 = 1 - th;
      State y;
      for (std::size_t i = 0; i < N; ++i) {
        T d = y1[i] - y0[i];
        y[i] = y0[i] + th * (d + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
      }
      return y;
    }
    // Time derivative of the dense interpolant.
    State dense_derivative(T t) const {
      T th = (t - t0) / h, th1 = 1 - th;
      State dy;
      for (std::size_t i = 0; i < N; ++i) {
        T d = y1[i] - y0[i];
        T inner = r4[i] + th1 * r5[i];
        T mid = r3[i] + th * inner;
        T F = d + th1 * mid;
        T dF = -mid + th1 * (inner + th * (-r5[i]));
        dy[i] = (F + th * dF) / h;
      }
      return dy;
    }
  };

  enum class Stop { Reached, Event, StepUnderflow, MaxSteps, Aborted };

  struct Result {
    Stop stop = Stop::Reached;
    T t = 0;
    State y{};
    long steps = 0;
    long rejected = 0;
    int event = -1;  // index of the triggering event
  };

  Dopri5(Rhs f, Options opt) : f_(std::move(f)), opt_(opt) {}

  // Integrates from t0 toward t1 (either direction). on_step returns false to
  // stop; events terminate the run at their first sign change.
  Result run(T t0, State y0, T t1, const std::function<bool(const Step&)>& on_step = {},
             const std::vector<EventFn>& events = {}) const {
    Result res;
    const T dir = t1 >= t0 ? T(1) : T(-1);
    T t = t0;
    State y = y0;
    State k1 = f_(t, y);
    T h = opt_.h0 > 0 ? opt_.h0 : initial_step(t, y, k1, dir);
    h = std::min(h, opt_.h_max);
    std::vector<T> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e](t, y);

    for (;;) {
      if (res.steps >= opt_.max_steps) {
        res.stop = Stop::MaxSteps;
        break;
      }
      T remaining = (t1 - t) * dir;
      if (remaining <= 0) {
        res.stop = Stop::Reached;
        break;
      }
      bool last = h >= remaining;
      T hs = last ? remaining : h;
      if (hs < opt_.h_min || t + dir * hs == t) {
        res.stop = Stop::StepUnderflow;
        break;
      }
      Step st;
      State k7;
      T err = attempt(t, y, k1, dir * hs, st, k7);
      if (!std::isfinite(static_cast<double>(err)) || err > 1) {
        ++res.rejected;
        T fac = std::isfinite(static_cast<double>(err)) ? std::max(T(0.2), T(0.9) * std::pow(err, T(-0.2))) : T(0.2);
        h = hs * fac;
        continue;
      }
      ++res.steps;
      if (last) st.h = t1 - t;  // land exactly on t1

      // events on this step
      int hit = -1;
      T t_hit = st.t1();
      for (std::size_t e = 0; e < events.size(); ++e) {
        T g1 = events[e](st.t1(), st.y1);
        if (sign_change(g_prev[e], g1)) {
          T te = locate(events[e], st, g_prev[e]);
          if ((te - t_hit) * dir < 0 || hit < 0) {
            hit = static_cast<int>(e);
            t_hit = te;
          }
        }
        g_prev[e] = g1;
      }
      if (hit >= 0) {
        // The callback still sees the whole step; samples past t_hit are the
        // caller's to discard.
        res.stop = on_step && !on_step(st) ? Stop::Aborted : Stop::Event;
        res.t = t_hit;
        res.y = st.dense(t_hit);
        res.event = hit;
        return res;
      }
      if (on_step && !on_step(st)) {
        t = st.t1();
        y = st.y1;
        res.stop = Stop::Aborted;
        break;
      }
      t = last ? t1 : st.t1();
      y = st.y1;
      k1 = k7;  // FSAL
      T fac = err > 0 ? std::min(T(5), std::max(T(0.2), T(0.9) * std::pow(err, T(-0.2)))) : T(5);
      h = std::min(hs * fac, opt_.h_max);
      if (last) {
        res.stop = Stop::Reached;
        break;
      }
    }
    res.t = t;
    res.y = y;
    return res;
  }

  const Options& options() const { return opt_; }

 private:
  static bool sign_change(T a, T b) { return (a < 0 && b >= 0) || (a > 0 && b <= 0); }

  T locate(const EventFn& g, const Step& st, T g0) const {
    T lo = st.t0, hi = st.t1();
    T glo = g0;
    for (int i = 0; i < 200 && std::abs(hi - lo) > opt_.event_tol; ++i) {
      T mid = lo + (hi - lo) / 2;
      if (mid == lo || mid == hi) break;
      T gm = g(mid, st.dense(mid));
      if (sign_change(glo, gm)) {
        hi = mid;
      } else {
        lo = mid;
        glo = gm;
      }
    }
    return hi;
  }

  T initial_step(T t, const State& y, const State& k1, T dir) const {
    T d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      T sc = opt_.atol + opt_.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    T h = (d0 < T(1e-5) || d1 < T(1e-5)) ? T(1e-6) : T(0.01) * d0 / d1;
    State y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h * k1[i];
    State k2 = f_(t + dir * h, y1);
    T d2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      T sc = opt_.atol + opt_.rtol * std::abs(y[i]);
      d2 = std::max(d2, std::abs(k2[i] - k1[i]) / sc / h);
    }
    T h1 = std::max(d1, d2) <= T(1e-15) ? std::max(T(1e-6), h * T(1e-3))
                                         : std::pow(T(0.01) / std::max(d1, d2), T(0.2));
    return std::min(T(100) * h, h1);
  }

  // One trial step of signed size h. Returns the scaled error norm.
  T attempt(T t, const State& y, const State& k1, T h, Step& st, State& k7) const {
    static constexpr T c2 = T(1) / 5, c3 = T(3) / 10, c4 = T(4) / 5, c5 = T(8) / 9;
    static constexpr T a21 = T(1) / 5;
    static constexpr T a31 = T(3) / 40, a32 = T(9) / 40;
    static constexpr T a41 = T(44) / 45, a42 = T(-56) / 15, a43 = T(32) / 9;
    static constexpr T a51 = T(19372) / 6561, a52 = T(-25360) / 2187, a53 = T(64448) / 6561,
                       a54 = T(-212) / 729;
    static constexpr T a61 = T(9017) / 3168, a62 = T(-355) / 33, a63 = T(46732) / 5247, a64 = T(49) / 176,
                       a65 = T(-5103) / 18656;
    static constexpr T a71 = T(35) / 384, a73 = T(500) / 1113, a74 = T(125) / 192, a75 = T(-2187) / 6784,
                       a76 = T(11) / 84;
    static constexpr T e1 = T(71) / 57600, e3 = T(-71) / 16695, e4 = T(71) / 1920, e5 = T(-17253) / 339200,
                       e6 = T(22) / 525, e7 = T(-1) / 40;
    static constexpr T d1 = T(-12715105075.0L) / T(11282082432.0L), d3 = T(87487479700.0L) / T(32700410799.0L),
                       d4 = T(-10690763975.0L) / T(1880347072.0L), d5 = T(701980252875.0L) / T(199316789632.0L),
                       d6 = T(-1453857185.0L) / T(822651844.0L), d7 = T(69997945.0L) / T(29380423.0L);
    State ys;
    for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + h * a21 * k1[i];
    State k2 = f_(t + c2 * h, ys);
    for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    State k3 = f_(t + c3 * h, ys);
    for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    State k4 = f_(t + c4 * h, ys);
    for (std::size_t i = 0; i < N; ++i)
      ys[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    State k5 = f_(t + c5 * h, ys);
    for (std::size_t i = 0; i < N; ++i)
      ys[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    State k6 = f_(t + h, ys);
    State y1;
    for (std::size_t i = 0; i < N; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = f_(t + h, y1);

    T err = 0;
    for (std::size_t i = 0; i < N; ++i) {
      T e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      T sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / N);

    st.t0 = t;
    st.h = h;
    st.y0 = y;
    st.y1 = y1;
    for (std::size_t i = 0; i < N; ++i) {
      T d = y1[i] - y[i];
      T bspl = h * k1[i] - d;
      st.r3[i] = bspl;
      st.r4[i] = d - h * k7[i] - bspl;
      st.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    return err;
  }

  Rhs f_;
  Options opt_;
};

}  // namespace implode
