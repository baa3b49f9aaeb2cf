#include "implode_cli/commands.hpp"

#include "implode/errors.hpp"
#include "implode/fields.hpp"
#include "implode/limits.hpp"
#include "implode/profile.hpp"
#include "implode/series.hpp"
#include "implode/shoot.hpp"
#include "implode_cli/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace implode::cli {

namespace mp = boost::multiprecision;

void print_error_line(std::ostream& err, const std::string& code, const std::string& kind,
                      const std::string& message) {
  json j;
  j["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
  err << j.dump() << '\n';
}

namespace {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Verification: return "verification";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

std::string exact(const Real& x, unsigned bits) { return to_exact_string(x, bits); }
std::string short_str(const Real& x) { return x.str(20); }

ShootOptions shoot_options(const RunConfig& c) {
  ShootOptions so;
  so.integrate.rtol = c.rtol;
  so.integrate.atol = c.rtol * 1e-3;
  so.integrate.sigma_max = c.sigma_max;
  so.integrate.sigma_floor = c.sigma_floor;
  so.tau_star = c.tau_star;
  so.min_bits = c.precision_bits;
  return so;
}

ProfileOptions profile_options(const RunConfig& c) {
  ProfileOptions po;
  po.integrate = shoot_options(c).integrate;
  po.samples_per_side = c.samples_per_side;
  po.series_samples = c.series_samples;
  po.min_bits = c.precision_bits;
  return po;
}

json shoot_json(const ShootResult& s, unsigned bits) {
  json j;
  j["N"] = s.N;
  j["status"] = status_name(s.status);
  j["R_lo"] = exact(s.lo, bits);
  j["R_hi"] = exact(s.hi, bits);
  j["R_mid"] = exact(s.midpoint(), bits);
  j["width"] = format_double(s.width);
  j["tau_star"] = format_double(s.tau_star);
  j["iterations"] = s.iterations;
  j["below_floor"] = s.below_floor;
  j["note"] = s.note;
  return j;
}

void write_gaps(const std::string& path, const std::vector<GapResult>& gaps) {
  CsvWriter csv(path, {"R", "gap", "error", "exited_through_ub", "u_L", "u_F", "tau_handoff", "bits", "K"});
  for (const auto& g : gaps)
    csv.row(std::vector<std::string>{format_double(g.R), format_double(g.value), format_double(g.error),
                                     g.exited_through_ub ? "1" : "0", format_double(g.u_L), format_double(g.u_F),
                                     format_double(g.tau_handoff), std::to_string(g.bits), std::to_string(g.K)});
}

// The profile comes either from a fresh shoot at N or, with --R, from a given R.
struct ProfileInput {
  ParamSet params;
  int N = 0;
  bool shot = false;
  ShootResult shoot;
};

ProfileInput profile_input(const RunConfig& c) {
  ProfileInput in;
  if (c.R) {
    in.params = params_from_config(c);
    double R = to_double(in.params.R);
    in.N = c.N ? *c.N : static_cast<int>(std::floor(R));
    return in;
  }
  if (!c.N) fail(Errc::Usage, "--N (or --R) is required");
  in.N = *c.N;
  in.shoot = find_R_N(in.N, c.bisect_tol, shoot_options(c));
  in.shot = true;
  if (in.shoot.status != ShootStatus::Converged) {
    Errc code = in.shoot.status == ShootStatus::NoBracket ? Errc::NoBracket : Errc::PrecisionLimit;
    fail(code, "shoot at N = " + std::to_string(in.N) + " ended " + status_name(in.shoot.status) +
                   (in.shoot.note.empty() ? "" : ": " + in.shoot.note));
  }
  PrecisionScope scope(c.precision_bits);
  in.params = params_from_R(at_current(in.shoot.midpoint()), c.precision_bits);
  return in;
}

json profile_json(const GlobalProfile& gp) {
  const unsigned b = gp.bits;
  json j;
  j["N"] = gp.N;
  j["R"] = exact(gp.params.R, gp.params.bits);
  j["samples"] = gp.x_grid.size();
  j["x_min"] = format_double(gp.x_grid.front());
  j["x_max"] = format_double(gp.x_grid.back());
  j["x_A"] = format_double(gp.x_A);
  j["sigma_1"] = format_double(gp.sigma_1);
  j["eta_min"] = format_double(gp.eta_min);
  j["eta_min_corrected"] = format_double(gp.eta_min_corrected);
  j["x_at_eta_min"] = format_double(gp.x_at_eta_min);
  j["tau_handoff"] = format_double(gp.tau_handoff);
  j["stitch_mismatch"] = format_double(gp.stitch_mismatch);
  j["max_radial_residual"] = format_double(gp.max_radial_residual);
  j["slope_mismatch"] = format_double(gp.slope_mismatch);
  j["series_bits"] = b;
  j["series_K"] = gp.K;
  j["sonic"] = {{"e1", exact(gp.slopes.e1, b)},
                {"e2", exact(gp.slopes.e2, b)},
                {"e3", exact(gp.slopes.e3, b)},
                {"e4", exact(gp.slopes.e4, b)},
                {"c_minus", exact(gp.slopes.c_minus, b)},
                {"w_prime0", exact(gp.slopes.w_prime0, b)},
                {"sigma_prime0", exact(gp.slopes.sigma_prime0, b)}};
  return j;
}

void write_profile_csv(const std::string& path, const GlobalProfile& gp) {
  CsvWriter csv(path, {"x", "sigma", "w", "sigma_prime", "w_prime", "Z", "U_E", "S_E", "margin_ii", "margin_iii",
                       "sigma_plus_sigma_prime", "delta", "delta1", "delta2", "radial_residual", "segment"});
  for (std::size_t i = 0; i < gp.x_grid.size(); ++i) {
    std::vector<std::string> row;
    for (double v : {gp.x_grid[i], gp.sigma[i], gp.w[i], gp.sigma_prime[i], gp.w_prime[i], gp.Z[i], gp.U_E[i],
                     gp.S_E[i], gp.margin_ii[i], gp.margin_iii[i], gp.F[i], gp.delta[i], gp.delta1[i],
                     gp.delta2[i], gp.radial_residual[i]})
      row.push_back(format_double(v));
    row.push_back(segment_name(gp.segment[i]));
    csv.row(row);
  }
}

}  // namespace

int run_params(const RunConfig& cfg, std::ostream& out) {
  ParamSet p = params_from_config(cfg);
  PrecisionScope scope(p.bits);
  const std::pair<const char*, const Real*> fields[] = {
      {"R", &p.R},         {"r", &p.r},     {"w_minus", &p.w_minus}, {"w_plus", &p.w_plus}, {"a", &p.a},
      {"alpha", &p.alpha}, {"lambda", &p.lambda}, {"A", &p.A}, {"delta", &p.delta}};
  for (const auto& [name, v] : fields) out << name << " = " << short_str(*v) << '\n';
  EigenPair e = eigenvalues(p);
  out << "lambda_minus = " << short_str(e.minus) << "\nlambda_plus = " << short_str(e.plus) << '\n';

  json res;
  res["params"] = params_to_json(p);
  res["eigenvalues"] = {{"minus", exact(e.minus, p.bits)}, {"plus", exact(e.plus, p.bits)}};
  write_json(output_path(cfg, "params.json"), sidecar(cfg, res));
  return kExitOk;
}

int run_series(const RunConfig& cfg, std::ostream& out) {
  ParamSet p = params_from_config(cfg);
  SeriesOptions so;
  so.precision_bits = cfg.precision_bits;
  SonicSeries s = compute_sonic_series(p, cfg.K, so);
  const unsigned b = s.precision_bits;
  PrecisionScope scope(b);

  {
    CsvWriter csv(output_path(cfg, "series.csv"), {"n", "a_n", "a_n_double"});
    for (int n = 0; n <= s.K; ++n)
      csv.row(std::vector<std::string>{std::to_string(n), exact(s.coeffs[n], b), format_double(to_double(s.coeffs[n]))});
  }

  json res;
  res["params"] = params_to_json(s.params);
  res["K"] = s.K;
  res["precision_bits"] = b;
  res["max_residual"] = format_double(s.max_residual);
  res["min_guard_bits"] = format_double(s.min_guard_bits);
  res["K_geo"] = format_double(s.K_geo);
  res["tau0"] = format_double(s.tau0);
  res["K_catalan"] = format_double(s.K_catalan);
  out << "K = " << s.K << "\nprecision_bits = " << b << "\nmax_residual = " << format_double(s.max_residual)
      << "\nK_geo = " << format_double(s.K_geo) << "\ntau0 = " << format_double(s.tau0) << '\n';

  ComparisonTables t = reformulate(s);
  std::string mu_note;
  try {
    comparison_sequences(s.params, t, s.coeffs[1]);
  } catch (const Error& e) {
    if (e.code() != Errc::NegativeDiscriminant) throw;
    mu_note = e.what();
    t = reformulate(s);
    comparison_M(s.params, t, s.coeffs[1]);
  }
  {
    CsvWriter csv(output_path(cfg, "comparison.csv"),
                  {"n", "gamma", "p", "q", "M", "mu_star", "mu", "lambda", "Mhat"});
    for (int n = 0; n <= t.n_max; ++n) {
      auto at = [&](const std::vector<Real>& v) {
        return static_cast<std::size_t>(n) < v.size() ? format_double(to_double(v[n])) : std::string("nan");
      };
      csv.row(std::vector<std::string>{std::to_string(n), at(t.gamma), at(t.p), at(t.q), at(t.M), at(t.mu_star),
                                       at(t.mu), at(t.lambda), at(t.Mhat)});
    }
  }
  res["reformulation"] = {{"k1", exact(t.k1, b)},
                          {"k2", exact(t.k2, b)},
                          {"s1", exact(t.s1, b)},
                          {"s2", exact(t.s2, b)},
                          {"det", exact(t.det, b)},
                          {"max_residual", format_double(t.max_reform_residual)}};
  res["comparison"] = {{"n_max", t.n_max},
                       {"M_positive", t.M_positive},
                       {"mu_star_increasing", mu_note.empty() && t.mu_star_increasing},
                       {"mu_note", mu_note}};
  SharpBand band = a_over_M_band(s, t);
  res["band"] = {{"n_lo", band.n_lo},
                 {"n_hi", band.n_hi},
                 {"c0", format_double(band.c0)},
                 {"C0", format_double(band.C0)},
                 {"all_positive", band.all_positive}};
  out << "band [" << band.n_lo << ", " << band.n_hi << "]: c0 = " << format_double(band.c0)
      << " C0 = " << format_double(band.C0) << '\n';
  if (!mu_note.empty()) out << "mu: " << mu_note << '\n';

  if (mp::abs(s.params.R - mp::round(s.params.R)) > Real("1e-6")) {
    NextCoefficient nc = a_next_after_R(s.params, so);
    res["a_next"] = {{"N", nc.N}, {"value", exact(nc.value, b)}, {"scaled", format_double(nc.scaled)},
                     {"negative", nc.negative}};
    out << "a_" << nc.N + 1 << " = " << short_str(nc.value) << '\n';
  }
  write_json(output_path(cfg, "series.json"), sidecar(cfg, res));
  return kExitOk;
}

int run_sinfty(const RunConfig& cfg, std::ostream& out) {
  LimitOptions lo;
  lo.K_rat = cfg.K_rat;
  lo.checkpoint_path = cfg.checkpoint;
  lo.checkpoint_every = cfg.checkpoint_every;
  SInfinityResult r = s_infinity(cfg.K_limit, lo);
  {
    CsvWriter csv(output_path(cfg, "sinfty.csv"), {"n", "ratio"});
    for (std::size_t i = 0; i < r.ratio_trace.size(); ++i)
      csv.row(std::vector<std::string>{std::to_string(i + 1), format_double(r.ratio_trace[i])});
  }
  json res;
  res["K"] = r.K;
  res["value"] = format_double(r.value);
  res["error_estimate"] = format_double(r.error_estimate);
  res["ratio_K"] = format_double(r.ratio_K);
  res["C_envelope"] = format_double(r.C_envelope);
  res["C_tail"] = format_double(r.C_tail);
  res["envelope_slope"] = format_double(r.envelope_slope);
  res["fit_variation"] = format_double(r.fit_variation);
  res["converged"] = r.converged;
  res["claim_holds"] = r.claim_holds;
  json table = json::array();
  for (const auto& q : limiting_exact(10)) table.push_back(q.str());
  res["a_inf_exact"] = table;
  write_json(output_path(cfg, "sinfty.json"), sidecar(cfg, res));
  out << "S_infinity = " << format_double(r.value) << "\nerror = " << format_double(r.error_estimate)
      << "\nenvelope_slope = " << format_double(r.envelope_slope) << '\n'
      << (r.claim_holds ? "PASS" : "FAIL") << " estimate - error > 1/2\n";
  return r.claim_holds ? kExitOk : kExitVerification;
}

int run_shoot(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.N) fail(Errc::Usage, "shoot needs --N");
  const int N = *cfg.N;
  ShootOptions so = shoot_options(cfg);
  json res;
  if (cfg.prescan > 0) {
    PrescanResult pr = prescan(N, cfg.prescan, so);
    write_gaps(output_path(cfg, "prescan.csv"), pr.gaps);
    json br = json::array();
    for (const auto& [lo, hi] : pr.brackets) br.push_back({format_double(lo), format_double(hi)});
    res["prescan_brackets"] = br;
    out << "prescan brackets = " << pr.brackets.size() << '\n';
  }
  ShootResult s = find_R_N(N, cfg.bisect_tol, so);
  res["shoot"] = shoot_json(s, cfg.precision_bits);
  write_gaps(output_path(cfg, "gaps.csv"), s.gap_history);
  out << "status = " << status_name(s.status) << "\nR_N = " << short_str(s.midpoint())
      << "\nwidth = " << format_double(s.width) << "\niterations = " << s.iterations << '\n';
  if (s.status == ShootStatus::Converged) {
    PrecisionScope scope(cfg.precision_bits);
    SeriesOptions sopt;
    sopt.precision_bits = cfg.precision_bits;
    NextCoefficient nc = a_next_after_R(params_from_R(at_current(s.midpoint()), cfg.precision_bits), sopt);
    res["a_next"] = {{"value", exact(nc.value, cfg.precision_bits)}, {"negative", nc.negative},
                     {"scaled", format_double(nc.scaled)}};
  }
  write_json(output_path(cfg, "shoot.json"), sidecar(cfg, res));
  if (s.status == ShootStatus::Converged) return kExitOk;
  print_error_line(err, s.status == ShootStatus::NoBracket ? "NO_BRACKET" : "PRECISION_LIMIT", "domain",
                   s.note.empty() ? std::string("no converged bracket in (N, N+1)") : s.note);
  return kExitDomain;
}

int run_profile(const RunConfig& cfg, std::ostream& out) {
  ProfileInput in = profile_input(cfg);
  GlobalProfile gp = build_profile(in.params, in.N, profile_options(cfg));
  write_profile_csv(output_path(cfg, "profile.csv"), gp);
  json res;
  if (in.shot) res["shoot"] = shoot_json(in.shoot, cfg.precision_bits);
  res["profile"] = profile_json(gp);
  write_json(output_path(cfg, "profile.json"), sidecar(cfg, res));
  out << "R = " << short_str(in.params.R) << "\nsamples = " << gp.x_grid.size() << "\nx_A = " << format_double(gp.x_A)
      << "\neta_min = " << format_double(gp.eta_min) << "\nmax_radial_residual = "
      << format_double(gp.max_radial_residual) << '\n';
  return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ProfileInput in = profile_input(cfg);
  GlobalProfile gp = build_profile(in.params, in.N, profile_options(cfg));
  json res;
  if (in.shot) res["shoot"] = shoot_json(in.shoot, cfg.precision_bits);
  res["profile"] = profile_json(gp);

  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> failures;
  const double r = to_double(gp.params.r);
  try {
    RepulsivityReport rep = verify_repulsivity(gp);
    res["repulsivity"] = {
        {"sign_pattern_ok", rep.sign_pattern_ok},
        {"sign_pattern_note", rep.sign_pattern_note},
        {"delta1_zeros", rep.delta1_zeros},
        {"barrier_margin_min", format_double(rep.barrier_margin_min)},
        {"w_max_at_x_A", rep.w_max_at_x_A},
        {"eta_min", format_double(rep.eta_min)},
        {"eta_min_corrected", format_double(rep.eta_min_corrected)},
        {"x_at_eta_min", format_double(rep.x_at_eta_min)},
        {"limit_left", {format_double(rep.limit_left_ii), format_double(rep.limit_left_iii)}},
        {"limit_right", {format_double(rep.limit_right_ii), format_double(rep.limit_right_iii)}},
        {"decay_right", format_double(rep.decay_right)},
        {"decay_left", format_double(rep.decay_left)},
        {"lower_bound_c", format_double(rep.lower_bound_c)},
        {"S_E_envelope", {format_double(rep.envelope_lo), format_double(rep.envelope_hi)}},
        {"f_identity_max", format_double(rep.f_identity_max)},
        {"x_B", format_double(rep.x_B)},
        {"F_at_x_B", format_double(rep.F_at_x_B)},
        {"margin_at_x_B", format_double(rep.margin_at_x_B)},
        {"round_trip_max", format_double(rep.round_trip_max)}};
    checks.emplace_back("sign pattern", rep.sign_pattern_ok && rep.delta1_zeros == 2);
    checks.emplace_back("w > a(1+a) sigma^2 for x > 0", rep.barrier_margin_min > 0);
    checks.emplace_back("w maximal at x_A", rep.w_max_at_x_A);
    checks.emplace_back("margins positive", rep.margins_positive);
    checks.emplace_back("margin limit x -> +inf",
                        std::abs(rep.limit_right_ii - 1) <= 1e-3 && std::abs(rep.limit_right_iii - 1) <= 1e-3);
    checks.emplace_back("margin limit x -> -inf", std::abs(rep.limit_left_ii - (2 - r)) <= 1e-3 &&
                                                      std::abs(rep.limit_left_iii - (2 - r)) <= 1e-3);
    checks.emplace_back("decay rate r", std::abs(rep.decay_right / r - 1) <= 0.01);
    checks.emplace_back("decay rate 1", std::abs(rep.decay_left - 1) <= 0.01);
    checks.emplace_back("radial residual", rep.max_radial_residual <= 1e-8);
  } catch (const Error& e) {
    if (errc_kind(e.code()) != ErrorKind::Verification) throw;
    failures.push_back(e.what());
  }

  SeriesOptions so;
  so.precision_bits = gp.bits;
  SonicSeries s = compute_sonic_series(gp.params, std::max(in.N + 8, 64), so);
  try {
    BarrierReport br = verify_barriers(gp.params, s, in.N, static_cast<std::size_t>(cfg.cert_samples));
    res["barriers"] = {{"u_N_at_0", format_double(br.u_N_at_0)},
                       {"u_N_at_left", format_double(br.u_N_at_left)},
                       {"tau_N", format_double(br.tau_N)},
                       {"low_order_residual", format_double(br.low_order_residual)},
                       {"V", format_double(br.V)},
                       {"W", format_double(br.W)}};
    CsvWriter csv(output_path(cfg, "certificates.csv"),
                  {"name", "lo", "hi", "expected_sign", "samples", "holds", "min_value", "min_guarded", "worst_tau"});
    for (const auto& c : br.certificates)
      csv.row(std::vector<std::string>{"\"" + c.name + "\"", format_double(c.lo), format_double(c.hi),
                                       std::to_string(c.expected_sign), std::to_string(c.samples),
                                       c.holds ? "1" : "0", format_double(c.min_value), format_double(c.min_guarded),
                                       format_double(c.worst_tau)});
    checks.emplace_back("barrier certificates", br.all_hold);
  } catch (const Error& e) {
    if (errc_kind(e.code()) != ErrorKind::Verification) throw;
    failures.push_back(e.what());
  }

  json jc = json::object();
  for (const auto& [name, ok] : checks) {
    jc[name] = ok;
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) failures.push_back(name);
  }
  res["checks"] = jc;
  res["failures"] = failures;
  res["verdict"] = failures.empty() ? "PASS" : "FAIL";
  write_json(output_path(cfg, "verify.json"), sidecar(cfg, res));
  out << "eta_min = " << format_double(gp.eta_min) << "\nverdict = " << (failures.empty() ? "PASS" : "FAIL") << '\n';
  if (failures.empty()) return kExitOk;
  for (const auto& f : failures) print_error_line(err, "VERIFICATION_FAILED", "verification", f);
  return kExitVerification;
}

int run_export(const RunConfig& cfg, std::ostream& out) {
  const bool with_profile = cfg.N.has_value();
  ParamSet p;
  GlobalProfile gp;
  if (with_profile) {
    ProfileInput in = profile_input(cfg);
    p = in.params;
    gp = build_profile(p, in.N, profile_options(cfg));
  } else {
    p = params_from_config(cfg);
  }
  const auto c = coeffs<double>(p);
  const SpecialPoints sp = special_points(p);

  {
    CsvWriter csv(output_path(cfg, "portrait_points.csv"), {"label", "sigma", "w", "tau", "u"});
    auto sw = [&](const char* label, const PointSW& q) {
      double s = to_double(q.sigma), w = to_double(q.w);
      auto tu = psi(c, s, w);
      csv.row(std::vector<std::string>{label, format_double(s), format_double(w), format_double(tu[0]),
                                       format_double(tu[1])});
    };
    sw("P1", sp.P1);
    sw("P2", sp.P2);
    sw("P3", sp.P3);
    sw("P4", sp.P4);
    sw("P5", sp.P5);
    sw("P5'", sp.P5prime);
    sw("P6", sp.P6);
    auto tu = [&](const char* label, const PointTU& q) {
      double t = to_double(q.tau), u = to_double(q.u);
      csv.row(std::vector<std::string>{label, "nan", "nan", format_double(t), format_double(u)});
    };
    tu("Q2", sp.Q2);
    tu("Q4", sp.Q4);
    tu("Q5", sp.Q5);
    tu("Q6", sp.Q6);
  }
  {
    // Zero sets of Delta, Delta_1, Delta_2 on an even sigma grid.
    CsvWriter csv(output_path(cfg, "portrait_curves.csv"), {"curve", "sigma", "w"});
    const int n = 2000;
    const double smax = 2.0;
    for (int i = 1; i <= n; ++i) {
      const double s = smax * i / n;
      csv.row(std::vector<std::string>{"delta_lower", format_double(s), format_double(1 - s)});
      csv.row(std::vector<std::string>{"delta_upper", format_double(s), format_double(1 + s)});
      auto roots = root_curves_w(p, s);
      const char* names[3] = {"delta1_w1", "delta1_w2", "delta1_w3"};
      for (int k = 0; k < 3; ++k)
        if (std::isfinite(roots[k])) csv.row(std::vector<std::string>{names[k], format_double(s), format_double(roots[k])});
      // Delta_2 = 0 off the axis: 5w^2 - (6 + 2r)w + 3r - 3 sigma^2 = 0.
      const double disc = (6 + 2 * c.r) * (6 + 2 * c.r) - 20 * (3 * c.r - 3 * s * s);
      if (disc >= 0) {
        csv.row(std::vector<std::string>{"delta2_minus", format_double(s),
                                         format_double(((6 + 2 * c.r) - std::sqrt(disc)) / 10)});
        csv.row(std::vector<std::string>{"delta2_plus", format_double(s),
                                         format_double(((6 + 2 * c.r) + std::sqrt(disc)) / 10)});
      }
    }
  }
  json res;
  res["params"] = params_to_json(p);
  if (with_profile) {
    CsvWriter csv(output_path(cfg, "trajectory.csv"), {"x", "sigma", "w", "tau", "u"});
    for (std::size_t i = 0; i < gp.x_grid.size(); ++i) {
      auto tu = psi(c, gp.sigma[i], gp.w[i]);
      csv.row(std::vector<double>{gp.x_grid[i], gp.sigma[i], gp.w[i], tu[0], tu[1]});
    }
    res["profile"] = profile_json(gp);
  }
  write_json(output_path(cfg, "portrait.json"), sidecar(cfg, res));
  out << "wrote portrait data to " << cfg.out_dir << '\n';
  return kExitOk;
}

namespace {

void add_common(CLI::App* sc, RunConfig& c, bool& bits_flag, bool& threads_flag) {
  sc->add_option("--bits", c.precision_bits, "working precision in bits (env IMPLODE_PRECISION_BITS)")
      ->each([&bits_flag](const std::string&) { bits_flag = true; });
  sc->add_option("--threads", c.threads, "thread count (env IMPLODE_THREADS)")
      ->each([&threads_flag](const std::string&) { threads_flag = true; });
  sc->add_option("--out", c.out_dir, "output directory");
}

void add_params(CLI::App* sc, RunConfig& c) {
  auto opt = [&](const char* flag, std::optional<std::string>& dst, const char* help) {
    return sc->add_option_function<std::string>(flag, [&dst](const std::string& v) { dst = v; }, help);
  };
  auto oR = opt("--R", c.R, "eigenvalue ratio R (decimal or p/q)");
  auto o_r = opt("--r", c.r, "self-similar exponent r");
  auto oa = opt("--a", c.a, "a = w_-/(1 - w_-)");
  auto oal = opt("--alpha", c.alpha, "alpha");
  auto ol = opt("--lambda", c.lambda, "lambda = sqrt(alpha)");
  auto ow = opt("--w-minus", c.w_minus, "w_-");
  std::vector<CLI::Option*> all = {oR, o_r, oa, oal, ol, ow};
  for (auto* x : all)
    for (auto* y : all)
      if (x != y) x->excludes(y);
}

void add_integration(CLI::App* sc, RunConfig& c) {
  sc->add_option("--rtol", c.rtol, "integrator relative tolerance");
  sc->add_option("--tol", c.bisect_tol, "bisection bracket width");
  sc->add_option("--tau-star", c.tau_star, "matching point (default alpha(N + 1/2)/2)");
  sc->add_option("--sigma-max", c.sigma_max, "far-field start");
  sc->add_option("--sigma-floor", c.sigma_floor, "cut-off toward P4");
}

void add_N(CLI::App* sc, RunConfig& c) {
  sc->add_option_function<int>("--N", [&c](const int& n) { c.N = n; }, "odd integer N with R_N in (N, N+1)");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  bool bits_flag = false, threads_flag = false;
  CLI::App app{"Smooth imploding profiles for the 3-D isentropic Euler equations (gamma = 5/3)", "implode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  auto* params = app.add_subcommand("params", "print the parameter cluster");
  add_common(params, cfg, bits_flag, threads_flag);
  add_params(params, cfg);

  auto* series = app.add_subcommand("series", "sonic-point series and comparison sequences");
  add_common(series, cfg, bits_flag, threads_flag);
  add_params(series, cfg);
  series->add_option("--K", cfg.K, "series order");

  auto* sinfty = app.add_subcommand("sinfty", "limit of the scaled limiting coefficients");
  add_common(sinfty, cfg, bits_flag, threads_flag);
  sinfty->add_option("--K", cfg.K_limit, "sequence length");
  sinfty->add_option("--K-rat", cfg.K_rat, "exact rational prefix");
  sinfty->add_option("--checkpoint", cfg.checkpoint, "checkpoint file (resumed when present)");
  sinfty->add_option("--checkpoint-every", cfg.checkpoint_every, "checkpoint interval");

  auto* shoot = app.add_subcommand("shoot", "bisect for R_N in (N, N+1)");
  add_common(shoot, cfg, bits_flag, threads_flag);
  add_N(shoot, cfg);
  add_integration(shoot, cfg);
  shoot->add_option("--prescan", cfg.prescan, "gap samples across (N, N+1) before bisecting");

  auto* profile = app.add_subcommand("profile", "global profile with Emden transform");
  auto* verify = app.add_subcommand("verify", "certificates and repulsivity");
  auto* exporter = app.add_subcommand("export", "phase-portrait data");
  for (auto* sc : {profile, verify, exporter}) {
    add_common(sc, cfg, bits_flag, threads_flag);
    add_N(sc, cfg);
    add_params(sc, cfg);
    add_integration(sc, cfg);
    sc->add_option("--samples-per-side", cfg.samples_per_side, "log sigma density on each side");
    sc->add_option("--series-samples", cfg.series_samples, "samples on the series segment");
  }
  verify->add_option("--cert-samples", cfg.cert_samples, "certificate cells");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    print_error_line(err, "USAGE", "usage", e.what());
    return kExitDomain;
  }

  try {
    apply_environment(cfg, bits_flag, threads_flag);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    validate(cfg);
    const std::string& sub = cfg.subcommand;
    if (sub == "params") return run_params(cfg, out);
    if (sub == "series") return run_series(cfg, out);
    if (sub == "sinfty") return run_sinfty(cfg, out);
    if (sub == "shoot") return run_shoot(cfg, out, err);
    if (sub == "profile") return run_profile(cfg, out);
    if (sub == "verify") return run_verify(cfg, out, err);
    if (sub == "export") return run_export(cfg, out);
    fail(Errc::Usage, "unknown subcommand " + sub);
  } catch (const Error& e) {
    const ErrorKind k = errc_kind(e.code());
    print_error_line(err, errc_name(e.code()), kind_name(k), e.what());
    return k == ErrorKind::Verification ? kExitVerification : kExitDomain;
  } catch (const std::exception& e) {
    print_error_line(err, "INTERNAL", "domain", e.what());
    return kExitDomain;
  }
}

}  // namespace implode::cli
