#include "implode_cli/serialize.hpp"

#include "implode/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#ifndef IMPLODE_VERSION
#define IMPLODE_VERSION "unknown"
#endif

namespace implode::cli {

namespace fs = std::filesystem;

std::string version_string() { return IMPLODE_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json params_to_json(const ParamSet& p) {
  const unsigned b = p.bits;
  json j;
  j["bits"] = b;
  j["R"] = to_exact_string(p.R, b);
  j["r"] = to_exact_string(p.r, b);
  j["w_minus"] = to_exact_string(p.w_minus, b);
  j["w_plus"] = to_exact_string(p.w_plus, b);
  j["a"] = to_exact_string(p.a, b);
  j["alpha"] = to_exact_string(p.alpha, b);
  j["lambda"] = to_exact_string(p.lambda, b);
  j["A"] = to_exact_string(p.A, b);
  j["delta"] = to_exact_string(p.delta, b);
  j["d"] = ParamSet::d;
  j["ell"] = ParamSet::ell;
  return j;
}

ParamSet params_from_json(const json& j) {
  try {
    ParamSet p;
    p.bits = j.at("bits").get<unsigned>();
    PrecisionScope scope(p.bits);
    auto rd = [&](const char* k) { return Real(j.at(k).get<std::string>()); };
    p.R = rd("R");
    p.r = rd("r");
    p.w_minus = rd("w_minus");
    p.w_plus = rd("w_plus");
    p.a = rd("a");
    p.alpha = rd("alpha");
    p.lambda = rd("lambda");
    p.A = rd("A");
    p.delta = rd("delta");
    return p;
  } catch (const json::exception& e) {
    fail(Errc::Io, std::string("malformed parameter JSON: ") + e.what());
  }
}

bool params_equal(const ParamSet& a, const ParamSet& b) {
  return a.bits == b.bits && a.R == b.R && a.r == b.r && a.w_minus == b.w_minus && a.w_plus == b.w_plus &&
         a.a == b.a && a.alpha == b.alpha && a.lambda == b.lambda && a.A == b.A && a.delta == b.delta;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  auto opt = [&](const char* k, const std::optional<std::string>& v) {
    if (v) j[k] = *v;
  };
  opt("R", c.R);
  opt("r", c.r);
  opt("a", c.a);
  opt("alpha", c.alpha);
  opt("lambda", c.lambda);
  opt("w_minus", c.w_minus);
  if (c.N) j["N"] = *c.N;
  j["K"] = c.K;
  j["K_limit"] = c.K_limit;
  j["K_rat"] = c.K_rat;
  j["precision_bits"] = c.precision_bits;
  j["threads"] = c.threads;
  j["rtol"] = format_double(c.rtol);
  j["bisect_tol"] = format_double(c.bisect_tol);
  j["tau_star"] = format_double(c.tau_star);
  j["prescan"] = c.prescan;
  j["cert_samples"] = c.cert_samples;
  j["samples_per_side"] = c.samples_per_side;
  j["series_samples"] = c.series_samples;
  j["sigma_max"] = format_double(c.sigma_max);
  j["sigma_floor"] = format_double(c.sigma_floor);
  j["out_dir"] = c.out_dir;
  j["checkpoint"] = c.checkpoint;
  j["checkpoint_every"] = c.checkpoint_every;
  return j;
}

json sidecar(const RunConfig& cfg, json results) {
  json j;
  j["version"] = version_string();
  j["config"] = config_to_json(cfg);
  j["precision"] = {{"backend", "mpfr"},
                    {"bits", cfg.precision_bits},
                    {"digits10", bits_to_digits10(cfg.precision_bits)},
                    {"double_columns", "%.17g"}};
  j["results"] = std::move(results);
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) fail(Errc::Io, "write failed: " + path);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path) {
  if (!out_) fail(Errc::Io, "cannot open " + path + " for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) fail(Errc::Io, "column count mismatch in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  if (!out_) fail(Errc::Io, "write failed: " + path_);
}

void CsvWriter::row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_double(v));
  row(s);
}

std::string output_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail(Errc::Io, "cannot create " + cfg.out_dir + ": " + ec.message());
  return (fs::path(cfg.out_dir) / name).string();
}

}  // namespace implode::cli
