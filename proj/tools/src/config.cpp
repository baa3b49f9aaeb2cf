#include "implode_cli/config.hpp"

#include "implode/errors.hpp"

#include <cstdlib>
#include <string>

namespace implode::cli {

namespace {

template <class T>
bool env_number(const char* name, T& out) {
  const char* v = std::getenv(name);
  if (!v || !*v) return false;
  char* end = nullptr;
  long long n = std::strtoll(v, &end, 10);
  if (*end != '\0' || n <= 0) fail(Errc::Usage, std::string(name) + " must be a positive integer, got '" + v + "'");
  out = static_cast<T>(n);
  return true;
}

}  // namespace

void apply_environment(RunConfig& cfg, bool bits_from_flag, bool threads_from_flag) {
  unsigned bits = 0;
  int threads = 0;
  if (env_number("IMPLODE_PRECISION_BITS", bits) && !bits_from_flag) cfg.precision_bits = bits;
  if (env_number("IMPLODE_THREADS", threads) && !threads_from_flag) cfg.threads = threads;
}

void validate(const RunConfig& c) {
  int entries = !!c.R + !!c.r + !!c.a + !!c.alpha + !!c.lambda + !!c.w_minus;
  if (entries > 1) fail(Errc::Usage, "--R, --r, --a, --alpha, --lambda and --w-minus are mutually exclusive");
  if (c.precision_bits < kMinBits) fail(Errc::Usage, "precision_bits must be at least 64");
  if (c.threads < 1) fail(Errc::Usage, "threads must be positive");
  if (!(c.rtol > 0) || !(c.bisect_tol > 0)) fail(Errc::Usage, "tolerances must be positive");
  if (c.tau_star < 0) fail(Errc::Usage, "tau* must be positive");
  if (c.K < 5) fail(Errc::Usage, "K must be at least 5");
  if (c.K_limit < 1 || c.K_rat < 1) fail(Errc::Usage, "sinfty lengths must be positive");
  if (c.cert_samples < 16 || c.samples_per_side < 16 || c.series_samples < 3)
    fail(Errc::Usage, "grid densities too small");
  if (!(c.sigma_max >= 1e3) || !(c.sigma_floor > 0 && c.sigma_floor < 1e-2))
    fail(Errc::Usage, "need sigma_max >= 1e3 and 0 < sigma_floor < 1e-2");
  if (c.checkpoint_every < 1) fail(Errc::Usage, "checkpoint interval must be positive");
  if (c.N && (*c.N < 3 || *c.N % 2 == 0)) fail(Errc::Usage, "--N must be an odd integer >= 3");
}

ParamSet params_from_config(const RunConfig& c) {
  const unsigned b = c.precision_bits;
  PrecisionScope scope(b);
  try {
    if (c.R) return params_from_R(parse_real(*c.R), b);
    if (c.r) return params_from_r(parse_real(*c.r), b);
    if (c.a) return params_from_a(parse_real(*c.a), b);
    if (c.alpha) return params_from_alpha(parse_real(*c.alpha), b);
    if (c.lambda) return params_from_lambda(parse_real(*c.lambda), b);
    if (c.w_minus) return params_from_w_minus(parse_real(*c.w_minus), b);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::Usage, std::string("unparsable parameter value: ") + e.what());
  }
  fail(Errc::Usage, "one of --R, --r, --a, --alpha, --lambda, --w-minus is required");
}

}  // namespace implode::cli
