#pragma once

#include "implode_cli/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace implode::cli {

// Exit codes: 0 success, 1 domain / usage / IO error, 2 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitVerification = 2;

int run_params(const RunConfig& cfg, std::ostream& out);
int run_series(const RunConfig& cfg, std::ostream& out);
int run_sinfty(const RunConfig& cfg, std::ostream& out);
int run_shoot(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_profile(const RunConfig& cfg, std::ostream& out);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_export(const RunConfig& cfg, std::ostream& out);

// Parses argv (without the program name) and dispatches. Errors are printed
// to `err` as one JSON line {"error": {"code", "kind", "message"}}.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void print_error_line(std::ostream& err, const std::string& code, const std::string& kind,
                      const std::string& message);

}  // namespace implode::cli
