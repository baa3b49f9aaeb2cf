#pragma once

#include "implode/params.hpp"
#include "implode_cli/config.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace implode::cli {

using json = nlohmann::ordered_json;

// git-describe style version baked in at configure time.
std::string version_string();

// Shortest-safe decimal: 17 significant digits, with inf and nan spelled out.
std::string format_double(double v);

json params_to_json(const ParamSet& p);
// Inverse of params_to_json; every field is read back, not recomputed.
ParamSet params_from_json(const json& j);
// Field-exact comparison of two parameter sets.
bool params_equal(const ParamSet& a, const ParamSet& b);

json config_to_json(const RunConfig& cfg);

// Sidecar layout shared by every subcommand.
json sidecar(const RunConfig& cfg, json results);

void write_json(const std::string& path, const json& j);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

// Joins out_dir and name, creating the directory on first use.
std::string output_path(const RunConfig& cfg, const std::string& name);

}  // namespace implode::cli
