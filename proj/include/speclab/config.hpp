#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "speclab/families.hpp"
#include "speclab/report.hpp"

namespace speclab {

struct RunConfig {
  double h = 0.025;
  int levels = 2;
  int k = 2;
  std::vector<double> q_grid = {1.0, 1.5, 2.0, 4.0};
  std::vector<double> alpha_grid = {0.1, 1.0, 10.0};
  double iso_beta = kDefaultIsoBeta;
  std::vector<std::string> checks;
  std::string output;       // report JSON or sweep CSV
  std::string fits_output;  // sweep sidecar; empty derives it from `output`
  int threads = 0;          // 0 defers to SPECLAB_THREADS, then the OpenMP default
  std::uint64_t seed = 20240611;
};

void validate(const RunConfig& c);
ReportOptions report_options(const RunConfig& c);
SweepOptions sweep_options(const RunConfig& c);

// Keys mirror the field names; absent keys keep their defaults, unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

// Sets the OpenMP thread count and returns it.
int apply_threads(const RunConfig& c);

std::vector<std::string> split_list(const std::string& s);
std::vector<double> parse_grid(const std::string& s);

}  // namespace speclab
