#include "speclab/config.hpp"

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace speclab {

using nlohmann::json;

void validate(const RunConfig& c) {
  validate(report_options(c));
  if (c.threads < 0) throw ArgumentError("thread count must be nonnegative");
}

ReportOptions report_options(const RunConfig& c) {
  ReportOptions o;
  o.h = c.h;
  o.levels = c.levels;
  o.k = c.k;
  o.q_grid = c.q_grid;
  o.alpha_grid = c.alpha_grid;
  o.iso_beta = c.iso_beta;
  o.checks = c.checks;
  o.seed = c.seed;
  return o;
}

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.report = report_options(c);
  o.report.checks.clear();
  return o;
}

RunConfig config_from_json(const json& j) {
  static const std::set<std::string> known = {"h",      "levels", "k",           "q_grid",  "alpha_grid", "iso_beta",
                                              "checks", "output", "fits_output", "threads", "seed"};
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (!known.count(key)) throw ArgumentError("unknown config key " + key);
  }
  RunConfig c;
  try {
    if (j.contains("h")) c.h = j.at("h").get<double>();
    if (j.contains("levels")) c.levels = j.at("levels").get<int>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("q_grid")) c.q_grid = j.at("q_grid").get<std::vector<double>>();
    if (j.contains("alpha_grid")) c.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    if (j.contains("iso_beta")) c.iso_beta = j.at("iso_beta").get<double>();
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("fits_output")) c.fits_output = j.at("fits_output").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad config value: ") + e.what());
  }
  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  return {{"h", c.h},
          {"levels", c.levels},
          {"k", c.k},
          {"q_grid", c.q_grid},
          {"alpha_grid", c.alpha_grid},
          {"iso_beta", c.iso_beta},
          {"checks", c.checks},
          {"output", c.output},
          {"fits_output", c.fits_output},
          {"threads", c.threads},
          {"seed", c.seed}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read " + path);
  try {
    return config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("malformed config: ") + e.what());
  }
}

int apply_threads(const RunConfig& c) {
  int n = c.threads;
  if (n == 0) {
    if (const char* env = std::getenv("SPECLAB_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1) throw ArgumentError("SPECLAB_THREADS must be a positive integer");
      n = static_cast<int>(v);
    }
  }
  if (n > 0) omp_set_num_threads(n);
  return n > 0 ? n : omp_get_max_threads();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ArgumentError("not a number: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw ArgumentError("empty numeric list");
  return out;
}

}  // namespace speclab
