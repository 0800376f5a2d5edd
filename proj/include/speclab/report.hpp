#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "speclab/inequalities.hpp"

namespace speclab {

inline constexpr const char* kReportSchema = "speclab.report";
inline constexpr int kReportSchemaVersion = 1;

struct ReportOptions {
  double h = 0.025;  // mesh size on the unit-measure copy
  int levels = 2;    // nested uniform refinements; the last two are extrapolated
  std::vector<double> q_grid = {1.0, 1.5, 2.0, 4.0};
  std::vector<double> alpha_grid = {0.1, 1.0, 10.0};
  double iso_beta = kDefaultIsoBeta;
  int k = 2;  // eigenvalues per spectrum kept on the finest mesh, at least 2
  std::vector<std::string> checks;  // empty selects every group
  std::uint64_t seed = 20240611;
};

void validate(const ReportOptions& opts);

// Spectra, torsion and geometry of the unit-measure copy of the domain,
// without running any check.
SpectralReport compute_spectral_data(const Domain& d, const ReportOptions& opts = {});

// compute_spectral_data followed by run_checks.
SpectralReport build_report(const Domain& d, const ReportOptions& opts = {});

nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(const DeficitRecord& rec);
// Throws ArgumentError on a missing or unknown schema version.
SpectralReport report_from_json(const nlohmann::json& j);

void save_report(const SpectralReport& r, const std::string& path);
SpectralReport load_report(const std::string& path);

}  // namespace speclab
