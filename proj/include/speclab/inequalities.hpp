#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speclab/ball_spectra.hpp"
#include "speclab/geometry.hpp"

namespace speclab {

// A computed quantity on two nested meshes and its extrapolated value.
struct Estimate {
  double coarse = 0.0;
  double fine = 0.0;
  double value = 0.0;
  double error = 0.0;
};

enum class CheckMode { explicit_constant, property };
enum class CheckStatus { satisfied, inconclusive, failed, skipped };

std::string to_string(CheckMode m);
std::string to_string(CheckStatus s);

struct DeficitRecord {
  std::string id;
  CheckMode mode = CheckMode::property;
  CheckStatus status = CheckStatus::skipped;
  bool satisfied = false;
  double deficit = 0.0;
  double tolerance = 0.0;
  std::optional<double> bound;
  double slack = 0.0;
  std::string asymmetry_kind;
  double asymmetry_value = 0.0;
  std::map<std::string, double> constants;
  std::map<std::string, double> trail;
  std::string normalization;
  std::string note;
};

struct GeometrySummary {
  double area = 0.0;  // of the normalized copy (1 up to rounding)
  double perimeter = 0.0;
  double diameter = 0.0;
  double inradius = 0.0;
  Point boundary_barycenter;
  bool convex = false;
  int holes = 0;
  int components = 1;
  double fraenkel = 0.0;
  Point fraenkel_center;
  double fraenkel2 = 0.0;
  double dN = 0.0;
  std::optional<double> dM;  // convex domains only
  double alpha = 0.0;
  double p2_recentered = 0.0;     // P_2 after moving the boundary barycenter to 0
  double boundary_ball_gap = 0.0;  // |D sym diff (D* + x_bd)| / |D|
};

struct ParamEstimate {
  double param = 0.0;
  std::optional<Estimate> estimate;
};

struct SpectralReport {
  std::string label;
  double original_area = 0.0;
  double scale = 1.0;  // normalized = (original - barycenter) * scale
  double h = 0.0;
  int levels = 2;
  int vertices_fine = 0;
  double iso_beta = kDefaultIsoBeta;
  std::optional<Estimate> lambda1, lambda2, mu2, mu3, sigma2, sigma3, torsion;
  std::vector<ParamEstimate> robin;       // param = alpha
  std::vector<ParamEstimate> semilinear;  // param = q
  std::map<std::string, std::vector<double>> fine_spectra;  // dirichlet, neumann, steklov on the finest mesh
  GeometrySummary geometry;
  std::vector<std::string> errors;
  std::vector<DeficitRecord> records;
};

// Check groups accepted by --checks.
inline const std::vector<std::string> kCheckGroups = {"fk",  "sv", "hn2d", "sw", "steklov", "hks",
                                                      "ab",  "mu2la1", "kj",  "bd", "szego"};

// Tolerance multiplier on the propagated solver error.
inline constexpr double kToleranceFactor = 3.0;

DeficitRecord check_faber_krahn(const SpectralReport& r, double q);
DeficitRecord check_saint_venant(const SpectralReport& r);
DeficitRecord check_hansen_nadirashvili_2d(const SpectralReport& r);
DeficitRecord check_szego_weinberger(const SpectralReport& r);
// Brock-Weinstock, sum of inverses, P_2 stability, Brock, Weinstock.
std::vector<DeficitRecord> check_steklov_suite(const SpectralReport& r);
DeficitRecord check_hong_krahn_szego(const SpectralReport& r);
DeficitRecord check_ashbaugh_benguria(const SpectralReport& r);
DeficitRecord check_neumann_vs_dirichlet(const SpectralReport& r);
DeficitRecord check_kohler_jobin(const SpectralReport& r, double q);
std::vector<DeficitRecord> check_bossel_daners(const SpectralReport& r);
DeficitRecord check_szego_sum_inverses_2d(const SpectralReport& r);

// Runs the selected groups (all when empty). A check that throws becomes a
// failed record carrying the message.
std::vector<DeficitRecord> run_checks(const SpectralReport& r, const std::vector<std::string>& groups = {});

bool any_explicit_failure(const std::vector<DeficitRecord>& records);

// Sets slack = deficit - bound and the status: satisfied when slack >= 0 (up to
// rounding), inconclusive within the tolerance, failed beyond it.
void classify(DeficitRecord& rec);

}  // namespace speclab
