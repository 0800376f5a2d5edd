#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "speclab/geometry.hpp"
#include "speclab/report.hpp"

namespace speclab {

enum class FamilyKind { ellipse, nearly_spherical, two_ball, thin_rectangle };

std::string to_string(FamilyKind k);
// Accepts "ellipse", "nearly-spherical", "two-ball", "thin-rectangle" (and
// underscore spellings).
FamilyKind family_from_string(const std::string& s);

// Term a cos(k t) + b sin(k t) of the boundary profile psi.
struct Harmonic {
  int order = 0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

// 2 sin 3t + cos 5t.
std::vector<Harmonic> default_profile();
double eval_profile(const std::vector<Harmonic>& psi, double t);

inline constexpr int kMinSmoothVertices = 128;
inline constexpr double kMaxFamilyEps = 0.3;

// Semi-axes 1 + eps and 1 / (1 + eps).
Domain make_ellipse(double eps, int n_vertices = 512);

// Throws ArgumentError naming the first nonvanishing moment of orders 0, 1, 2,
// computed by trapezoidal quadrature on the circle.
void validate_sharp_profile(const std::vector<Harmonic>& psi);

// r(t) = 1 + eps psi(t). `sharp` requires psi orthogonal to the harmonics of order 0, 1 and 2.
Domain make_nearly_spherical(double eps, const std::vector<Harmonic>& psi, int n_vertices = 512, bool sharp = true);

// Unit discs centered at (1 - eps, 0) and (eps - 1, 0), each cut by x = 0, joined along the common chord.
Domain make_two_ball(double eps, int n_vertices = 512);
// Exact area of make_two_ball's smooth shape.
double two_ball_area(double eps);

// 1 x eps rectangle.
Domain make_thin_rectangle(double eps);

struct FamilySpec {
  FamilyKind kind = FamilyKind::ellipse;
  std::vector<double> eps;  // positive, strictly descending, at most 0.3
  std::vector<Harmonic> psi = default_profile();
  bool sharp = true;
  int n_vertices = 512;
};

void validate(const FamilySpec& spec);
Domain make_member(const FamilySpec& spec, double eps);

// Geometric grid from eps_max down to eps_min.
std::vector<double> eps_grid(double eps_max, double eps_min, int steps);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_band = 0.0;  // 95% half-width from the slope standard error
  double residual = 0.0;    // root mean square, log units
  double max_residual = 0.0;
  double x_min = 0.0;       // fit window in the original (not log) variable
  double x_max = 0.0;
  int points = 0;
};

// Least squares of log y against log x. Needs at least `min_points` pairs with positive coordinates.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, int min_points = 5);

inline constexpr int kMinFitPoints = 5;
// A point enters a fit only when its deficit exceeds this multiple of the solver error.
inline constexpr double kNoiseFloorFactor = 10.0;

struct SweepPoint {
  double eps = 0.0;
  double area = 0.0;
  double asymmetry = 0.0;
  std::map<std::string, double> deficits;
  std::map<std::string, double> errors;  // solver error bar of each deficit
  std::map<std::string, double> bounds;
  std::map<std::string, std::string> status;
  std::map<std::string, double> extras;
  std::vector<std::string> failures;
};

struct SeriesFit {
  std::optional<LineFit> vs_eps;
  std::optional<LineFit> vs_asymmetry;
  std::string note;
};

struct SweepResult {
  FamilyKind kind = FamilyKind::ellipse;
  std::string asymmetry_kind;
  std::vector<std::string> checks;
  std::vector<SweepPoint> points;  // ordered as spec.eps
  std::map<std::string, SeriesFit> fits;
  std::optional<LineFit> asymmetry_vs_eps;
  std::string asymmetry_note;
};

struct SweepOptions {
  ReportOptions report;          // q_grid, alpha_grid, h, levels, seed
  std::vector<double> h_schedule;  // per eps point; empty uses report.h
};

// Check groups of the inequalities module, plus "torsion-fine" for the
// nearly-spherical torsion estimate. Points run concurrently; results keep the eps order.
SweepResult run_sweep(const FamilySpec& spec, const std::vector<std::string>& checks, const SweepOptions& opts = {});

// Per eps: the member is translated to barycenter 0 and scaled to measure pi,
// then T(B_1) - T(D) is compared with |phi|^2_{L^2(circle)} / 128, phi = r - 1.
SweepResult nearly_spherical_torsion_check(const std::vector<double>& eps, const std::vector<Harmonic>& psi,
                                           const SweepOptions& opts = {}, int n_vertices = 512);

// Squared L^2 norm over the unit circle of r(t) - 1 for a domain star-shaped about the origin.
double radial_deviation_norm2(const Domain& d, int rays = 4096);

void write_sweep_csv(const SweepResult& r, std::ostream& out);
nlohmann::json sweep_fits_json(const SweepResult& r);

}  // namespace speclab
