#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "speclab/geometry.hpp"
#include "speclab/mesh.hpp"

namespace speclab {

enum class Monotone { increasing, decreasing, constant, none };
enum class Interpolation { linear, step };

// Samples of a radial function. Linear interpolation between nodes, or
// left-closed steps; constant extension outside the grid.
struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> values;
  Monotone monotone_dir = Monotone::none;
  Interpolation interpolation = Interpolation::linear;

  double operator()(double r) const;
};

// Validates the grid and sets the monotonicity flag (tolerance 1e-12).
RadialProfile make_profile(std::vector<double> radii, std::vector<double> values,
                           Interpolation interp = Interpolation::linear);
template <typename F>
RadialProfile tabulate(F&& f, double r_max, int nodes, Interpolation interp = Interpolation::linear) {
  std::vector<double> r(nodes), v(nodes);
  for (int i = 0; i < nodes; ++i) {
    r[i] = r_max * i / (nodes - 1);
    v[i] = f(r[i]);
  }
  return make_profile(std::move(r), std::move(v), interp);
}

// int_a^b f(s) s ds, exact for the profile's interpolant.
double weighted_integral(const RadialProfile& f, double a, double b);
void write_profile_csv(const RadialProfile& p, std::ostream& out);

struct LevelData {
  std::vector<double> thresholds;
  std::vector<double> measures;  // |{u > t}|
};

// Exact superlevel areas of the linear interpolant, one threshold per thread.
LevelData distribution(const Eigen::VectorXd& u, const Mesh& mesh, const std::vector<double>& thresholds,
                       bool parallel = true);

// Exact piecewise-quadratic distribution function of a linear interpolant.
class DistributionFunction {
 public:
  DistributionFunction(const Eigen::VectorXd& u, const Mesh& mesh);
  double operator()(double t) const;  // |{u > t}|
  // sup{t : mu(t) > m}, or with `inclusive` sup{t : mu(t) >= m}; clamped below at 0.
  double inverse(double m, bool inclusive = false) const;
  double total_measure() const { return total_; }
  double max_value() const { return breaks_.empty() ? 0.0 : breaks_.back(); }

 private:
  std::vector<double> breaks_;              // sorted distinct nodal values
  std::vector<std::array<double, 3>> poly_;  // on [breaks_j, breaks_{j+1}): c0 + c1 s + c2 s^2
  double total_ = 0.0;
};

inline constexpr int kDefaultProfileNodes = 512;

RadialProfile schwarz(const Eigen::VectorXd& u, const Mesh& mesh, int nodes = kDefaultProfileNodes);

// 2 pi int_0^R |g(r)|^q r dr for a profile (radial L^q integral).
double radial_lq_integral(const RadialProfile& p, double q);
// 2 pi int |g'(r)|^2 r dr for a linear profile.
double radial_dirichlet_energy(const RadialProfile& p);

struct PolyaSzegoGap {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

// `stiffness` supplies the discrete energy u^T K u.
PolyaSzegoGap polya_szego_gap(const Eigen::VectorXd& u, const Mesh& mesh, const Eigen::SparseMatrix<double>& stiffness,
                              int nodes = kDefaultProfileNodes);

// sup{t : mu(t) >= |Omega| (1 - asym/4)}.
double boosted_level(const Eigen::VectorXd& u, const Mesh& mesh, double asymmetry);

struct HardyLittlewoodGap {
  double lhs = 0.0;          // int_{ball} f - int_domain f
  double paper_bound = 0.0;  // 2 pi int_{R1}^{R2} |f - f(R)| rho drho
  ShellRadii shells;
};

HardyLittlewoodGap hardy_littlewood_gap(const RadialProfile& f, const Domain& d);
// int_{ball} g - int_domain g for any profile; sign follows the monotonicity.
double radial_weight_gap(const RadialProfile& g, const Domain& d);

struct MonotonicityGaps {
  double hersch_gap = 0.0;
  std::optional<double> improved_gap;
  std::optional<double> improved_constant;
};

MonotonicityGaps monotonicity_gaps(const RadialProfile& f, const RadialProfile& phi);
// Improved variant: phi given by nonnegative power-series coefficients, gamma in [0, 2).
MonotonicityGaps monotonicity_gaps(const RadialProfile& f, const std::vector<double>& phi_coefficients,
                                   double gamma);
// (1/4) inf_n n [H(1) - H(1 - 1/(2n))] (1 - 1/(2n))^{n+2}, H(t) = (2/t^2) int_0^t f(s) s ds.
double improved_monotonicity_constant(const RadialProfile& f);

}  // namespace speclab
