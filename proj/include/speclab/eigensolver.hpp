#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "speclab/fem.hpp"

namespace speclab {

inline constexpr int kMaxEigenCount = 6;
inline constexpr int kMaxSteklovBoundary = 4000;
inline constexpr double kMaxSemilinearExponent = 20.0;

struct EigResult {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;  // full vertex length, M-normalized (Bd-normalized for Steklov)
  std::vector<double> residuals;         // |K u - lambda M u| / |u|
  std::vector<double> interior_residuals;  // Steklov only: harmonicity of the extension
  std::vector<double> extrapolated;        // filled by attach_richardson
  double h = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  double tolerance = 1e-10;  // relative residual stopping criterion
  int max_iterations = 2000;
  std::uint64_t seed = 7;
};

EigResult dirichlet_eigs(const DiscreteOperators& ops, int k, const SolverOptions& opts = {});
// Nonzero spectrum: mu_2 .. mu_{k+1}.
EigResult neumann_eigs(const DiscreteOperators& ops, int k, const SolverOptions& opts = {});
// sigma_2 .. sigma_{k+1}.
EigResult steklov_eigs(const DiscreteOperators& ops, int k, bool parallel = true);
EigResult robin_eig1(const DiscreteOperators& ops, double alpha, const SolverOptions& opts = {});

// Dense Dirichlet-to-Neumann matrix on ops.boundary (Schur complement of the
// interior block). `parallel` distributes the interior solves.
Eigen::MatrixXd dtn_matrix(const DiscreteOperators& ops, bool parallel = true);

struct TorsionResult {
  double value = 0.0;
  Eigen::VectorXd w;
  double min_w = 0.0;
  bool positivity_warning = false;  // some w_i < 0, bounded by 1e-12
};

TorsionResult torsion(const DiscreteOperators& ops);

struct SemilinearResult {
  double value = 0.0;
  double q = 2.0;
  Eigen::VectorXd u;  // unit discrete L^q norm
  std::vector<double> history_from_torsion;
  std::vector<double> history_from_eigenvector;
  bool torsion_start_won = true;
  double h = 0.0;
};

// Discrete L^q norms use a degree-5 triangle rule on the linear interpolant.
SemilinearResult semilinear_eig(const Mesh& mesh, const DiscreteOperators& ops, double q,
                                const SolverOptions& opts = {});
double lq_integral(const Mesh& mesh, const Eigen::VectorXd& u, double q);

double richardson(double coarse, double fine);
double richardson_error(double coarse, double fine);
void attach_richardson(EigResult& fine, const EigResult& coarse);

}  // namespace speclab
