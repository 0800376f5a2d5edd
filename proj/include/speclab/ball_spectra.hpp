#pragma once

namespace speclab {

constexpr int kMinDim = 2;
constexpr int kMaxDim = 10;

// Volume of the unit ball in R^N.
double unit_ball_volume(int dim);

// First positive zero of J_{(N-2)/2}.
double dirichlet_zero(int dim);

// First positive zero of b J'_{N/2}(b) + ((2-N)/2) J_{N/2}(b).
double neumann_zero(int dim);

// First positive zero of J_{N/2}; gives the second Dirichlet eigenvalue of the ball.
double second_dirichlet_zero(int dim);

struct BallSpectrum {
  int dim = 2;
  double radius = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu2 = 0.0;
  double sigma2 = 0.0;
  double torsion = 0.0;
  double j_zero = 0.0;
  double beta_zero = 0.0;
  double omega_n = 0.0;
};

BallSpectrum ball_spectrum(int dim, double radius);

// Semilinear eigenvalue lambda_1^q of the ball B_r, from the radial
// Lane-Emden profile. q = 1 gives 1/T, q = 2 gives lambda_1.
double ball_semilinear_eigenvalue(int dim, double q, double radius);

// First Robin eigenvalue of B_r with parameter alpha > 0.
double ball_robin_eigenvalue(int dim, double alpha, double radius);

// Exponent (2 + 2N/q - N)/(N + 2).
double kohler_jobin_exponent(int dim, double q);

// |B|^{2/N + 2/q - 1} lambda_1^q(B); independent of the radius.
double ball_semilinear_normalized(int dim, double q);

constexpr double kDefaultIsoBeta = 1e-3;

struct ConstantsTable {
  int dim = 2;
  double q = 2.0;
  double iso_beta = kDefaultIsoBeta;
  double ps_constant = 0.0;       // constant of the boosted Polya-Szego lemma
  double tau_saint_venant = 0.0;  // T(B) - T(Omega) >= tau A^3 at unit measure
  double tau_nq = 0.0;            // Faber-Krahn remainder constant for this q
  double rho_lower = 0.0;         // lower bound of the Szego-Weinberger constant
  double rho = 0.0;               // full Szego-Weinberger constant
  double c_berry = 0.0;           // weighted perimeter stability constant
  double c_stek = 0.0;            // Brock-Weinstock stability constant
  double kappa = 0.0;             // mu_2/lambda_1 stability constant
  double theta_ratio = 0.0;       // mu_2(B)/lambda_1(B)
  double kj_theta = 0.0;          // Kohler-Jobin exponent
  double hn2d_constant = 0.0;     // pi j01^2 / 250 (N = 2 only, else 0)
};

// Largest admissible q for the dimension (infinite for N = 2).
double critical_exponent(int dim);

ConstantsTable constants_table(int dim, double q, double iso_beta = kDefaultIsoBeta);

// The hierarchy transfer: Faber-Krahn constant for exponent q obtained from a
// Saint-Venant constant (normalized torsion deficit >= sv_constant * G) and G(max asymmetry).
double hierarchy_constant(int dim, double q, double sv_constant, double g_of_max);

}  // namespace speclab
