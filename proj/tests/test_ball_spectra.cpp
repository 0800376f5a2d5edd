#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "speclab/ball_spectra.hpp"
#include "speclab/bessel.hpp"
#include "speclab/types.hpp"

using namespace speclab;
using std::numbers::pi;

namespace {

double bisect(auto f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Shooting for g'' + (N-1)/r g' + lam g = 0 with g'(1) + alpha g(1) = 0.
double robin_shooting(int dim, double alpha) {
  auto mismatch = [&](double lam) {
    const int n = 20000;
    const double h = 1.0 / n;
    double r = 1e-6, g = 1.0, gp = -lam * r / dim;
    auto f = [&](double rr, double gg, double gpp) { return -(dim - 1.0) / rr * gpp - lam * gg; };
    for (int i = 0; i < n; ++i) {
      const double hh = (i == 0) ? h - 1e-6 : h;
      const double k1g = gp, k1p = f(r, g, gp);
      const double k2g = gp + 0.5 * hh * k1p, k2p = f(r + 0.5 * hh, g + 0.5 * hh * k1g, gp + 0.5 * hh * k1p);
      const double k3g = gp + 0.5 * hh * k2p, k3p = f(r + 0.5 * hh, g + 0.5 * hh * k2g, gp + 0.5 * hh * k2p);
      const double k4g = gp + hh * k3p, k4p = f(r + hh, g + hh * k3g, gp + hh * k3p);
      g += hh / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
      gp += hh / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
      r += hh;
    }
    return gp + alpha * g;
  };
  return bisect(mismatch, 1e-9, dirichlet_zero(dim) * dirichlet_zero(dim) - 1e-9);
}

// Radial finite-difference inverse iteration for the semilinear eigenvalue on the unit disc.
double radial_semilinear_oracle(double q, int n) {
  const double h = 1.0 / n;
  // Unknowns u_0..u_{n-1}, u_n = 0. Finite-volume weights for -(r u')' = r f.
  std::vector<double> u(n, 1.0), rhs(n), a(n), b(n), c(n), w(n);
  for (int i = 0; i < n; ++i) {
    const double rl = i == 0 ? 0.0 : (i - 0.5) * h;
    const double rr = (i + 0.5) * h;
    w[i] = i == 0 ? h * h / 8.0 : i * h * h;
    b[i] = (rl + rr) / h;
    a[i] = -rl / h;
    c[i] = -rr / h;
  }
  auto lq_norm = [&](const std::vector<double>& v) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(v[i]), q);
    return std::pow(2 * pi * s, 1.0 / q);
  };
  double value = 0;
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < n; ++i) rhs[i] = w[i] * std::pow(std::fabs(u[i]), q - 2.0) * u[i];
    std::vector<double> cp(n), dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for (int i = 1; i < n; ++i) {
      const double m = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / m;
      dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
    }
    std::vector<double> x(n);
    x[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
    const double nrm = lq_norm(x);
    for (auto& v : x) v /= nrm;
    double energy = 0;
    for (int i = 0; i < n; ++i) {
      const double next = i + 1 < n ? x[i + 1] : 0.0;
      energy += (i + 0.5) * h * (next - x[i]) * (next - x[i]) / h;
    }
    const double next_value = 2 * pi * energy;
    u = x;
    if (std::fabs(next_value - value) < 1e-13 * next_value) break;
    value = next_value;
  }
  return value;
}

}  // namespace

TEST_CASE("bessel_j closed forms and reference values") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(0.5, 1.0) == doctest::Approx(std::sqrt(2.0 / pi) * std::sin(1.0)).epsilon(1e-14));
  CHECK(bessel_j(0.5, 1.0) == doctest::Approx(0.6714).epsilon(1e-4));
  for (double t : {0.3, 2.0, 7.5, 11.9, 19.0, 25.0, 40.0}) {
    CHECK(bessel_j(1.5, t) ==
          doctest::Approx(std::sqrt(2.0 / (pi * t)) * (std::sin(t) / t - std::cos(t))).epsilon(1e-11));
  }
  for (double order : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 5.0}) {
    for (double t = 0.05; t < 40.0; t += 0.37) {
      const double ref = boost::math::cyl_bessel_j(order, t);
      CHECK(std::fabs(bessel_j(order, t) - ref) <= 1e-12 * std::max(std::fabs(ref), 1e-2));
      const double dref = boost::math::cyl_bessel_j_prime(order, t);
      CHECK(std::fabs(bessel_j_prime(order, t) - dref) <= 1e-11 * std::max(std::fabs(dref), 1e-2));
    }
  }
  CHECK(std::fabs(bessel_j_prime(1.0, 1.841183781340659)) < 1e-13);
  CHECK_THROWS_AS(bessel_j(5.5, 1.0), ArgumentError);
  CHECK_THROWS_AS(bessel_j(1.0, -1.0), ArgumentError);
}

TEST_CASE("Dirichlet and Neumann zeros") {
  CHECK(dirichlet_zero(2) == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(dirichlet_zero(3) == doctest::Approx(pi).epsilon(1e-13));
  CHECK(dirichlet_zero(4) == doctest::Approx(3.831705970207512).epsilon(1e-13));
  CHECK(neumann_zero(2) == doctest::Approx(1.841183781340659).epsilon(1e-13));
  CHECK(neumann_zero(3) == doctest::Approx(2.081575977818101).epsilon(1e-12));
  for (int n = 2; n <= 10; ++n) {
    const double nu = 0.5 * (n - 2);
    const double j = dirichlet_zero(n);
    CHECK(j == doctest::Approx(boost::math::cyl_bessel_j_zero(nu, 1)).epsilon(1e-12));
    CHECK(std::fabs(bessel_j(nu, j)) < 1e-10);
    const double b = neumann_zero(n);
    const double oracle = bisect(
        [&](double x) {
          return x * boost::math::cyl_bessel_j_prime(0.5 * n, x) +
                 0.5 * (2 - n) * boost::math::cyl_bessel_j(0.5 * n, x);
        },
        0.1 * b + 0.3, j);
    CHECK(b == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::fabs(b * bessel_j_prime(0.5 * n, b) + 0.5 * (2 - n) * bessel_j(0.5 * n, b)) < 1e-10);
    CHECK(b < j);
    CHECK(second_dirichlet_zero(n) ==
          doctest::Approx(boost::math::cyl_bessel_j_zero(0.5 * n, 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dirichlet_zero(11), ArgumentError);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == 2.0);
  CHECK(unit_ball_volume(2) == doctest::Approx(pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0));
}

TEST_CASE("ball spectrum formulas and scaling") {
  const auto s = ball_spectrum(2, 1.0);
  CHECK(s.lambda1 == doctest::Approx(5.783185962946784).epsilon(1e-12));
  CHECK(s.mu2 == doctest::Approx(1.841183781340659 * 1.841183781340659).epsilon(1e-12));
  CHECK(s.sigma2 == 1.0);
  CHECK(s.torsion == doctest::Approx(pi / 8).epsilon(1e-14));
  CHECK(s.lambda2 == doctest::Approx(14.681970642123893).epsilon(1e-11));
  CHECK(ball_spectrum(3, 1.0).lambda1 == doctest::Approx(pi * pi).epsilon(1e-12));
  const auto s2 = ball_spectrum(2, 2.0);
  CHECK(s2.lambda1 == doctest::Approx(s.lambda1 / 4).epsilon(1e-14));
  CHECK(s2.mu2 == doctest::Approx(s.mu2 / 4).epsilon(1e-14));
  CHECK(s2.sigma2 == doctest::Approx(0.5));
  CHECK(s2.torsion == doctest::Approx(16 * s.torsion).epsilon(1e-14));
  CHECK_THROWS_AS(ball_spectrum(2, 0.0), ArgumentError);
}

TEST_CASE("semilinear eigenvalue of the ball") {
  const double t = ball_spectrum(2, 1.0).torsion;
  CHECK(ball_semilinear_eigenvalue(2, 1.0, 1.0) * t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ball_semilinear_eigenvalue(2, 2.0, 1.0) == doctest::Approx(dirichlet_zero(2) * dirichlet_zero(2)));
  // The shooting branch is continuous at both closed-form endpoints.
  CHECK(ball_semilinear_eigenvalue(2, 2.0 - 1e-7, 1.0) ==
        doctest::Approx(ball_semilinear_eigenvalue(2, 2.0, 1.0)).epsilon(1e-6));
  CHECK(ball_semilinear_eigenvalue(2, 1.0 + 1e-7, 1.0) ==
        doctest::Approx(ball_semilinear_eigenvalue(2, 1.0, 1.0)).epsilon(1e-6));
  CHECK(ball_semilinear_eigenvalue(3, 2.0 - 1e-7, 1.0) == doctest::Approx(pi * pi).epsilon(1e-6));
  for (double q : {1.5, 3.0, 4.0}) {
    const double oracle = radial_semilinear_oracle(q, 4000);
    CHECK(ball_semilinear_eigenvalue(2, q, 1.0) == doctest::Approx(oracle).epsilon(2e-5));
  }
  // Scaling law lambda(tB) = t^{N-2-2N/q} lambda(B).
  CHECK(ball_semilinear_eigenvalue(2, 4.0, 2.0) ==
        doctest::Approx(ball_semilinear_eigenvalue(2, 4.0, 1.0) * std::pow(2.0, -1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(ball_semilinear_eigenvalue(3, 6.0, 1.0), ArgumentError);
}

TEST_CASE("Robin eigenvalue of the ball matches shooting") {
  for (int n : {2, 3}) {
    for (double alpha : {0.1, 1.0, 10.0}) {
      CHECK(ball_robin_eigenvalue(n, alpha, 1.0) == doctest::Approx(robin_shooting(n, alpha)).epsilon(1e-8));
    }
  }
  // Scaling: lambda(B_r, alpha) = r^{-2} lambda(B_1, alpha r).
  CHECK(ball_robin_eigenvalue(2, 1.0, 2.0) == doctest::Approx(ball_robin_eigenvalue(2, 2.0, 1.0) / 4).epsilon(1e-12));
  CHECK(ball_robin_eigenvalue(2, 1e-6, 1.0) < 1e-5);
  CHECK(ball_robin_eigenvalue(2, 1e6, 1.0) < dirichlet_zero(2) * dirichlet_zero(2));
  CHECK(ball_robin_eigenvalue(2, 1e6, 1.0) == doctest::Approx(dirichlet_zero(2) * dirichlet_zero(2)).epsilon(1e-5));
}

TEST_CASE("constants table") {
  const auto c = constants_table(2, 2.0);
  CHECK(c.c_berry == doctest::Approx(6.0 / std::sqrt(pi) * std::pow(std::sqrt(2.0) - 1, 2) / 8).epsilon(1e-14));
  CHECK(c.c_berry == doctest::Approx(0.07260).epsilon(1e-3));
  CHECK(c.rho_lower == doctest::Approx(pi * std::pow(std::sqrt(2.0) - 1, 2) / (8 * std::sqrt(2.0))).epsilon(1e-14));
  CHECK(c.rho_lower == doctest::Approx(0.04765).epsilon(1e-3));
  CHECK(c.kj_theta == doctest::Approx(0.5));
  CHECK(constants_table(2, 1.0).kj_theta == doctest::Approx(1.0));
  CHECK(c.theta_ratio == doctest::Approx(std::pow(1.841183781340659 / 2.404825557695773, 2)).epsilon(1e-12));
  CHECK(c.theta_ratio == doctest::Approx(0.5862).epsilon(1e-3));
  CHECK(c.hn2d_constant == doctest::Approx(pi * 2.404825557695773 * 2.404825557695773 / 250));

  // Full rho against an independent Bessel quadrature (midpoint rule on boost values).
  const double b = neumann_zero(2);
  double integral = 0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double r = (i + 0.5) / m;
    integral += std::pow(boost::math::cyl_bessel_j(1, b * r), 2) * r / m;
  }
  CHECK(c.rho == doctest::Approx(c.rho_lower * std::pow(boost::math::cyl_bessel_j(1, b), 2) / integral).epsilon(1e-8));
  CHECK(c.rho > c.rho_lower);

  // Saint-Venant constant written out by hand for N = 2.
  const double cn = 2.0 * 1e-3 * std::sqrt(pi);
  const double tau = 1 / pi / 128 * std::min({1.0, cn / 16 * (1 / pi) / 2 * 4 / 64, 0.5});
  CHECK(c.tau_saint_venant == doctest::Approx(tau).epsilon(1e-14));
  // Hierarchy transfer for q = 2: theta = 1/2, normalized ball value pi j^2, |B|^2/T(B) = 8 pi.
  const double j = 2.404825557695773;
  CHECK(c.tau_nq == doctest::Approx((std::sqrt(2.0) - 1) * pi * j * j * std::min(tau * 8 * pi, 0.125)).epsilon(1e-12));
  CHECK(c.kappa == doctest::Approx(0.5 * std::min(c.theta_ratio / 4, c.rho / (pi * j * j))).epsilon(1e-14));
  CHECK(c.c_stek == doctest::Approx(std::sqrt(pi) / 2 * std::min(c.c_berry / 2 * std::sqrt(pi), 0.25)).epsilon(1e-14));

  for (int n = 2; n <= 10; ++n) {
    for (double q : {1.0, 1.5, 2.0}) {
      const auto t = constants_table(n, q);
      for (double v : {t.ps_constant, t.tau_saint_venant, t.tau_nq, t.rho_lower, t.rho, t.c_berry, t.c_stek,
                       t.kappa, t.theta_ratio, t.kj_theta}) {
        CHECK(v > 0.0);
      }
      CHECK(t.kj_theta <= 1.0);
      CHECK(t.theta_ratio < 1.0);
    }
  }
  double prev = 0;
  for (double beta : {1e-6, 1e-3, 1.0, 1e3, 1e6}) {
    const double t = constants_table(2, 2.0, beta).tau_nq;
    CHECK(t >= prev);
    prev = t;
  }
  CHECK_THROWS_AS(constants_table(3, 6.0), ArgumentError);
  CHECK_THROWS_AS(constants_table(2, 0.5), ArgumentError);
  CHECK_THROWS_AS(constants_table(2, 2.0, 0.0), ArgumentError);
}
