#include "speclab/ball_spectra.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "speclab/bessel.hpp"
#include "speclab/types.hpp"

namespace speclab {
namespace {

void check_dim(int dim) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw ArgumentError("dimension " + std::to_string(dim) + " outside supported range [2, 10]");
  }
}

// First positive root of f: unit-step scan for a sign change, bisection to
// ~1e-6, Newton (with numerical derivative) to machine precision.
double first_root(const std::function<double(double)>& f, double start) {
  double a = start;
  double fa = f(a);
  double b = a + 1.0;
  double fb = f(b);
  while (std::signbit(fa) == std::signbit(fb)) {
    a = b;
    fa = fb;
    b += 1.0;
    fb = f(b);
    if (b > 100.0) throw SolverError("root scan found no sign change");
  }
  while (b - a > 1e-6 * b) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 20; ++it) {
    const double d = 1e-7 * x;
    const double slope = (f(x + d) - f(x - d)) / (2.0 * d);
    const double step = f(x) / slope;
    double next = x - step;
    if (next <= a || next >= b) break;
    x = next;
    if (std::fabs(step) < 1e-15 * x) break;
  }
  return x;
}

struct ZeroMemo {
  std::mutex mutex;
  std::array<double, 3 * (kMaxDim + 1)> values{};
};

ZeroMemo& memo() {
  static ZeroMemo m;
  return m;
}

double memoized(int slot, const std::function<double()>& compute) {
  {
    std::lock_guard<std::mutex> lock(memo().mutex);
    if (memo().values[slot] != 0.0) return memo().values[slot];
  }
  const double v = compute();
  std::lock_guard<std::mutex> lock(memo().mutex);
  memo().values[slot] = v;
  return v;
}

}  // namespace

double unit_ball_volume(int dim) {
  if (dim < 1) throw ArgumentError("dimension must be positive");
  double w = (dim % 2 == 1) ? 2.0 : std::numbers::pi;
  for (int n = (dim % 2 == 1) ? 3 : 4; n <= dim; n += 2) w *= 2.0 * std::numbers::pi / n;
  return w;
}

double dirichlet_zero(int dim) {
  check_dim(dim);
  return memoized(dim, [dim] {
    const double order = 0.5 * (dim - 2);
    return first_root([order](double t) { return bessel_j(order, t); }, 0.5);
  });
}

double neumann_zero(int dim) {
  check_dim(dim);
  return memoized(kMaxDim + 1 + dim, [dim] {
    const double order = 0.5 * dim;
    const double c = 0.5 * (2 - dim);
    return first_root(
        [order, c](double b) { return b * bessel_j_prime(order, b) + c * bessel_j(order, b); }, 0.5);
  });
}

double second_dirichlet_zero(int dim) {
  check_dim(dim);
  return memoized(2 * (kMaxDim + 1) + dim, [dim] {
    const double order = 0.5 * dim;
    return first_root([order](double t) { return bessel_j(order, t); }, 0.5);
  });
}

BallSpectrum ball_spectrum(int dim, double radius) {
  check_dim(dim);
  if (!(radius > 0.0)) throw ArgumentError("ball radius must be positive");
  BallSpectrum s;
  s.dim = dim;
  s.radius = radius;
  s.j_zero = dirichlet_zero(dim);
  s.beta_zero = neumann_zero(dim);
  s.omega_n = unit_ball_volume(dim);
  s.lambda1 = (s.j_zero / radius) * (s.j_zero / radius);
  const double j2 = second_dirichlet_zero(dim);
  s.lambda2 = (j2 / radius) * (j2 / radius);
  s.mu2 = (s.beta_zero / radius) * (s.beta_zero / radius);
  s.sigma2 = 1.0 / radius;
  s.torsion = s.omega_n * std::pow(radius, dim + 2) / (dim * (dim + 2.0));
  return s;
}

double critical_exponent(int dim) {
  check_dim(dim);
  if (dim == 2) return std::numeric_limits<double>::infinity();
  return 2.0 * dim / (dim - 2.0);
}

double kohler_jobin_exponent(int dim, double q) {
  return (2.0 + 2.0 * dim / q - dim) / (dim + 2.0);
}

namespace {

// Radial Lane-Emden profile w'' + (N-1)/r w' + |w|^{q-2} w = 0, w(0) = 1.
// Returns {first zero R, integral of w^q r^{N-1} over [0, R]}.
std::pair<double, double> lane_emden(int dim, double q) {
  const double n1 = dim - 1.0;
  auto rhs = [&](double r, const std::array<double, 3>& y) {
    const double w = y[0];
    const double src = w > 0.0 ? std::pow(w, q - 1.0) : 0.0;
    return std::array<double, 3>{y[1], -n1 / r * y[1] - src,
                                 (w > 0.0 ? std::pow(w, q) : 0.0) * std::pow(r, n1)};
  };
  auto rk4 = [&](double r, const std::array<double, 3>& y, double h) {
    auto add = [](const std::array<double, 3>& a, const std::array<double, 3>& b, double s) {
      return std::array<double, 3>{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
    };
    const auto k1 = rhs(r, y);
    const auto k2 = rhs(r + 0.5 * h, add(y, k1, 0.5 * h));
    const auto k3 = rhs(r + 0.5 * h, add(y, k2, 0.5 * h));
    const auto k4 = rhs(r + h, add(y, k3, h));
    std::array<double, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
  };

  const double r0 = 1e-3;
  const double c = 1.0 / (2.0 * dim);
  std::array<double, 3> y{1.0 - c * r0 * r0, -r0 / dim, std::pow(r0, dim) / dim};
  double r = r0;
  const double h = 2e-4;
  for (int step = 0; step < 10000000; ++step) {
    const auto next = rk4(r, y, h);
    if (next[0] <= 0.0) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rk4(r, y, mid)[0] > 0.0) lo = mid; else hi = mid;
      }
      const auto end = rk4(r, y, lo);
      return {r + lo, end[2]};
    }
    y = next;
    r += h;
  }
  throw SolverError("Lane-Emden shooting did not reach a zero");
}

}  // namespace

double ball_semilinear_normalized(int dim, double q) {
  check_dim(dim);
  if (!(q >= 1.0) || !(q < critical_exponent(dim))) {
    throw ArgumentError("exponent q outside [1, 2*)");
  }
  const double omega = unit_ball_volume(dim);
  if (q == 2.0) {
    const double j = dirichlet_zero(dim);
    return std::pow(omega, 2.0 / dim) * j * j;
  }
  if (q == 1.0) {
    const double t = omega / (dim * (dim + 2.0));
    return std::pow(omega, 2.0 / dim + 1.0) / t;
  }
  const auto [big_r, iq] = lane_emden(dim, q);
  // On B_R the profile solves -Lap w = w^{q-1}, so its energy equals its L^q mass.
  const double lam_r = std::pow(dim * omega * iq, 1.0 - 2.0 / q);
  const double measure = omega * std::pow(big_r, dim);
  return std::pow(measure, 2.0 / dim + 2.0 / q - 1.0) * lam_r;
}

double ball_semilinear_eigenvalue(int dim, double q, double radius) {
  if (!(radius > 0.0)) throw ArgumentError("ball radius must be positive");
  const double measure = unit_ball_volume(dim) * std::pow(radius, dim);
  return ball_semilinear_normalized(dim, q) / std::pow(measure, 2.0 / dim + 2.0 / q - 1.0);
}

double ball_robin_eigenvalue(int dim, double alpha, double radius) {
  check_dim(dim);
  if (!(alpha > 0.0)) throw ArgumentError("Robin parameter must be positive");
  if (!(radius > 0.0)) throw ArgumentError("ball radius must be positive");
  const double nu = 0.5 * (dim - 2);
  // Radial mode rho^{-nu} J_nu(k rho); the Robin condition at rho = radius reads
  // alpha J_nu(k r) = k J_{nu+1}(k r).
  auto g = [&](double k) {
    const double t = k * radius;
    return alpha - k * bessel_j(nu + 1.0, t) / bessel_j(nu, t);
  };
  double lo = 0.0;
  double hi = dirichlet_zero(dim) / radius;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  const double k = 0.5 * (lo + hi);
  return k * k;
}

double hierarchy_constant(int dim, double q, double sv_constant, double g_of_max) {
  const double omega = unit_ball_volume(dim);
  const double theta = kohler_jobin_exponent(dim, q);
  const double torsion_unit_measure = std::pow(omega, -2.0 / dim) / (dim * (dim + 2.0));
  return (std::pow(2.0, theta) - 1.0) * ball_semilinear_normalized(dim, q) *
         std::min(sv_constant / torsion_unit_measure, 1.0 / g_of_max);
}

ConstantsTable constants_table(int dim, double q, double iso_beta) {
  check_dim(dim);
  if (!(q >= 1.0) || !(q < critical_exponent(dim))) {
    throw ArgumentError("exponent q outside [1, 2*)");
  }
  if (!(iso_beta > 0.0)) throw ArgumentError("iso_beta must be positive");
  const double n = dim;
  const double omega = unit_ball_volume(dim);
  const double om_inv2 = std::pow(omega, -2.0 / n);
  const double j = dirichlet_zero(dim);
  const double beta = neumann_zero(dim);
  const double two_n = std::pow(2.0, 1.0 / n);

  ConstantsTable c;
  c.dim = dim;
  c.q = q;
  c.iso_beta = iso_beta;
  c.ps_constant = std::pow(4.0, 1.0 / n) * iso_beta * n * std::pow(omega, 1.0 / n) / 2.0;
  c.tau_saint_venant =
      om_inv2 / (16.0 * n * (n + 2.0)) *
      std::min({1.0, c.ps_constant / 16.0 * om_inv2 / n * (n + 2.0) / ((3.0 * n + 2.0) * (3.0 * n + 2.0)),
                (n + 2.0) / (4.0 * n)});
  c.kj_theta = kohler_jobin_exponent(dim, q);
  c.tau_nq = hierarchy_constant(dim, q, c.tau_saint_venant, 8.0);

  c.rho_lower = (n - 1.0) * (two_n - 1.0) * (two_n - 1.0) / (8.0 * two_n) * std::pow(omega, 2.0 / n);
  const double order = 0.5 * n;
  const double jb = bessel_j(order, beta);
  const double denom = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double r) {
        const double v = bessel_j(order, beta * r);
        return v * v * r;
      },
      0.0, 1.0, 10, 1e-14);
  c.rho = c.rho_lower * jb * jb / denom;

  c.c_berry = (n + 1.0) * n / std::pow(omega, 1.0 / n) * (two_n - 1.0) * (two_n - 1.0) / 8.0;
  const double om1 = std::pow(omega, 1.0 / n);
  c.c_stek = om1 / 2.0 * std::min(c.c_berry / n * om1, 0.25);
  c.theta_ratio = (beta / j) * (beta / j);
  c.kappa = 0.5 * std::min(c.theta_ratio / 4.0, c.rho / (std::pow(omega, 2.0 / n) * j * j));
  c.hn2d_constant = dim == 2 ? std::numbers::pi * j * j / 250.0 : 0.0;
  return c;
}

}  // namespace speclab
