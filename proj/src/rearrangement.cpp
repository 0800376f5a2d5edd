#include "speclab/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

namespace speclab {
namespace {

constexpr double kPi = std::numbers::pi;

bool nondecreasing(const RadialProfile& p) {
  return p.monotone_dir == Monotone::increasing || p.monotone_dir == Monotone::constant;
}

bool nonincreasing(const RadialProfile& p) {
  return p.monotone_dir == Monotone::decreasing || p.monotone_dir == Monotone::constant;
}

// Breakpoints of one or two profiles inside [a, b], including the ends.
std::vector<double> pieces(double a, double b, const RadialProfile& f, const RadialProfile* g = nullptr) {
  std::vector<double> x{a, b};
  for (double r : f.radii)
    if (r > a && r < b) x.push_back(r);
  if (g)
    for (double r : g->radii)
      if (r > a && r < b) x.push_back(r);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

// Value of the profile on the open piece (x0, x1) evaluated at x.
double piece_value(const RadialProfile& p, double x0, double x1, double x) {
  return p.interpolation == Interpolation::step ? p(0.5 * (x0 + x1)) : p(x);
}

// Cumulative int_0^s f(r) r dr with O(log n) evaluation.
class WeightedAntiderivative {
 public:
  explicit WeightedAntiderivative(const RadialProfile& f) : f_(f) {
    nodes_.push_back(0.0);
    for (double r : f.radii)
      if (r > 0.0) nodes_.push_back(r);
    cum_.assign(nodes_.size(), 0.0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) cum_[i] = cum_[i - 1] + piece(nodes_[i - 1], nodes_[i]);
  }

  double operator()(double s) const {
    if (s <= 0.0) return 0.0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return cum_[i] + piece(nodes_[i], s);
  }

 private:
  const RadialProfile& f_;
  std::vector<double> nodes_, cum_;

  // Single interpolation piece: Simpson's rule is exact.
  double piece(double x0, double x1) const {
    if (x1 <= x0) return 0.0;
    double xm = 0.5 * (x0 + x1);
    if (f_.interpolation == Interpolation::step) return f_(xm) * 0.5 * (x1 * x1 - x0 * x0);
    return (x1 - x0) / 6.0 * (f_(x0) * x0 + 4.0 * f_(xm) * xm + f_(x1) * x1);
  }
};

void check_nonnegative(const Eigen::VectorXd& u) {
  double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  if (u.size() && u.minCoeff() < -1e-12 * scale) throw ArgumentError("function must be nonnegative");
}

double triangle_superlevel(double a, double b, double c, double area, double t) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  if (t < a) return area;
  if (t >= c) return 0.0;
  if (t < b) return area - area * (t - a) * (t - a) / ((b - a) * (c - a));
  return area * (c - t) * (c - t) / ((c - a) * (c - b));
}

double tri_area(const Mesh& m, const std::array<int, 3>& t) {
  return 0.5 * cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
}

}  // namespace

double RadialProfile::operator()(double r) const {
  if (r <= radii.front()) return values.front();
  if (r >= radii.back()) return values.back();
  auto it = std::upper_bound(radii.begin(), radii.end(), r);
  std::size_t i = static_cast<std::size_t>(it - radii.begin()) - 1;
  if (interpolation == Interpolation::step) return values[i];
  double w = (r - radii[i]) / (radii[i + 1] - radii[i]);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

RadialProfile make_profile(std::vector<double> radii, std::vector<double> values, Interpolation interp) {
  if (radii.size() != values.size() || radii.size() < 2) throw ArgumentError("profile needs at least two samples");
  double scale = 1.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!std::isfinite(radii[i]) || !std::isfinite(values[i])) throw ArgumentError("profile samples must be finite");
    if (i && !(radii[i] > radii[i - 1])) throw ArgumentError("profile grid must be strictly ascending");
    scale = std::max(scale, std::abs(values[i]));
  }
  if (radii.front() < 0.0) throw ArgumentError("profile grid must be nonnegative");
  const double tol = 1e-12 * scale;
  bool up = true, down = true, flat = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    double d = values[i] - values[i - 1];
    if (d < -tol) up = false;
    if (d > tol) down = false;
    if (std::abs(d) > tol) flat = false;
  }
  RadialProfile p{std::move(radii), std::move(values), Monotone::none, interp};
  p.monotone_dir = flat ? Monotone::constant : up ? Monotone::increasing : down ? Monotone::decreasing : Monotone::none;
  return p;
}

double weighted_integral(const RadialProfile& f, double a, double b) {
  WeightedAntiderivative g(f);
  return g(b) - g(a);
}

void write_profile_csv(const RadialProfile& p, std::ostream& out) {
  out << "radius,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.radii.size(); ++i) out << p.radii[i] << ',' << p.values[i] << '\n';
}

LevelData distribution(const Eigen::VectorXd& u, const Mesh& mesh, const std::vector<double>& thresholds,
                       bool parallel) {
  check_nonnegative(u);
  LevelData out{thresholds, std::vector<double>(thresholds.size(), 0.0)};
  std::vector<double> areas(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) areas[t] = tri_area(mesh, mesh.triangles[t]);
  const long n = static_cast<long>(thresholds.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (long k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      s += triangle_superlevel(u[tri[0]], u[tri[1]], u[tri[2]], areas[t], thresholds[k]);
    }
    out.measures[k] = s;
  }
  return out;
}

DistributionFunction::DistributionFunction(const Eigen::VectorXd& u, const Mesh& mesh) {
  for (const auto& t : mesh.triangles)
    for (int v : t) breaks_.push_back(u[v]);
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  const std::size_t k = breaks_.size();
  poly_.assign(k, {0.0, 0.0, 0.0});
  std::vector<double> constant(k + 1, 0.0);
  auto index = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), v) - breaks_.begin());
  };
  for (const auto& tri : mesh.triangles) {
    double v[3] = {u[tri[0]], u[tri[1]], u[tri[2]]};
    std::sort(v, v + 3);
    const double a = v[0], b = v[1], c = v[2];
    const double area = tri_area(mesh, tri);
    total_ += area;
    std::size_t ia = index(a), ib = index(b), ic = index(c);
    constant[0] += area;
    constant[ia] -= area;
    if (b > a) {
      double k1 = area / ((b - a) * (c - a));
      for (std::size_t j = ia; j < ib; ++j) {
        double d = breaks_[j] - a;
        poly_[j][0] += area - k1 * d * d;
        poly_[j][1] -= 2.0 * k1 * d;
        poly_[j][2] -= k1;
      }
    }
    if (c > b) {
      double k2 = area / ((c - a) * (c - b));
      for (std::size_t j = ib; j < ic; ++j) {
        double e = c - breaks_[j];
        poly_[j][0] += k2 * e * e;
        poly_[j][1] -= 2.0 * k2 * e;
        poly_[j][2] += k2;
      }
    }
  }
  double run = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    run += constant[j];
    poly_[j][0] += run;
  }
}

double DistributionFunction::operator()(double t) const {
  if (breaks_.empty() || t < breaks_.front()) return total_;
  if (t >= breaks_.back()) return 0.0;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  double s = t - breaks_[j];
  return std::max(0.0, poly_[j][0] + s * (poly_[j][1] + s * poly_[j][2]));
}

double DistributionFunction::inverse(double m, bool inclusive) const {
  if (breaks_.empty()) return 0.0;
  auto holds = [&](double mu) { return inclusive ? mu >= m : mu > m; };
  if (m >= total_ && !(inclusive && m == total_)) return std::max(0.0, breaks_.front());
  if (holds(0.0)) return std::max(0.0, breaks_.back());
  // Largest j with holds(mu(breaks_j)); mu(breaks_j) = poly_[j][0] is non-increasing in j.
  std::size_t lo = 0, hi = breaks_.size() - 1;
  if (!holds(poly_[0][0])) return std::max(0.0, breaks_.front());
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    (holds(poly_[mid][0]) ? lo : hi) = mid;
  }
  const auto& p = poly_[lo];
  const double width = breaks_[lo + 1] - breaks_[lo];
  auto mu = [&](double s) { return p[0] + s * (p[1] + s * p[2]); };
  if (holds(mu(width))) return std::max(0.0, breaks_[lo + 1]);
  double a = 0.0, b = width;
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(breaks_[lo])); ++it) {
    double c = 0.5 * (a + b);
    (holds(mu(c)) ? a : b) = c;
  }
  return std::max(0.0, breaks_[lo] + 0.5 * (a + b));
}

RadialProfile schwarz(const Eigen::VectorXd& u, const Mesh& mesh, int nodes) {
  if (nodes < 2) throw ArgumentError("profile needs at least two nodes");
  check_nonnegative(u);
  DistributionFunction mu(u, mesh);
  const double radius = std::sqrt(mu.total_measure() / kPi);
  std::vector<double> r(nodes), v(nodes);
  for (int i = 0; i < nodes; ++i) {
    r[i] = radius * i / (nodes - 1);
    v[i] = mu.inverse(kPi * r[i] * r[i]);
  }
  auto p = make_profile(std::move(r), std::move(v));
  if (!nonincreasing(p)) throw SolverError("rearranged profile is not monotone");
  p.monotone_dir = Monotone::decreasing;
  return p;
}

double radial_lq_integral(const RadialProfile& p, double q) {
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < p.radii.size(); ++i) {
    double x0 = p.radii[i], x1 = p.radii[i + 1];
    if (p.interpolation == Interpolation::step) {
      s += std::pow(std::abs(p.values[i]), q) * 0.5 * (x1 * x1 - x0 * x0);
    } else {
      s += Gauss::integrate([&](double x) { return std::pow(std::abs(p(x)), q) * x; }, x0, x1);
    }
  }
  return 2.0 * kPi * s;
}

double radial_dirichlet_energy(const RadialProfile& p) {
  if (p.interpolation != Interpolation::linear) throw ArgumentError("energy needs a linear profile");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < p.radii.size(); ++i) {
    double x0 = p.radii[i], x1 = p.radii[i + 1];
    double slope = (p.values[i + 1] - p.values[i]) / (x1 - x0);
    s += slope * slope * kPi * (x1 * x1 - x0 * x0);
  }
  return s;
}

PolyaSzegoGap polya_szego_gap(const Eigen::VectorXd& u, const Mesh& mesh, const Eigen::SparseMatrix<double>& stiffness,
                              int nodes) {
  double scale = u.cwiseAbs().maxCoeff();
  for (int b : boundary_vertices(mesh))
    if (std::abs(u[b]) > 1e-10 * scale) throw ArgumentError("function does not vanish on the boundary");
  PolyaSzegoGap g;
  g.lhs = u.dot(stiffness * u);
  g.rhs = radial_dirichlet_energy(schwarz(u, mesh, nodes));
  g.gap = g.lhs - g.rhs;
  return g;
}

double boosted_level(const Eigen::VectorXd& u, const Mesh& mesh, double asymmetry) {
  if (!(asymmetry > 0.0) || !(asymmetry < 2.0)) throw ArgumentError("boosted level needs an asymmetry in (0, 2)");
  check_nonnegative(u);
  DistributionFunction mu(u, mesh);
  return mu.inverse(mu.total_measure() * (1.0 - asymmetry / 4.0), true);
}

double radial_weight_gap(const RadialProfile& g, const Domain& d) {
  WeightedAntiderivative anti(g);
  double r = std::sqrt(measure(d) / kPi);
  return 2.0 * kPi * anti(r) - radial_integral(d, {0.0, 0.0}, [&](double s) { return anti(s); }, g.radii);
}

HardyLittlewoodGap hardy_littlewood_gap(const RadialProfile& f, const Domain& d) {
  if (!nonincreasing(f)) throw ArgumentError("Hardy-Littlewood gap needs a non-increasing profile");
  WeightedAntiderivative anti(f);
  HardyLittlewoodGap out;
  out.lhs = radial_weight_gap(f, d);
  out.shells = shell_radii(d);
  const double r = std::sqrt(measure(d) / kPi);
  const double r1 = std::min(out.shells.inner, r), r2 = std::max(out.shells.outer, r);
  const double fr = f(r);
  double inner = anti(r) - anti(r1) - fr * 0.5 * (r * r - r1 * r1);
  double outer = fr * 0.5 * (r2 * r2 - r * r) - (anti(r2) - anti(r));
  out.paper_bound = 2.0 * kPi * (inner + outer);
  return out;
}

namespace {

double product_integral(const RadialProfile& f, const RadialProfile& g) {
  auto x = pieces(0.0, 1.0, f, &g);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double x0 = x[i], x1 = x[i + 1], xm = 0.5 * (x0 + x1);
    auto h = [&](double t) { return piece_value(f, x0, x1, t) * piece_value(g, x0, x1, t) * t; };
    s += (x1 - x0) / 6.0 * (h(x0) + 4.0 * h(xm) + h(x1));
  }
  return s;
}

}  // namespace

MonotonicityGaps monotonicity_gaps(const RadialProfile& f, const RadialProfile& phi) {
  if (!nondecreasing(f) || !nondecreasing(phi)) throw ArgumentError("monotonicity lemma needs non-decreasing inputs");
  MonotonicityGaps out;
  double ft = weighted_integral(f, 0.0, 1.0);
  double phit = weighted_integral(phi, 0.0, 1.0);
  out.hersch_gap = product_integral(f, phi) - 2.0 * ft * phit;
  return out;
}

double improved_monotonicity_constant(const RadialProfile& f) {
  WeightedAntiderivative anti(f);
  auto big_h = [&](double t) { return 2.0 * anti(t) / (t * t); };
  const double h1 = big_h(1.0);
  double best = (f(1.0) - 2.0 * anti(1.0)) * std::exp(-0.5);
  for (int n = 1; n <= 100000; ++n) {
    double t = 1.0 - 0.5 / n;
    best = std::min(best, n * (h1 - big_h(t)) * std::pow(t, n + 2));
  }
  return 0.25 * best;
}

MonotonicityGaps monotonicity_gaps(const RadialProfile& f, const std::vector<double>& phi_coefficients,
                                   double gamma) {
  if (!(gamma >= 0.0 && gamma < 2.0)) throw ArgumentError("gamma must lie in [0, 2)");
  if (phi_coefficients.empty() || phi_coefficients.size() > 32)
    throw ArgumentError("power series needs between 1 and 32 coefficients");
  if (f.interpolation != Interpolation::linear || f.monotone_dir != Monotone::increasing)
    throw ArgumentError("improved lemma needs a strictly increasing profile");
  for (std::size_t i = 1; i < f.values.size(); ++i)
    if (!(f.values[i] > f.values[i - 1])) throw ArgumentError("improved lemma needs a strictly increasing profile");
  double phit = 0.0;
  for (std::size_t n = 0; n < phi_coefficients.size(); ++n) {
    if (!(phi_coefficients[n] >= 0.0) || !std::isfinite(phi_coefficients[n]))
      throw ArgumentError("power-series coefficients must be nonnegative");
    phit += phi_coefficients[n] / (n + 2.0);
  }
  if (!(phit > 0.0)) throw ArgumentError("power series vanishes identically");
  if (phi_coefficients[0] > gamma * phit * (1.0 + 1e-14))
    throw ArgumentError("constant term exceeds gamma times the weighted mean of the series");

  auto phi = [&](double t) {
    double s = 0.0;
    for (auto it = phi_coefficients.rbegin(); it != phi_coefficients.rend(); ++it) s = s * t + *it;
    return s;
  };
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  auto x = pieces(0.0, 1.0, f);
  double fphit = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    fphit += Gauss::integrate([&](double t) { return f(t) * phi(t) * t; }, x[i], x[i + 1]);

  MonotonicityGaps out;
  out.hersch_gap = fphit - 2.0 * weighted_integral(f, 0.0, 1.0) * phit;
  double c = improved_monotonicity_constant(f);
  out.improved_constant = c;
  out.improved_gap = out.hersch_gap - c * (2.0 - gamma) * phit;
  return out;
}

}  // namespace speclab
