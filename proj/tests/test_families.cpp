#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "speclab/families.hpp"

using namespace speclab;
using std::numbers::pi;

namespace {

double max_radius_error(const Domain& d) {
  double e = 0.0;
  for (const auto& p : d.outer) e = std::max(e, std::abs(std::hypot(p.x, p.y) - 1.0));
  return e;
}

// Right half of the union, integrated column by column.
double two_ball_area_quadrature(double eps) {
  using boost::math::quadrature::gauss_kronrod;
  const double c = 1.0 - eps;
  auto column = [&](double x) { return 2.0 * std::sqrt(std::max(0.0, 1.0 - (x - c) * (x - c))); };
  return 2.0 * gauss_kronrod<double, 61>::integrate(column, 0.0, 2.0 - eps, 15, 1e-13);
}

SweepOptions coarse() {
  SweepOptions o;
  o.report.h = 0.05;
  o.report.q_grid = {2.0};
  return o;
}

}  // namespace

TEST_CASE("zero perturbation gives the unit disc") {
  CHECK(max_radius_error(make_ellipse(0.0)) < 1e-14);
  CHECK(max_radius_error(make_nearly_spherical(0.1, {})) < 1e-14);
  CHECK(max_radius_error(make_nearly_spherical(0.0, default_profile())) < 1e-14);
}

TEST_CASE("ellipse keeps the disc area") {
  const int n = 512;
  const double polygon = 0.5 * n * std::sin(2 * pi / n);
  for (double eps : {0.05, 0.2, 0.3}) {
    CAPTURE(eps);
    CHECK(measure(make_ellipse(eps, n)) == doctest::Approx(polygon).epsilon(1e-12));
  }
}

TEST_CASE("sharp profile validation names the offending moment") {
  CHECK_NOTHROW(validate_sharp_profile(default_profile()));
  CHECK_NOTHROW(validate_sharp_profile({{7, 0.3, -1.0}}));
  auto message = [](const std::vector<Harmonic>& psi) {
    try {
      validate_sharp_profile(psi);
    } catch (const ArgumentError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{2, 1.0, 0.0}}).find("order-2") != std::string::npos);
  CHECK(message({{0, 1.0, 0.0}}).find("order-0") != std::string::npos);
  CHECK(message({{1, 0.0, 0.5}}).find("order-1") != std::string::npos);
  CHECK_THROWS_AS(make_nearly_spherical(0.05, {{2, 1.0, 0.0}}), ArgumentError);
  CHECK_NOTHROW(make_nearly_spherical(0.05, {{2, 1.0, 0.0}}, 512, false));
}

TEST_CASE("nearly-spherical area excess is quadratic in eps") {
  const double a1 = measure(make_nearly_spherical(0.04, default_profile(), 2048)) - measure(make_nearly_spherical(0.0, {}, 2048));
  const double a2 = measure(make_nearly_spherical(0.02, default_profile(), 2048)) - measure(make_nearly_spherical(0.0, {}, 2048));
  // Mean of psi^2 / 2 over the circle: pi/2 * (4 + 1) per unit eps^2.
  CHECK(a1 == doctest::Approx(2.5 * pi * 0.04 * 0.04).epsilon(1e-3));
  CHECK(a1 / a2 == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("radial deviation norm matches the profile energy") {
  const double eps = 0.03;
  const Domain d = make_nearly_spherical(eps, default_profile(), 2048);
  CHECK(radial_deviation_norm2(d) == doctest::Approx(5 * pi * eps * eps).epsilon(1e-3));
  CHECK(radial_deviation_norm2(make_nearly_spherical(0.0, {}, 2048)) < 1e-10);
}

TEST_CASE("two-ball area matches the segment formula and quadrature") {
  for (double eps : {0.3, 0.1, 0.02}) {
    CAPTURE(eps);
    CHECK(two_ball_area(eps) == doctest::Approx(two_ball_area_quadrature(eps)).epsilon(1e-9));
    const Domain d = make_two_ball(eps);
    CHECK(measure(d) == doctest::Approx(two_ball_area(eps)).epsilon(1e-4));
    CHECK(contains(d, {0.0, 0.0}));
    CHECK_FALSE(contains(d, {0.0, 1.1 * std::sqrt(2 * eps - eps * eps)}));
  }
  CHECK(make_two_ball(0.01).outer.size() >= 3200);
  CHECK_THROWS_AS(make_two_ball(0.0), ArgumentError);
  CHECK_THROWS_AS(make_two_ball(0.31), ArgumentError);
}

TEST_CASE("thin rectangle eigenvalue ratio matches separation of variables") {
  ReportOptions o;
  o.h = 0.03;
  o.checks = {"ab"};
  const double j01 = 2.404825557695773, j11 = 3.831705970207512;
  double previous = 10.0;
  for (double a : {0.3, 0.15, 0.08}) {
    CAPTURE(a);
    const auto r = build_report(make_thin_rectangle(a), o);
    const double ratio = j11 * j11 / (j01 * j01) - r.records.front().deficit;
    CHECK(ratio == doctest::Approx((4 * a * a + 1) / (a * a + 1)).epsilon(0.01));
    CHECK(ratio < previous);
    previous = ratio;
  }
  CHECK(previous < 1.03);
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x, y;
  for (double e : eps_grid(0.2, 0.01, 7)) {
    x.push_back(e);
    y.push_back(3.0 * e * e);
  }
  auto f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(f.points == 7);
  CHECK(f.x_min == doctest::Approx(0.01));
  CHECK(f.x_max == doctest::Approx(0.2));

  y[3] *= 1.1;
  f = fit_loglog(x, y);
  CHECK(f.residual > 0.01);
  CHECK(f.slope_band > 0.0);

  y.assign(x.size(), 0.0);
  y[0] = y[1] = y[2] = y[3] = 1.0;
  CHECK_THROWS_AS(fit_loglog(x, y), ArgumentError);
}

TEST_CASE("family specs are validated") {
  FamilySpec s;
  s.eps = {0.2, 0.1, 0.05, 0.02};
  CHECK_THROWS_AS(validate(s), ArgumentError);
  s.eps = {0.2, 0.1, 0.05, 0.02, 0.03};
  CHECK_THROWS_AS(validate(s), ArgumentError);
  s.eps = {0.4, 0.1, 0.05, 0.02, 0.01};
  CHECK_THROWS_AS(validate(s), ArgumentError);
  s.eps = eps_grid(0.2, 0.02, 5);
  CHECK_NOTHROW(validate(s));
  s.n_vertices = 64;
  CHECK_THROWS_AS(validate(s), ArgumentError);
  CHECK_THROWS_AS(run_sweep(FamilySpec{FamilyKind::ellipse, eps_grid(0.2, 0.02, 5)}, {"torsion-fine"}), ArgumentError);
  CHECK_THROWS_AS(run_sweep(FamilySpec{FamilyKind::ellipse, eps_grid(0.2, 0.02, 5)}, {"bogus"}), ArgumentError);
  CHECK(family_from_string("two_ball") == FamilyKind::two_ball);
  CHECK_THROWS_AS(family_from_string("torus"), ArgumentError);
}

TEST_CASE("ellipse deficits shrink with eps and the sweep is reproducible") {
  FamilySpec s;
  s.eps = eps_grid(0.3, 0.1, 5);
  const auto r = run_sweep(s, {"fk", "sw"}, coarse());
  REQUIRE(r.points.size() == 5);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    CAPTURE(p.eps);
    CHECK(p.eps == s.eps[i]);
    CHECK(p.failures.empty());
    CHECK(p.status.at("fk_q2") == "satisfied");
    CHECK(p.status.at("sw") == "satisfied");
    if (i > 0) {
      CHECK(p.deficits.at("fk_q2") < r.points[i - 1].deficits.at("fk_q2"));
      CHECK(p.deficits.at("sw") < r.points[i - 1].deficits.at("sw"));
      CHECK(p.asymmetry < r.points[i - 1].asymmetry);
    }
  }
  std::ostringstream a, b;
  write_sweep_csv(r, a);
  write_sweep_csv(run_sweep(s, {"fk", "sw"}, coarse()), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("eps,area,asym_kind,asym_value,deficit_", 0) == 0);
  const auto j = sweep_fits_json(r);
  CHECK(j.at("family") == "ellipse");
  CHECK(j.at("fits").contains("sw"));
}

TEST_CASE("nearly-spherical torsion deficit dominates the boundary bound") {
  const auto r = nearly_spherical_torsion_check(eps_grid(0.06, 0.02, 5), default_profile(), coarse());
  for (const auto& p : r.points) {
    CAPTURE(p.eps);
    CHECK(p.failures.empty());
    CHECK(p.status.at("torsion_fine") == "satisfied");
    CHECK(p.deficits.at("torsion_fine") >= p.bounds.at("torsion_fine"));
    CHECK(p.area == doctest::Approx(measure(make_nearly_spherical(p.eps, default_profile(), 512, false))));
  }
  REQUIRE(r.fits.at("torsion_fine_bound").vs_eps);
  CHECK(r.fits.at("torsion_fine_bound").vs_eps->slope == doctest::Approx(2.0).epsilon(0.02));
}
