#include "speclab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "speclab/eigensolver.hpp"
#include "speclab/mesh.hpp"
#include "speclab/rearrangement.hpp"
#include "speclab/rng.hpp"
#include "speclab/shapes.hpp"

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kJ01 = 2.404825557695773;
constexpr double kBeta11 = 1.841183781340659;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Collector {
 public:
  Collector(std::string suite, std::vector<VerifyResult>& out) : suite_(std::move(suite)), out_(out) {}
  void add(const std::string& name, bool ok, const std::string& detail) { out_.push_back({suite_, name, ok, detail}); }
  template <typename F>
  void guarded(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, false, std::string("threw: ") + e.what());
    }
  }

 private:
  std::string suite_;
  std::vector<VerifyResult>& out_;
};

void ball_suite(Collector& c) {
  c.guarded("closed forms", [&] {
    const auto b = ball_spectrum(2, 1.0);
    const double err = std::max({rel(b.lambda1, kJ01 * kJ01), rel(b.mu2, kBeta11 * kBeta11), rel(b.sigma2, 1.0),
                                 rel(b.torsion, kPi / 8)});
    c.add("unit disc lambda1, mu2, sigma2, T", err < 1e-10, "max rel err " + num(err));
    const double l3 = ball_spectrum(3, 1.0).lambda1;
    c.add("unit 3-ball lambda1 = pi^2", rel(l3, kPi * kPi) < 1e-10, "rel err " + num(rel(l3, kPi * kPi)));
  });
  c.guarded("semilinear endpoints", [&] {
    const double t = ball_spectrum(2, 1.0).torsion;
    const double e1 = rel(ball_semilinear_eigenvalue(2, 1.0, 1.0), 1.0 / t);
    const double e2 = rel(ball_semilinear_eigenvalue(2, 2.0, 1.0), kJ01 * kJ01);
    c.add("q = 1 gives 1/T and q = 2 gives lambda1", std::max(e1, e2) < 1e-8, "rel err " + num(std::max(e1, e2)));
    c.add("Kohler-Jobin exponent at q = 1 is 1", std::abs(kohler_jobin_exponent(2, 1.0) - 1.0) < 1e-15, "");
  });
}

void fem_suite(Collector& c, const RunConfig& cfg) {
  c.guarded("square", [&] {
    const Mesh coarse = triangulate(rectangle(1, 1), 0.05);
    const Mesh fine = refine_uniform(coarse);
    const auto a = assemble(coarse), b = assemble(fine);
    const double l1 = richardson(dirichlet_eigs(a, 1).values[0], dirichlet_eigs(b, 1).values[0]);
    const double m2 = richardson(neumann_eigs(a, 1).values[0], neumann_eigs(b, 1).values[0]);
    c.add("square lambda1 -> 2 pi^2 (extrapolated)", rel(l1, 2 * kPi * kPi) < 2e-3, "rel err " + num(rel(l1, 2 * kPi * kPi)));
    c.add("square mu2 -> pi^2 (extrapolated)", rel(m2, kPi * kPi) < 2e-3, "rel err " + num(rel(m2, kPi * kPi)));
    const double t = torsion(b).value;
    const double s = semilinear_eig(fine, b, 1.0).value;
    c.add("semilinear q = 1 equals 1/T", rel(s * t, 1.0) < 1e-6, "rel err " + num(rel(s * t, 1.0)));
  });
  c.guarded("assembly", [&] {
    const Mesh m = triangulate(l_shape(), cfg.h * 2);
    const auto p = assemble(m), s = assemble_serial(m);
    const bool same = (Eigen::MatrixXd(p.stiffness) - Eigen::MatrixXd(s.stiffness)).norm() == 0.0 &&
                      (Eigen::MatrixXd(p.mass) - Eigen::MatrixXd(s.mass)).norm() == 0.0;
    c.add("parallel assembly equals the serial reference", same, "");
  });
}

void geometry_suite(Collector& c, const RunConfig& cfg) {
  OptimizerOptions oo;
  oo.seed = cfg.seed;
  for (const auto& d : standard_corpus()) {
    if (!is_convex(d)) continue;
    c.guarded(d.label, [&] {
      const double a = fraenkel_asymmetry(d, std::nullopt, oo).value;
      const double dn = asymmetry_dN(d).value;
      const double dm = asymmetry_dM(d).value;
      const bool chain = dn >= a / 4 - 1e-12 && dm >= a / 2 - 1e-12 && dm >= 0.5 * dn - 1e-12 && dn < 1 && a < 2;
      c.add(d.label + ": asymmetry comparison chain", chain, "A " + num(a) + " dN " + num(dn) + " dM " + num(dm));
      const double lower = 0.5 * std::sqrt(kPi / 2) * std::sqrt(measure(d)) / diameter(d) * dm * dm;
      c.add(d.label + ": Fraenkel bounds the sandwich asymmetry", a >= lower - 1e-12, num(a) + " >= " + num(lower));
      c.add(d.label + ": |D| / r <= 2 pi diam", measure(d) / inradius(d).radius <= 2 * kPi * diameter(d), "");
      const Domain moved = translated(scaled(d, 2.5), {0.7, -1.1});
      const double am = fraenkel_asymmetry(moved, std::nullopt, oo).value;
      c.add(d.label + ": Fraenkel asymmetry scale and translation invariant", std::abs(am - a) <= 1e-9 * std::max(a, 1e-3),
            "diff " + num(am - a));
    });
  }
}

void rearrangement_suite(Collector& c, const RunConfig& cfg) {
  c.guarded("equimeasurability", [&] {
    const Mesh m = triangulate(rectangle(1, 1), 0.03);
    const auto ops = assemble(m);
    const auto w = torsion(ops).w;
    const auto star = schwarz(w, m);
    double worst = 0.0;
    for (double q : {1.0, 2.0, 4.0}) worst = std::max(worst, rel(radial_lq_integral(star, q), lq_integral(m, w, q)));
    c.add("Schwarz symmetrization keeps L1, L2, L4 norms", worst < 1e-4, "max rel err " + num(worst));
    const auto gap = polya_szego_gap(w, m, ops.stiffness);
    c.add("Polya-Szego gap nonnegative up to O(h)", gap.gap >= -0.05 * gap.lhs, "gap " + num(gap.gap));
  });
  c.guarded("monotone instances", [&] {
    Rng rng(cfg.seed);
    int negative = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto make = [&] {
        const int n = 2 + static_cast<int>(rng.uniform() * 12);
        std::vector<double> r{0.0}, v{rng.uniform()};
        for (int i = 1; i < n; ++i) {
          r.push_back(r.back() + 0.05 + rng.uniform());
          v.push_back(v.back() + rng.uniform());
        }
        const double span = r.back() + 0.05 + rng.uniform();
        for (double& x : r) x /= span;
        return make_profile(r, v, Interpolation::step);
      };
      const auto f = make(), phi = make();
      if (monotonicity_gaps(f, phi).hersch_gap < -1e-12) ++negative;
    }
    c.add("monotone rearrangement lemma on 1000 random step pairs", negative == 0,
          std::to_string(negative) + " violations");
  });
}

void inequalities_suite(Collector& c, const RunConfig& cfg) {
  ReportOptions o = report_options(cfg);
  for (const auto& d : standard_corpus()) {
    c.guarded(d.label, [&] {
      const auto r = build_report(d, o);
      int failed = 0, inconclusive = 0;
      std::string which;
      for (const auto& rec : r.records) {
        if (rec.status == CheckStatus::failed && rec.mode == CheckMode::explicit_constant) {
          ++failed;
          which += " " + rec.id;
        }
        if (rec.status == CheckStatus::inconclusive) ++inconclusive;
      }
      c.add(d.label + ": no explicit-constant failure", failed == 0 && r.errors.empty(),
            std::to_string(r.records.size()) + " records, " + std::to_string(failed) + " failed" + which + ", " +
                std::to_string(inconclusive) + " inconclusive");
    });
  }
}

void families_suite(Collector& c, const RunConfig& cfg) {
  c.guarded("thin rectangle", [&] {
    ReportOptions o = report_options(cfg);
    o.checks = {"ab"};
    const double a = 0.2;
    const auto r = build_report(make_thin_rectangle(a), o);
    const double ratio = 3.831705970207512 * 3.831705970207512 / (kJ01 * kJ01) - r.records.front().deficit;
    const double exact = (4 * a * a + 1) / (a * a + 1);
    c.add("thin rectangle lambda2/lambda1 closed form", rel(ratio, exact) < 0.01, "rel err " + num(rel(ratio, exact)));
  });
  c.guarded("torsion", [&] {
    const auto r = nearly_spherical_torsion_check(eps_grid(0.06, 0.02, 5), default_profile(), sweep_options(cfg));
    int bad = 0;
    for (const auto& p : r.points) {
      if (!p.failures.empty() || p.status.at("torsion_fine") == "failed") ++bad;
    }
    c.add("nearly-spherical torsion deficit dominates the boundary bound", bad == 0,
          std::to_string(bad) + " of " + std::to_string(r.points.size()) + " points failed");
  });
}

}  // namespace

std::vector<VerifyResult> run_verify(const RunConfig& config, const std::vector<std::string>& suites) {
  validate(config);
  for (const auto& s : suites) {
    if (std::find(kVerifySuites.begin(), kVerifySuites.end(), s) == kVerifySuites.end()) {
      throw ArgumentError("unknown suite " + s);
    }
  }
  auto selected = [&](const char* s) { return suites.empty() || std::find(suites.begin(), suites.end(), s) != suites.end(); };
  std::vector<VerifyResult> out;
  if (selected("ball")) {
    Collector c("ball", out);
    ball_suite(c);
  }
  if (selected("fem")) {
    Collector c("fem", out);
    fem_suite(c, config);
  }
  if (selected("geometry")) {
    Collector c("geometry", out);
    geometry_suite(c, config);
  }
  if (selected("rearrangement")) {
    Collector c("rearrangement", out);
    rearrangement_suite(c, config);
  }
  if (selected("inequalities")) {
    Collector c("inequalities", out);
    inequalities_suite(c, config);
  }
  if (selected("families")) {
    Collector c("families", out);
    families_suite(c, config);
  }
  return out;
}

}  // namespace speclab
