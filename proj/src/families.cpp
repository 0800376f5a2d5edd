#include "speclab/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include "speclab/eigensolver.hpp"
#include "speclab/mesh.hpp"
#include "speclab/shapes.hpp"

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kTorsionFine = "torsion_fine";

void check_eps(double eps) {
  if (!(eps >= 0.0) || eps > kMaxFamilyEps) throw ArgumentError("eps must lie in [0, 0.3]");
}

void check_vertices(int n) {
  if (n < kMinSmoothVertices) throw ArgumentError("smooth families need at least 128 boundary vertices");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json fit_json(const std::optional<LineFit>& f) {
  if (!f) return nullptr;
  return {{"slope", f->slope},
          {"intercept", f->intercept},
          {"slope_band", f->slope_band},
          {"residual", f->residual},
          {"max_residual", f->max_residual},
          {"window", {f->x_min, f->x_max}},
          {"points", f->points}};
}

struct TorsionPoint {
  double deficit = 0.0;
  double error = 0.0;
  double bound = 0.0;
};

// Member translated to barycenter 0 and scaled to measure pi.
TorsionPoint torsion_point(const Domain& member, const SweepOptions& opts, double h_unit) {
  const Domain nd = normalized(member, kPi);
  TorsionPoint p;
  p.bound = radial_deviation_norm2(nd) / 128.0;
  std::vector<Mesh> meshes{triangulate(nd, h_unit * std::sqrt(kPi))};
  for (int l = 1; l < opts.report.levels; ++l) meshes.push_back(refine_uniform(meshes.back()));
  std::vector<double> values;
  for (std::size_t l = meshes.size() >= 2 ? meshes.size() - 2 : 0; l < meshes.size(); ++l) {
    values.push_back(torsion(assemble(meshes[l])).value);
  }
  double t = values.back();
  if (values.size() == 2) {
    t = richardson(values[0], values[1]);
    p.error = std::max(richardson_error(values[0], values[1]), 1e-12 * t);
  } else {
    p.error = t * h_unit * h_unit;
  }
  p.deficit = kPi / 8.0 - t;
  return p;
}

void fit_series(SweepResult& res, const std::string& id, bool noise_floor) {
  std::vector<double> eps, asym, val;
  for (const auto& p : res.points) {
    auto it = p.deficits.find(id);
    if (it == p.deficits.end()) continue;
    const double err = p.errors.count(id) ? p.errors.at(id) : 0.0;
    if (!(it->second > 0.0)) continue;
    if (noise_floor && !(it->second > kNoiseFloorFactor * err)) continue;
    eps.push_back(p.eps);
    asym.push_back(p.asymmetry);
    val.push_back(it->second);
  }
  SeriesFit f;
  try {
    f.vs_eps = fit_loglog(eps, val);
  } catch (const std::exception& e) {
    f.note = std::string(e.what()) + "; use a smaller mesh size h";
  }
  try {
    f.vs_asymmetry = fit_loglog(asym, val);
  } catch (const std::exception& e) {
    if (f.note.empty()) f.note = std::string(e.what()) + "; use a smaller mesh size h";
  }
  res.fits[id] = f;
}

}  // namespace

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::ellipse: return "ellipse";
    case FamilyKind::nearly_spherical: return "nearly-spherical";
    case FamilyKind::two_ball: return "two-ball";
    case FamilyKind::thin_rectangle: return "thin-rectangle";
  }
  return "unknown";
}

FamilyKind family_from_string(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), '_', '-');
  for (auto k : {FamilyKind::ellipse, FamilyKind::nearly_spherical, FamilyKind::two_ball, FamilyKind::thin_rectangle}) {
    if (to_string(k) == t) return k;
  }
  throw ArgumentError("unknown family " + s);
}

std::vector<Harmonic> default_profile() { return {{3, 0.0, 2.0}, {5, 1.0, 0.0}}; }

double eval_profile(const std::vector<Harmonic>& psi, double t) {
  double v = 0.0;
  for (const auto& h : psi) v += h.cos_coeff * std::cos(h.order * t) + h.sin_coeff * std::sin(h.order * t);
  return v;
}

Domain make_ellipse(double eps, int n_vertices) {
  check_eps(eps);
  check_vertices(n_vertices);
  Domain d;
  d.label = "ellipse_" + fmt(eps);
  const double a = 1.0 + eps;
  for (int i = 0; i < n_vertices; ++i) {
    const double t = 2.0 * kPi * i / n_vertices;
    d.outer.push_back({a * std::cos(t), std::sin(t) / a});
  }
  return d;
}

void validate_sharp_profile(const std::vector<Harmonic>& psi) {
  constexpr int m = 4096;
  double scale = 0.0;
  double moments[5] = {};
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * kPi * i / m;
    const double v = eval_profile(psi, t);
    scale += std::abs(v);
    moments[0] += v;
    moments[1] += v * std::cos(t);
    moments[2] += v * std::sin(t);
    moments[3] += v * std::cos(2 * t);
    moments[4] += v * std::sin(2 * t);
  }
  const double tol = 1e-10 * std::max(1.0, scale / m);
  static const char* names[] = {"order-0 moment (mean, fixes the area to second order)",
                                "order-1 moment in cos t (barycenter)", "order-1 moment in sin t (barycenter)",
                                "order-2 moment in cos 2t", "order-2 moment in sin 2t"};
  for (int k = 0; k < 5; ++k) {
    if (std::abs(moments[k] * 2.0 * kPi / m) > tol) {
      throw ArgumentError(std::string("profile is not admissible for the sharp family: nonzero ") + names[k]);
    }
  }
}

Domain make_nearly_spherical(double eps, const std::vector<Harmonic>& psi, int n_vertices, bool sharp) {
  check_eps(eps);
  check_vertices(n_vertices);
  if (sharp) validate_sharp_profile(psi);
  Domain d;
  d.label = "nearly_spherical_" + fmt(eps);
  for (int i = 0; i < n_vertices; ++i) {
    const double t = 2.0 * kPi * i / n_vertices;
    const double r = 1.0 + eps * eval_profile(psi, t);
    if (!(r > 0.0)) throw ArgumentError("eps * psi reaches -1: boundary radius not positive");
    d.outer.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return d;
}

Domain make_two_ball(double eps, int n_vertices) {
  if (!(eps > 0.0) || eps > kMaxFamilyEps) throw ArgumentError("eps must lie in (0, 0.3]");
  check_vertices(n_vertices);
  const double c = 1.0 - eps;
  const double theta0 = std::acos(-c);
  // Arc vertex count grows like 1/eps so the pinch stays resolved.
  const int per_arc = std::max(n_vertices / 2, static_cast<int>(std::ceil(16.0 / eps)));
  Domain d;
  d.label = "two_ball_" + fmt(eps);
  for (int i = 0; i <= per_arc; ++i) {
    const double t = -theta0 + 2.0 * theta0 * i / per_arc;
    d.outer.push_back({c + std::cos(t), std::sin(t)});
  }
  d.outer.back().x = 0.0;
  d.outer.front().x = 0.0;
  for (int i = 1; i < per_arc; ++i) {
    const double t = kPi - theta0 + 2.0 * theta0 * i / per_arc;
    d.outer.push_back({-c + std::cos(t), std::sin(t)});
  }
  return d;
}

double two_ball_area(double eps) {
  const double c = 1.0 - eps;
  const double cap = std::acos(c) - c * std::sqrt(1.0 - c * c);
  return 2.0 * (kPi - cap);
}

Domain make_thin_rectangle(double eps) {
  if (!(eps > 0.0) || eps > kMaxFamilyEps) throw ArgumentError("eps must lie in (0, 0.3]");
  return rectangle(1.0, eps, "thin_rectangle_" + fmt(eps));
}

void validate(const FamilySpec& spec) {
  if (spec.eps.size() < static_cast<std::size_t>(kMinFitPoints)) {
    throw ArgumentError("a sweep needs at least 5 eps values");
  }
  for (std::size_t i = 0; i < spec.eps.size(); ++i) {
    const double e = spec.eps[i];
    if (!(e > 0.0) || e > kMaxFamilyEps) throw ArgumentError("eps values must lie in (0, 0.3]");
    if (i > 0 && !(e < spec.eps[i - 1])) throw ArgumentError("eps values must be strictly descending");
  }
  if (spec.n_vertices < kMinSmoothVertices) throw ArgumentError("smooth families need at least 128 boundary vertices");
  if (spec.kind == FamilyKind::nearly_spherical && spec.sharp) validate_sharp_profile(spec.psi);
}

Domain make_member(const FamilySpec& spec, double eps) {
  switch (spec.kind) {
    case FamilyKind::ellipse: return make_ellipse(eps, spec.n_vertices);
    case FamilyKind::nearly_spherical: return make_nearly_spherical(eps, spec.psi, spec.n_vertices, spec.sharp);
    case FamilyKind::two_ball: return make_two_ball(eps, spec.n_vertices);
    case FamilyKind::thin_rectangle: return make_thin_rectangle(eps);
  }
  throw ArgumentError("unknown family");
}

std::vector<double> eps_grid(double eps_max, double eps_min, int steps) {
  if (!(eps_min > 0.0) || !(eps_max > eps_min) || steps < 2) {
    throw ArgumentError("eps grid needs 0 < eps_min < eps_max and at least 2 steps");
  }
  std::vector<double> out;
  const double ratio = std::log(eps_min / eps_max) / (steps - 1);
  for (int i = 0; i < steps; ++i) out.push_back(eps_max * std::exp(ratio * i));
  out.back() = eps_min;
  return out;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, int min_points) {
  if (x.size() != y.size()) throw ArgumentError("fit_loglog: x and y differ in length");
  std::vector<double> lx, ly;
  LineFit f;
  f.x_min = std::numeric_limits<double>::infinity();
  f.x_max = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    f.x_min = std::min(f.x_min, x[i]);
    f.x_max = std::max(f.x_max, x[i]);
  }
  const int n = static_cast<int>(lx.size());
  if (n < std::max(min_points, 2)) {
    throw ArgumentError("only " + std::to_string(n) + " usable points for a log-log fit (need " +
                        std::to_string(std::max(min_points, 2)) + ")");
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("fit_loglog: x values do not vary");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - f.intercept - f.slope * lx[i];
    ssr += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  f.residual = std::sqrt(ssr / n);
  f.slope_band = n > 2 ? 1.96 * std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  f.points = n;
  return f;
}

double radial_deviation_norm2(const Domain& d, int rays) {
  if (rays < 16) throw ArgumentError("radial_deviation_norm2 needs at least 16 rays");
  const auto loops = all_loops(d);
  double sum = 0.0;
  for (int k = 0; k < rays; ++k) {
    const double t = 2.0 * kPi * k / rays;
    const double ux = std::cos(t), uy = std::sin(t);
    double r = -1.0;
    for (const Loop* loop : loops) {
      const auto& pts = *loop;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point a = pts[i];
        const Point b = pts[(i + 1) % pts.size()];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double den = ux * ey - uy * ex;
        if (std::abs(den) < 1e-300) continue;
        const double s = (a.x * ey - a.y * ex) / den;
        const double u = (a.x * uy - a.y * ux) / den;
        if (s > 0.0 && u >= -1e-12 && u <= 1.0 + 1e-12) r = std::max(r, s);
      }
    }
    if (r < 0.0) throw ArgumentError("domain is not star-shaped about the origin");
    sum += (r - 1.0) * (r - 1.0);
  }
  return sum * 2.0 * kPi / rays;
}

SweepResult nearly_spherical_torsion_check(const std::vector<double>& eps, const std::vector<Harmonic>& psi,
                                           const SweepOptions& opts, int n_vertices) {
  FamilySpec spec;
  spec.kind = FamilyKind::nearly_spherical;
  spec.eps = eps;
  spec.psi = psi;
  spec.sharp = false;
  spec.n_vertices = n_vertices;
  return run_sweep(spec, {"torsion-fine"}, opts);
}

SweepResult run_sweep(const FamilySpec& spec, const std::vector<std::string>& checks, const SweepOptions& opts) {
  validate(spec);
  validate(opts.report);
  if (!opts.h_schedule.empty() && opts.h_schedule.size() != spec.eps.size()) {
    throw ArgumentError("h schedule must have one entry per eps value");
  }
  for (double h : opts.h_schedule) {
    if (!(h > 0.0) || h > 0.5) throw ArgumentError("h schedule entries must lie in (0, 0.5]");
  }
  std::vector<std::string> groups;
  bool torsion_fine = false;
  for (const auto& c : checks) {
    if (c == "torsion-fine" || c == "torsion_fine") {
      torsion_fine = true;
    } else if (std::find(kCheckGroups.begin(), kCheckGroups.end(), c) != kCheckGroups.end()) {
      groups.push_back(c);
    } else {
      throw ArgumentError("unknown check " + c);
    }
  }
  if (groups.empty() && !torsion_fine) throw ArgumentError("no checks selected");
  if (torsion_fine && spec.kind != FamilyKind::nearly_spherical) {
    throw ArgumentError("torsion-fine applies to the nearly-spherical family only");
  }

  SweepResult res;
  res.kind = spec.kind;
  res.checks = checks;
  res.asymmetry_kind = spec.kind == FamilyKind::two_ball ? "fraenkel2" : "fraenkel";
  res.points.resize(spec.eps.size());
  const bool need_fraenkel2 = spec.kind == FamilyKind::two_ball;
  const int n = static_cast<int>(spec.eps.size());

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    SweepPoint& p = res.points[i];
    p.eps = spec.eps[i];
    const double h = opts.h_schedule.empty() ? opts.report.h : opts.h_schedule[i];
    try {
      const Domain member = make_member(spec, p.eps);
      p.area = measure(member);
      if (!groups.empty()) {
        ReportOptions ro = opts.report;
        ro.h = h;
        ro.checks = groups;
        const SpectralReport r = build_report(member, ro);
        for (const auto& e : r.errors) p.failures.push_back(e);
        p.asymmetry = r.geometry.fraenkel;
        if (need_fraenkel2) {
          OptimizerOptions oo;
          oo.seed = opts.report.seed;
          p.asymmetry = std::find(groups.begin(), groups.end(), "hks") != groups.end()
                            ? r.geometry.fraenkel2
                            : fraenkel_2_asymmetry(normalized(member), oo).value;
        }
        for (const auto& rec : r.records) {
          p.status[rec.id] = to_string(rec.status);
          if (rec.status == CheckStatus::skipped) continue;
          p.deficits[rec.id] = rec.deficit;
          p.errors[rec.id] = rec.tolerance / kToleranceFactor;
          if (rec.bound) p.bounds[rec.id] = *rec.bound;
          for (const auto& [k, v] : rec.trail) p.extras[rec.id + "." + k] = v;
        }
      }
      if (torsion_fine) {
        const TorsionPoint t = torsion_point(member, opts, h);
        if (groups.empty()) {
          OptimizerOptions oo;
          oo.seed = opts.report.seed;
          p.asymmetry = fraenkel_asymmetry(normalized(member), std::nullopt, oo).value;
        }
        DeficitRecord rec;
        rec.id = kTorsionFine;
        rec.deficit = t.deficit;
        rec.bound = t.bound;
        rec.tolerance = kToleranceFactor * t.error;
        classify(rec);
        p.deficits[kTorsionFine] = t.deficit;
        p.errors[kTorsionFine] = t.error;
        p.bounds[kTorsionFine] = t.bound;
        p.status[kTorsionFine] = to_string(rec.status);
      }
    } catch (const std::exception& e) {
      p.failures.push_back(e.what());
    }
  }

  std::set<std::string> ids;
  for (const auto& p : res.points) {
    for (const auto& [id, v] : p.deficits) ids.insert(id);
  }
  for (const auto& id : ids) fit_series(res, id, true);
  if (torsion_fine) {
    // The predicted side is pure geometry, so it carries no solver noise.
    SweepResult tmp;
    for (const auto& p : res.points) {
      SweepPoint q;
      q.eps = p.eps;
      q.asymmetry = p.asymmetry;
      if (p.bounds.count(kTorsionFine)) q.deficits["torsion_fine_bound"] = p.bounds.at(kTorsionFine);
      tmp.points.push_back(q);
    }
    fit_series(tmp, "torsion_fine_bound", false);
    res.fits["torsion_fine_bound"] = tmp.fits["torsion_fine_bound"];
  }
  std::vector<double> e, a;
  for (const auto& p : res.points) {
    e.push_back(p.eps);
    a.push_back(p.asymmetry);
  }
  try {
    res.asymmetry_vs_eps = fit_loglog(e, a);
  } catch (const std::exception& ex) {
    res.asymmetry_note = ex.what();
  }
  return res;
}

void write_sweep_csv(const SweepResult& r, std::ostream& out) {
  std::set<std::string> ids;
  for (const auto& p : r.points) {
    for (const auto& [id, v] : p.deficits) ids.insert(id);
  }
  out << "eps,area,asym_kind,asym_value";
  for (const auto& id : ids) out << ",deficit_" << id;
  for (const auto& id : ids) out << ",error_" << id;
  for (const auto& id : ids) out << ",bound_" << id;
  out << ",failures\n";
  auto cell = [&](const std::map<std::string, double>& m, const std::string& id) {
    auto it = m.find(id);
    out << ',' << (it == m.end() ? std::string() : fmt(it->second));
  };
  for (const auto& p : r.points) {
    out << fmt(p.eps) << ',' << fmt(p.area) << ',' << r.asymmetry_kind << ',' << fmt(p.asymmetry);
    for (const auto& id : ids) cell(p.deficits, id);
    for (const auto& id : ids) cell(p.errors, id);
    for (const auto& id : ids) cell(p.bounds, id);
    out << ',' << p.failures.size() << '\n';
  }
}

nlohmann::json sweep_fits_json(const SweepResult& r) {
  nlohmann::json fits = nlohmann::json::object();
  for (const auto& [id, f] : r.fits) {
    fits[id] = {{"vs_eps", fit_json(f.vs_eps)}, {"vs_asymmetry", fit_json(f.vs_asymmetry)}, {"note", f.note}};
  }
  nlohmann::json eps = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& p : r.points) {
    eps.push_back(p.eps);
    for (const auto& f : p.failures) failures.push_back({{"eps", p.eps}, {"message", f}});
  }
  return {{"family", to_string(r.kind)},
          {"asymmetry_kind", r.asymmetry_kind},
          {"checks", r.checks},
          {"eps", eps},
          {"noise_floor_factor", kNoiseFloorFactor},
          {"fits", fits},
          {"asymmetry_vs_eps", fit_json(r.asymmetry_vs_eps)},
          {"asymmetry_note", r.asymmetry_note},
          {"failures", failures}};
}

}  // namespace speclab
