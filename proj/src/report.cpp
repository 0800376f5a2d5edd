#include "speclab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "speclab/eigensolver.hpp"
#include "speclab/mesh.hpp"

namespace speclab {

using nlohmann::json;

namespace {

struct LevelValues {
  std::vector<double> values;
  std::vector<double> h;
};

std::optional<Estimate> estimate(const LevelValues& lv) {
  if (lv.values.empty()) return std::nullopt;
  Estimate e;
  e.fine = lv.values.back();
  if (lv.values.size() == 1) {
    // No second level: an a priori O(h^2) error scale.
    e.coarse = e.fine;
    e.value = e.fine;
    e.error = std::abs(e.fine) * lv.h.back() * lv.h.back();
    return e;
  }
  e.coarse = lv.values[lv.values.size() - 2];
  e.value = richardson(e.coarse, e.fine);
  e.error = std::max(richardson_error(e.coarse, e.fine), 1e-12 * std::abs(e.value));
  return e;
}

template <class F>
void attempt(SpectralReport& r, const std::string& what, F&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    r.errors.push_back(what + ": " + e.what());
  }
}

json estimate_json(const std::optional<Estimate>& e) {
  if (!e) return nullptr;
  return {{"coarse", e->coarse}, {"fine", e->fine}, {"value", e->value}, {"error", e->error}};
}

std::optional<Estimate> estimate_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return Estimate{j.at("coarse").get<double>(), j.at("fine").get<double>(), j.at("value").get<double>(),
                  j.at("error").get<double>()};
}

json grid_json(const std::vector<ParamEstimate>& list, const char* key) {
  json arr = json::array();
  for (const auto& pe : list) arr.push_back({{key, pe.param}, {"estimate", estimate_json(pe.estimate)}});
  return arr;
}

std::vector<ParamEstimate> grid_from(const json& arr, const char* key) {
  std::vector<ParamEstimate> out;
  for (const auto& item : arr) out.push_back({item.at(key).get<double>(), estimate_from(item.at("estimate"))});
  return out;
}

json point_json(Point p) { return json::array({p.x, p.y}); }
Point point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

CheckMode mode_from(const std::string& s) {
  if (s == "explicit") return CheckMode::explicit_constant;
  if (s == "property") return CheckMode::property;
  throw ArgumentError("unknown check mode " + s);
}

CheckStatus status_from(const std::string& s) {
  for (auto st : {CheckStatus::satisfied, CheckStatus::inconclusive, CheckStatus::failed, CheckStatus::skipped}) {
    if (to_string(st) == s) return st;
  }
  throw ArgumentError("unknown check status " + s);
}

struct Needs {
  bool dirichlet = false, neumann = false, steklov = false, torsion = false, robin = false, semilinear = false;
  bool fraenkel2 = false;
};

Needs needs_for(const std::vector<std::string>& groups) {
  auto has = [&](const char* g) {
    return groups.empty() || std::find(groups.begin(), groups.end(), g) != groups.end();
  };
  Needs n;
  n.dirichlet = has("fk") || has("hn2d") || has("hks") || has("ab") || has("mu2la1") || has("kj");
  n.neumann = has("sw") || has("mu2la1") || has("szego");
  n.steklov = has("steklov");
  n.torsion = has("fk") || has("sv") || has("kj");
  n.robin = has("bd");
  n.semilinear = has("fk") || has("kj");
  n.fraenkel2 = has("hks");
  return n;
}

}  // namespace

void validate(const ReportOptions& opts) {
  if (!(opts.h > 0.0)) throw ArgumentError("mesh size h must be positive");
  if (opts.levels < 1 || opts.levels > 3) throw ArgumentError("refinement levels must be 1, 2 or 3");
  for (double q : opts.q_grid) {
    if (!(q >= 1.0) || q > kMaxSemilinearExponent) throw ArgumentError("q grid entries must lie in [1, 20]");
  }
  for (double a : opts.alpha_grid) {
    if (!(a > 0.0)) throw ArgumentError("alpha grid entries must be positive");
  }
  if (!(opts.iso_beta > 0.0)) throw ArgumentError("iso_beta must be positive");
  if (opts.k < 2 || opts.k > 32) throw ArgumentError("eigenvalue count k must lie in [2, 32]");
}

SpectralReport compute_spectral_data(const Domain& d, const ReportOptions& opts) {
  validate(opts);
  validate_domain(d);
  SpectralReport r;
  r.label = d.label;
  r.original_area = measure(d);
  r.scale = 1.0 / std::sqrt(r.original_area);
  r.h = opts.h;
  r.levels = opts.levels;
  r.iso_beta = opts.iso_beta;
  const Domain nd = normalized(d, 1.0);

  auto& g = r.geometry;
  g.area = measure(nd);
  g.perimeter = perimeter(nd);
  g.diameter = diameter(nd);
  g.convex = is_convex(nd);
  g.holes = static_cast<int>(nd.holes.size());
  g.components = 1 + static_cast<int>(nd.components.size());
  g.boundary_barycenter = boundary_barycenter(nd);
  OptimizerOptions oo;
  oo.seed = opts.seed;
  attempt(r, "inradius", [&] { g.inradius = inradius(nd).radius; });
  attempt(r, "fraenkel", [&] {
    const auto a = fraenkel_asymmetry(nd, std::nullopt, oo);
    g.fraenkel = a.value;
    if (!a.witness.empty()) g.fraenkel_center = a.witness.front().center;
  });
  const Needs need = needs_for(opts.checks);
  if (need.fraenkel2) attempt(r, "fraenkel2", [&] { g.fraenkel2 = fraenkel_2_asymmetry(nd, oo).value; });
  attempt(r, "dN", [&] { g.dN = asymmetry_dN(nd).value; });
  if (g.convex) attempt(r, "dM", [&] { g.dM = asymmetry_dM(nd).value; });
  attempt(r, "alpha", [&] { g.alpha = asymmetry_alpha(nd).value; });
  attempt(r, "p2", [&] {
    g.p2_recentered = weighted_perimeter_p2(translated(nd, -1.0 * g.boundary_barycenter));
    const Ball b{g.boundary_barycenter, std::sqrt(g.area / std::numbers::pi)};
    g.boundary_ball_gap = std::max(0.0, 2.0 * (g.area - disc_intersection_area(nd, b)) / g.area);
  });

  std::vector<Mesh> meshes;
  try {
    meshes.push_back(triangulate(nd, opts.h));
    for (int l = 1; l < opts.levels; ++l) meshes.push_back(refine_uniform(meshes.back()));
  } catch (const std::exception& e) {
    r.errors.push_back(std::string("mesh: ") + e.what());
    return r;
  }
  const std::size_t first = meshes.size() >= 2 ? meshes.size() - 2 : 0;
  r.vertices_fine = static_cast<int>(meshes.back().vertices.size());

  LevelValues l1, l2, m2, m3, s2, s3, tor;
  std::vector<LevelValues> robin(opts.alpha_grid.size()), semi(opts.q_grid.size());
  for (std::size_t l = first; l < meshes.size(); ++l) {
    const Mesh& mesh = meshes[l];
    const DiscreteOperators ops = assemble(mesh);
    auto push = [&](LevelValues& lv, double v) {
      lv.values.push_back(v);
      lv.h.push_back(ops.h);
    };
    if (need.dirichlet) attempt(r, "dirichlet", [&] {
      const auto e = dirichlet_eigs(ops, opts.k);
      push(l1, e.values[0]);
      push(l2, e.values[1]);
      if (l + 1 == meshes.size()) r.fine_spectra["dirichlet"].assign(e.values.begin(), e.values.end());
    });
    if (need.neumann) attempt(r, "neumann", [&] {
      const auto e = neumann_eigs(ops, opts.k);
      push(m2, e.values[0]);
      push(m3, e.values[1]);
      if (l + 1 == meshes.size()) r.fine_spectra["neumann"].assign(e.values.begin(), e.values.end());
    });
    if (need.steklov) attempt(r, "steklov", [&] {
      const auto e = steklov_eigs(ops, opts.k);
      push(s2, e.values[0]);
      push(s3, e.values[1]);
      if (l + 1 == meshes.size()) r.fine_spectra["steklov"].assign(e.values.begin(), e.values.end());
    });
    if (need.torsion) attempt(r, "torsion", [&] { push(tor, torsion(ops).value); });
    for (std::size_t i = 0; need.robin && i < opts.alpha_grid.size(); ++i) {
      attempt(r, "robin", [&] { push(robin[i], robin_eig1(ops, opts.alpha_grid[i]).values[0]); });
    }
    for (std::size_t i = 0; need.semilinear && i < opts.q_grid.size(); ++i) {
      const double q = opts.q_grid[i];
      if (q == 1.0 || q == 2.0) continue;
      attempt(r, "semilinear", [&] { push(semi[i], semilinear_eig(mesh, ops, q).value); });
    }
  }
  r.lambda1 = estimate(l1);
  r.lambda2 = estimate(l2);
  r.mu2 = estimate(m2);
  r.mu3 = estimate(m3);
  r.sigma2 = estimate(s2);
  r.sigma3 = estimate(s3);
  r.torsion = estimate(tor);
  for (std::size_t i = 0; need.robin && i < opts.alpha_grid.size(); ++i) r.robin.push_back({opts.alpha_grid[i], estimate(robin[i])});
  for (std::size_t i = 0; need.semilinear && i < opts.q_grid.size(); ++i) {
    const double q = opts.q_grid[i];
    std::optional<Estimate> e;
    if (q == 1.0 && r.torsion) {
      const Estimate& t = *r.torsion;
      e = Estimate{1.0 / t.coarse, 1.0 / t.fine, 1.0 / t.value, t.error / (t.value * t.value)};
    } else if (q == 2.0) {
      e = r.lambda1;
    } else {
      e = estimate(semi[i]);
    }
    r.semilinear.push_back({q, e});
  }
  return r;
}

SpectralReport build_report(const Domain& d, const ReportOptions& opts) {
  SpectralReport r = compute_spectral_data(d, opts);
  r.records = run_checks(r, opts.checks);
  return r;
}

json to_json(const DeficitRecord& rec) {
  json j;
  j["id"] = rec.id;
  j["mode"] = to_string(rec.mode);
  j["status"] = to_string(rec.status);
  j["satisfied"] = rec.satisfied;
  j["deficit"] = rec.deficit;
  j["tolerance"] = rec.tolerance;
  j["quantitative_bound"] = rec.bound ? json(*rec.bound) : json(nullptr);
  j["slack"] = rec.slack;
  j["asymmetry"] = {{"kind", rec.asymmetry_kind}, {"value", rec.asymmetry_value}};
  j["constants"] = rec.constants;
  j["trail"] = rec.trail;
  j["normalization"] = rec.normalization;
  j["note"] = rec.note;
  return j;
}

json to_json(const SpectralReport& r) {
  json j;
  j["schema"] = kReportSchema;
  j["schema_version"] = kReportSchemaVersion;
  j["label"] = r.label;
  j["original_area"] = r.original_area;
  j["scale"] = r.scale;
  j["mesh"] = {{"h", r.h}, {"levels", r.levels}, {"vertices_fine", r.vertices_fine}};
  j["iso_beta"] = r.iso_beta;
  j["spectra"] = {{"lambda1", estimate_json(r.lambda1)}, {"lambda2", estimate_json(r.lambda2)},
                  {"mu2", estimate_json(r.mu2)},         {"mu3", estimate_json(r.mu3)},
                  {"sigma2", estimate_json(r.sigma2)},   {"sigma3", estimate_json(r.sigma3)},
                  {"torsion", estimate_json(r.torsion)}};
  j["fine_spectra"] = r.fine_spectra;
  j["robin"] = grid_json(r.robin, "alpha");
  j["semilinear"] = grid_json(r.semilinear, "q");
  const auto& g = r.geometry;
  j["geometry"] = {{"area", g.area},
                   {"perimeter", g.perimeter},
                   {"diameter", g.diameter},
                   {"inradius", g.inradius},
                   {"boundary_barycenter", point_json(g.boundary_barycenter)},
                   {"convex", g.convex},
                   {"holes", g.holes},
                   {"components", g.components},
                   {"fraenkel", g.fraenkel},
                   {"fraenkel_center", point_json(g.fraenkel_center)},
                   {"fraenkel2", g.fraenkel2},
                   {"dN", g.dN},
                   {"dM", g.dM ? json(*g.dM) : json(nullptr)},
                   {"alpha", g.alpha},
                   {"p2_recentered", g.p2_recentered},
                   {"boundary_ball_gap", g.boundary_ball_gap}};
  j["errors"] = r.errors;
  json recs = json::array();
  for (const auto& rec : r.records) recs.push_back(to_json(rec));
  j["records"] = recs;
  return j;
}

SpectralReport report_from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema") != kReportSchema) throw ArgumentError("not a speclab report");
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw ArgumentError("unsupported report schema version");
  }
  SpectralReport r;
  r.label = j.at("label").get<std::string>();
  r.original_area = j.at("original_area").get<double>();
  r.scale = j.at("scale").get<double>();
  r.h = j.at("mesh").at("h").get<double>();
  r.levels = j.at("mesh").at("levels").get<int>();
  r.vertices_fine = j.at("mesh").at("vertices_fine").get<int>();
  r.iso_beta = j.at("iso_beta").get<double>();
  const auto& s = j.at("spectra");
  r.lambda1 = estimate_from(s.at("lambda1"));
  r.lambda2 = estimate_from(s.at("lambda2"));
  r.mu2 = estimate_from(s.at("mu2"));
  r.mu3 = estimate_from(s.at("mu3"));
  r.sigma2 = estimate_from(s.at("sigma2"));
  r.sigma3 = estimate_from(s.at("sigma3"));
  r.torsion = estimate_from(s.at("torsion"));
  r.fine_spectra = j.at("fine_spectra").get<std::map<std::string, std::vector<double>>>();
  r.robin = grid_from(j.at("robin"), "alpha");
  r.semilinear = grid_from(j.at("semilinear"), "q");
  const auto& gj = j.at("geometry");
  auto& g = r.geometry;
  g.area = gj.at("area").get<double>();
  g.perimeter = gj.at("perimeter").get<double>();
  g.diameter = gj.at("diameter").get<double>();
  g.inradius = gj.at("inradius").get<double>();
  g.boundary_barycenter = point_from(gj.at("boundary_barycenter"));
  g.convex = gj.at("convex").get<bool>();
  g.holes = gj.at("holes").get<int>();
  g.components = gj.at("components").get<int>();
  g.fraenkel = gj.at("fraenkel").get<double>();
  g.fraenkel_center = point_from(gj.at("fraenkel_center"));
  g.fraenkel2 = gj.at("fraenkel2").get<double>();
  g.dN = gj.at("dN").get<double>();
  if (!gj.at("dM").is_null()) g.dM = gj.at("dM").get<double>();
  g.alpha = gj.at("alpha").get<double>();
  g.p2_recentered = gj.at("p2_recentered").get<double>();
  g.boundary_ball_gap = gj.at("boundary_ball_gap").get<double>();
  r.errors = j.at("errors").get<std::vector<std::string>>();
  for (const auto& rj : j.at("records")) {
    DeficitRecord rec;
    rec.id = rj.at("id").get<std::string>();
    rec.mode = mode_from(rj.at("mode").get<std::string>());
    rec.status = status_from(rj.at("status").get<std::string>());
    rec.satisfied = rj.at("satisfied").get<bool>();
    rec.deficit = rj.at("deficit").get<double>();
    rec.tolerance = rj.at("tolerance").get<double>();
    if (!rj.at("quantitative_bound").is_null()) rec.bound = rj.at("quantitative_bound").get<double>();
    rec.slack = rj.at("slack").get<double>();
    rec.asymmetry_kind = rj.at("asymmetry").at("kind").get<std::string>();
    rec.asymmetry_value = rj.at("asymmetry").at("value").get<double>();
    rec.constants = rj.at("constants").get<std::map<std::string, double>>();
    rec.trail = rj.at("trail").get<std::map<std::string, double>>();
    rec.normalization = rj.at("normalization").get<std::string>();
    rec.note = rj.at("note").get<std::string>();
    r.records.push_back(rec);
  }
  return r;
}

void save_report(const SpectralReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << to_json(r).dump(2) << '\n';
}

SpectralReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("malformed report: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace speclab
