#include "speclab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGeometryTolerance = 1e-12;
// Deficits are O(1) on the normalized copy; identities cancel to this level.
constexpr double kRoundoff = 1e-13;

const Estimate& need(const std::optional<Estimate>& e, const char* name) {
  if (!e) throw SolverError(std::string("missing input ") + name);
  return *e;
}

const Estimate& need_param(const std::vector<ParamEstimate>& list, double p, const char* name) {
  for (const auto& pe : list) {
    if (std::abs(pe.param - p) <= 1e-12 * std::max(1.0, std::abs(p))) {
      if (!pe.estimate) break;
      return *pe.estimate;
    }
  }
  throw SolverError(std::string("missing input ") + name + " at " + std::to_string(p));
}

Estimate semilinear_value(const SpectralReport& r, double q) {
  if (q == 1.0) {
    const Estimate& t = need(r.torsion, "torsion");
    return {1.0 / t.coarse, 1.0 / t.fine, 1.0 / t.value, t.error / (t.value * t.value)};
  }
  if (q == 2.0) return need(r.lambda1, "lambda1");
  return need_param(r.semilinear, q, "semilinear eigenvalue");
}

DeficitRecord start(const std::string& id, CheckMode mode, const std::string& normalization) {
  DeficitRecord rec;
  rec.id = id;
  rec.mode = mode;
  rec.normalization = normalization;
  return rec;
}

DeficitRecord skipped(DeficitRecord rec, const std::string& reason) {
  rec.status = CheckStatus::skipped;
  rec.satisfied = false;
  rec.note = reason;
  return rec;
}

void set_asymmetry(DeficitRecord& rec, const std::string& kind, double value) {
  rec.asymmetry_kind = kind;
  rec.asymmetry_value = value;
}

void trail_ratio(DeficitRecord& rec, const std::string& key, double denom) {
  if (denom > 0.0) rec.trail[key] = rec.deficit / denom;
}

bool simply_connected(const SpectralReport& r) { return r.geometry.holes == 0 && r.geometry.components == 1; }

ConstantsTable table(const SpectralReport& r, double q = 2.0) { return constants_table(2, q, r.iso_beta); }

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string to_string(CheckMode m) { return m == CheckMode::explicit_constant ? "explicit" : "property"; }

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::satisfied: return "satisfied";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::failed: return "failed";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

void classify(DeficitRecord& rec) {
  rec.slack = rec.deficit - rec.bound.value_or(0.0);
  rec.satisfied = rec.slack >= -rec.tolerance;
  if (rec.slack >= -kRoundoff) {
    rec.status = CheckStatus::satisfied;
  } else if (rec.satisfied) {
    rec.status = CheckStatus::inconclusive;
  } else {
    rec.status = CheckStatus::failed;
  }
}

DeficitRecord check_faber_krahn(const SpectralReport& r, double q) {
  auto rec = start("fk_q" + fmt_param(q), CheckMode::explicit_constant, "|D| = 1, barycenter 0");
  const Estimate lam = semilinear_value(r, q);
  const ConstantsTable c = table(r, q);
  const double area = r.geometry.area;
  const double factor = std::pow(area, 2.0 / q);
  rec.deficit = factor * lam.value - ball_semilinear_normalized(2, q);
  rec.tolerance = kToleranceFactor * factor * lam.error;
  const double a = r.geometry.fraenkel;
  set_asymmetry(rec, "fraenkel", a);
  rec.bound = c.tau_nq * a * a * a;
  rec.constants = {{"tau_nq", c.tau_nq}, {"tau", c.tau_saint_venant}, {"iso_beta", c.iso_beta}};
  trail_ratio(rec, "deficit_over_asym2", a * a);
  classify(rec);
  return rec;
}

DeficitRecord check_saint_venant(const SpectralReport& r) {
  auto rec = start("sv", CheckMode::explicit_constant, "|D| = 1, barycenter 0");
  const Estimate& t = need(r.torsion, "torsion");
  const ConstantsTable c = table(r, 1.0);
  const double area = r.geometry.area;
  rec.deficit = 1.0 / (8.0 * kPi) - t.value / (area * area);
  rec.tolerance = kToleranceFactor * t.error / (area * area);
  const double a = r.geometry.fraenkel;
  set_asymmetry(rec, "fraenkel", a);
  rec.bound = c.tau_saint_venant * a * a * a;
  rec.constants = {{"tau", c.tau_saint_venant}, {"iso_beta", c.iso_beta}};
  trail_ratio(rec, "deficit_over_asym2", a * a);
  classify(rec);
  return rec;
}

DeficitRecord check_hansen_nadirashvili_2d(const SpectralReport& r) {
  auto rec = start("hn2d", CheckMode::explicit_constant, "|D| = 1, barycenter 0");
  const ConstantsTable c = table(r);
  rec.constants = {{"hn2d_constant", c.hn2d_constant}};
  set_asymmetry(rec, "dN", r.geometry.dN);
  if (r.geometry.holes > 0) return skipped(rec, "domain has holes; the bound needs simple connectedness");
  if (r.geometry.components > 1) return skipped(rec, "domain is disconnected; the bound needs simple connectedness");
  const Estimate& lam = need(r.lambda1, "lambda1");
  const double j = dirichlet_zero(2);
  rec.deficit = r.geometry.area * lam.value - kPi * j * j;
  rec.tolerance = kToleranceFactor * r.geometry.area * lam.error;
  rec.bound = c.hn2d_constant * std::pow(r.geometry.dN, 3);
  classify(rec);
  return rec;
}

DeficitRecord check_szego_weinberger(const SpectralReport& r) {
  auto rec = start("sw", CheckMode::explicit_constant, "|D| = 1, barycenter 0");
  const Estimate& mu = need(r.mu2, "mu2");
  const ConstantsTable c = table(r);
  const double b = neumann_zero(2);
  rec.deficit = kPi * b * b - r.geometry.area * mu.value;
  rec.tolerance = kToleranceFactor * r.geometry.area * mu.error;
  const double a = r.geometry.fraenkel;
  set_asymmetry(rec, "fraenkel", a);
  rec.bound = c.rho * a * a;
  rec.constants = {{"rho", c.rho}, {"rho_lower", c.rho_lower}};
  trail_ratio(rec, "deficit_over_asym", a);
  trail_ratio(rec, "deficit_over_asym2", a * a);
  classify(rec);
  return rec;
}

std::vector<DeficitRecord> check_steklov_suite(const SpectralReport& r) {
  const std::string norm = "|D| = 1, boundary barycenter 0";
  const ConstantsTable c = table(r);
  const double area = r.geometry.area;
  const double gap = r.geometry.boundary_ball_gap;
  const double ball_sum = 2.0 / std::sqrt(kPi);
  std::vector<DeficitRecord> out;

  const Estimate& s2 = need(r.sigma2, "sigma2");
  {
    auto rec = start("brock_weinstock", CheckMode::explicit_constant, norm);
    rec.deficit = std::sqrt(kPi) - std::sqrt(area) * s2.value;
    rec.tolerance = kToleranceFactor * std::sqrt(area) * s2.error;
    set_asymmetry(rec, "boundary_ball_gap", gap);
    rec.bound = c.c_stek * gap * gap;
    rec.constants = {{"c_stek", c.c_stek}};
    classify(rec);
    out.push_back(rec);
  }
  {
    auto rec = start("sum_inverses", CheckMode::explicit_constant, norm);
    set_asymmetry(rec, "boundary_ball_gap", gap);
    rec.constants = {{"c_berry", c.c_berry}};
    if (r.geometry.components > 1) {
      out.push_back(skipped(rec, "disconnected domain: sigma_2 = 0 and the left side is infinite"));
    } else {
      const Estimate& s3 = need(r.sigma3, "sigma3");
      rec.deficit = (1.0 / s2.value + 1.0 / s3.value) / std::sqrt(area) - ball_sum;
      rec.tolerance = kToleranceFactor * (s2.error / (s2.value * s2.value) + s3.error / (s3.value * s3.value)) /
                      std::sqrt(area);
      rec.bound = c.c_berry * gap * gap;
      classify(rec);
      out.push_back(rec);
    }
  }
  {
    auto rec = start("p2_stability", CheckMode::explicit_constant, norm);
    rec.deficit = std::pow(area, -1.5) * r.geometry.p2_recentered - ball_sum;
    rec.tolerance = kGeometryTolerance;
    set_asymmetry(rec, "boundary_ball_gap", gap);
    rec.bound = c.c_berry * gap * gap;
    rec.constants = {{"c_berry", c.c_berry}};
    classify(rec);
    out.push_back(rec);
  }
  {
    auto rec = start("brock", CheckMode::property, norm);
    rec.deficit = std::sqrt(kPi) - std::sqrt(area) * s2.value;
    rec.tolerance = kToleranceFactor * std::sqrt(area) * s2.error;
    set_asymmetry(rec, "boundary_ball_gap", gap);
    trail_ratio(rec, "deficit_over_gap2", gap * gap);
    classify(rec);
    out.push_back(rec);
  }
  {
    auto rec = start("weinstock", CheckMode::property, norm);
    set_asymmetry(rec, "boundary_ball_gap", gap);
    if (!simply_connected(r)) {
      out.push_back(skipped(rec, "not simply connected"));
    } else {
      rec.deficit = 2.0 * kPi - r.geometry.perimeter * s2.value;
      rec.tolerance = kToleranceFactor * r.geometry.perimeter * s2.error;
      trail_ratio(rec, "deficit_over_gap2", gap * gap);
      classify(rec);
      out.push_back(rec);
    }
  }
  return out;
}

DeficitRecord check_hong_krahn_szego(const SpectralReport& r) {
  auto rec = start("hks", CheckMode::property, "|D| = 1, barycenter 0");
  const Estimate& lam2 = need(r.lambda2, "lambda2");
  const double j = dirichlet_zero(2);
  rec.deficit = r.geometry.area * lam2.value - 2.0 * kPi * j * j;
  rec.tolerance = kToleranceFactor * r.geometry.area * lam2.error;
  const double a2 = r.geometry.fraenkel2;
  set_asymmetry(rec, "fraenkel2", a2);
  trail_ratio(rec, "deficit_over_asym2_pow3", a2 * a2 * a2);
  trail_ratio(rec, "deficit_over_asym2_pow1.5", std::pow(a2, 1.5));
  classify(rec);
  return rec;
}

DeficitRecord check_ashbaugh_benguria(const SpectralReport& r) {
  auto rec = start("ab", CheckMode::property, "scale invariant ratio");
  const Estimate& l1 = need(r.lambda1, "lambda1");
  const Estimate& l2 = need(r.lambda2, "lambda2");
  const double j01 = dirichlet_zero(2);
  const double j11 = second_dirichlet_zero(2);
  const double ratio = l2.value / l1.value;
  rec.deficit = (j11 * j11) / (j01 * j01) - ratio;
  rec.tolerance = kToleranceFactor * ratio * (l2.error / l2.value + l1.error / l1.value);
  set_asymmetry(rec, "fraenkel", r.geometry.fraenkel);
  rec.trail["ratio"] = ratio;
  if (r.geometry.convex) trail_ratio(rec, "deficit_over_asym", r.geometry.fraenkel);
  classify(rec);
  return rec;
}

DeficitRecord check_neumann_vs_dirichlet(const SpectralReport& r) {
  auto rec = start("mu2la1", CheckMode::explicit_constant, "scale invariant ratio");
  const Estimate& mu = need(r.mu2, "mu2");
  const Estimate& lam = need(r.lambda1, "lambda1");
  const ConstantsTable c = table(r);
  const double ratio = mu.value / lam.value;
  rec.deficit = c.theta_ratio - ratio;
  rec.tolerance = kToleranceFactor * ratio * (mu.error / mu.value + lam.error / lam.value);
  const double a = r.geometry.fraenkel;
  set_asymmetry(rec, "fraenkel", a);
  rec.bound = c.kappa * a * a;
  rec.constants = {{"kappa", c.kappa}, {"theta", c.theta_ratio}};
  rec.trail["mu2_over_lambda1"] = ratio;
  classify(rec);
  if (!(mu.value < lam.value) && rec.status != CheckStatus::failed) {
    rec.status = CheckStatus::failed;
    rec.satisfied = false;
    rec.note = "mu2 >= lambda1";
  }
  return rec;
}

DeficitRecord check_kohler_jobin(const SpectralReport& r, double q) {
  auto rec = start("kj_q" + fmt_param(q), CheckMode::property, "scale invariant product");
  const Estimate& t = need(r.torsion, "torsion");
  const Estimate lam = semilinear_value(r, q);
  const ConstantsTable c = table(r, q);
  const double theta = kohler_jobin_exponent(2, q);
  const double ball_norm = ball_semilinear_normalized(2, q);
  const double ball_torsion = 1.0 / (8.0 * kPi);  // unit-measure disc
  const double lhs = std::pow(t.value, theta) * lam.value;
  const double rhs = std::pow(ball_torsion, theta) * ball_norm;
  rec.deficit = lhs - rhs;
  rec.tolerance = q == 1.0 ? kGeometryTolerance
                           : kToleranceFactor * lhs * (theta * t.error / t.value + lam.error / lam.value);
  rec.constants = {{"theta", theta}, {"tau", c.tau_saint_venant}, {"tau_nq", c.tau_nq}};

  const double transfer = (std::pow(2.0, theta) - 1.0) * ball_norm *
                          std::min(c.tau_saint_venant / ball_torsion, 1.0 / 8.0);
  const double mismatch = std::abs(transfer - c.tau_nq) / c.tau_nq;
  rec.trail["hierarchy_transfer"] = transfer;
  rec.trail["hierarchy_mismatch"] = mismatch;
  classify(rec);
  if (mismatch > 1e-12) {
    rec.status = CheckStatus::failed;
    rec.satisfied = false;
    rec.note = "tau_nq differs from the hierarchy transfer";
  }
  return rec;
}

std::vector<DeficitRecord> check_bossel_daners(const SpectralReport& r) {
  std::vector<DeficitRecord> out;
  const double area = r.geometry.area;
  const double radius = std::sqrt(area / kPi);
  for (const auto& pe : r.robin) {
    auto rec = start("bd_alpha" + fmt_param(pe.param), CheckMode::property, "|D| = 1, alpha fixed");
    const Estimate& lam = need_param(r.robin, pe.param, "robin eigenvalue");
    rec.deficit = area * (lam.value - ball_robin_eigenvalue(2, pe.param, radius));
    rec.tolerance = kToleranceFactor * area * lam.error;
    const double a = r.geometry.fraenkel;
    set_asymmetry(rec, "fraenkel", a);
    rec.constants = {{"alpha", pe.param}};
    trail_ratio(rec, "deficit_over_asym2", a * a);
    classify(rec);
    out.push_back(rec);
  }
  return out;
}

DeficitRecord check_szego_sum_inverses_2d(const SpectralReport& r) {
  auto rec = start("szego_sum", CheckMode::property, "|D| = 1, barycenter 0");
  const double a = r.geometry.fraenkel;
  set_asymmetry(rec, "fraenkel", a);
  if (!simply_connected(r)) return skipped(rec, "not simply connected");
  const Estimate& m2 = need(r.mu2, "mu2");
  const Estimate& m3 = need(r.mu3, "mu3");
  const double b = neumann_zero(2);
  const double area = r.geometry.area;
  rec.deficit = (1.0 / m2.value + 1.0 / m3.value) / area - 2.0 / (kPi * b * b);
  rec.tolerance =
      kToleranceFactor * (m2.error / (m2.value * m2.value) + m3.error / (m3.value * m3.value)) / area;
  trail_ratio(rec, "deficit_over_asym2", a * a);
  classify(rec);
  return rec;
}

std::vector<DeficitRecord> run_checks(const SpectralReport& r, const std::vector<std::string>& groups) {
  for (const auto& g : groups) {
    if (std::find(kCheckGroups.begin(), kCheckGroups.end(), g) == kCheckGroups.end()) {
      throw ArgumentError("unknown check group " + g);
    }
  }
  auto selected = [&](const std::string& g) {
    return groups.empty() || std::find(groups.begin(), groups.end(), g) != groups.end();
  };
  std::vector<DeficitRecord> out;
  auto guarded = [&](const std::string& id, CheckMode mode, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      DeficitRecord rec = start(id, mode, "");
      rec.status = CheckStatus::failed;
      rec.note = e.what();
      out.push_back(rec);
    }
  };
  std::vector<double> qs;
  for (const auto& pe : r.semilinear) qs.push_back(pe.param);

  if (selected("fk")) {
    for (double q : qs) {
      guarded("fk_q" + fmt_param(q), CheckMode::explicit_constant, [&] { out.push_back(check_faber_krahn(r, q)); });
    }
  }
  if (selected("sv")) guarded("sv", CheckMode::explicit_constant, [&] { out.push_back(check_saint_venant(r)); });
  if (selected("hn2d")) {
    guarded("hn2d", CheckMode::explicit_constant, [&] { out.push_back(check_hansen_nadirashvili_2d(r)); });
  }
  if (selected("sw")) guarded("sw", CheckMode::explicit_constant, [&] { out.push_back(check_szego_weinberger(r)); });
  if (selected("steklov")) {
    guarded("steklov", CheckMode::explicit_constant, [&] {
      for (auto& rec : check_steklov_suite(r)) out.push_back(rec);
    });
  }
  if (selected("hks")) guarded("hks", CheckMode::property, [&] { out.push_back(check_hong_krahn_szego(r)); });
  if (selected("ab")) guarded("ab", CheckMode::property, [&] { out.push_back(check_ashbaugh_benguria(r)); });
  if (selected("mu2la1")) {
    guarded("mu2la1", CheckMode::explicit_constant, [&] { out.push_back(check_neumann_vs_dirichlet(r)); });
  }
  if (selected("kj")) {
    for (double q : qs) {
      guarded("kj_q" + fmt_param(q), CheckMode::property, [&] { out.push_back(check_kohler_jobin(r, q)); });
    }
  }
  if (selected("bd")) guarded("bd", CheckMode::property, [&] {
      for (auto& rec : check_bossel_daners(r)) out.push_back(rec);
    });
  if (selected("szego")) {
    guarded("szego_sum", CheckMode::property, [&] { out.push_back(check_szego_sum_inverses_2d(r)); });
  }
  return out;
}

bool any_explicit_failure(const std::vector<DeficitRecord>& records) {
  return std::any_of(records.begin(), records.end(), [](const DeficitRecord& rec) {
    return rec.mode == CheckMode::explicit_constant && rec.status == CheckStatus::failed;
  });
}

}  // namespace speclab
