#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "speclab/report.hpp"
#include "speclab/shapes.hpp"

using namespace speclab;
using std::numbers::pi;

namespace {

double bisect(auto f, double lo, double hi) {
  const bool rising = f(lo) < 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) < 0.0) == rising ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double square_torsion_series() {
  double s = 0.0;
  for (int m = 1; m < 4000; m += 2)
    for (int n = 1; n < 4000; n += 2) s += 1.0 / (double(m) * m * n * n * (double(m) * m + double(n) * n));
  return 64.0 / std::pow(pi, 6) * s;
}

double square_steklov_sigma2() {
  const double z = bisect([](double t) { return std::tanh(t) * std::tan(t) - 1.0; }, 0.5, 1.5);
  return 2.0 * z * std::tanh(z);
}

// Even Robin mode cos(k(x - 1/2)) on [0, 1]: k tan(k/2) = alpha; the square's
// first eigenvalue is twice the 1D one.
double square_robin(double alpha) {
  const double k = bisect([&](double t) { return t * std::tan(0.5 * t) - alpha; }, 1e-9, pi - 1e-9);
  return 2.0 * k * k;
}

// Radial Robin mode J0(k r) on the disc of radius R: k J1(k R) = alpha J0(k R).
double disc_robin(double alpha, double radius) {
  using boost::math::cyl_bessel_j;
  const double j0 = 2.404825557695773 / radius;
  const double k = bisect([&](double t) { return t * cyl_bessel_j(1, t * radius) - alpha * cyl_bessel_j(0, t * radius); },
                          1e-9, j0 - 1e-12);
  return k * k;
}

const DeficitRecord& find(const std::vector<DeficitRecord>& recs, const std::string& id) {
  for (const auto& r : recs) {
    if (r.id == id) return r;
  }
  FAIL("record " << id << " missing");
  throw std::logic_error("unreachable");
}

ReportOptions quick() {
  ReportOptions o;
  o.h = 0.04;
  o.q_grid = {1.0, 2.0, 4.0};
  return o;
}

const SpectralReport& square_report() {
  static const SpectralReport r = build_report(rectangle(1, 1, "square"), quick());
  return r;
}

// Closed form within the record's tolerance plus a small absolute slack for
// the extrapolation residue.
void check_deficit(const DeficitRecord& rec, double exact, double slack = 1e-4) {
  CAPTURE(rec.id);
  CHECK(std::abs(rec.deficit - exact) <= rec.tolerance + slack);
}

}  // namespace

TEST_CASE("status follows slack against tolerance") {
  DeficitRecord rec;
  rec.deficit = 0.5;
  rec.bound = 0.2;
  rec.tolerance = 0.1;
  classify(rec);
  CHECK(rec.status == CheckStatus::satisfied);
  CHECK(rec.slack == doctest::Approx(0.3));
  rec.deficit = 0.15;
  classify(rec);
  CHECK(rec.status == CheckStatus::inconclusive);
  CHECK(rec.satisfied);
  rec.deficit = 0.05;
  classify(rec);
  CHECK(rec.status == CheckStatus::failed);
  CHECK_FALSE(rec.satisfied);
  rec.bound.reset();
  rec.deficit = -1e-15;
  classify(rec);
  CHECK(rec.status == CheckStatus::satisfied);
}

TEST_CASE("square deficits match closed forms") {
  const auto& r = square_report();
  const auto& recs = r.records;
  const double j01 = 2.404825557695773;
  const double j11 = 3.831705970207512;
  const double b11 = 1.841183781340659;

  check_deficit(find(recs, "fk_q2"), 2 * pi * pi - pi * j01 * j01);
  check_deficit(find(recs, "hn2d"), 2 * pi * pi - pi * j01 * j01);
  check_deficit(find(recs, "sv"), 1.0 / (8 * pi) - square_torsion_series(), 1e-6);
  check_deficit(find(recs, "fk_q1"), 1.0 / square_torsion_series() - 8 * pi, 1e-3);
  check_deficit(find(recs, "sw"), pi * b11 * b11 - pi * pi);
  check_deficit(find(recs, "hks"), 5 * pi * pi - 2 * pi * j01 * j01);
  check_deficit(find(recs, "ab"), j11 * j11 / (j01 * j01) - 2.5);
  check_deficit(find(recs, "mu2la1"), b11 * b11 / (j01 * j01) - 0.5);
  check_deficit(find(recs, "szego_sum"), 2 / (pi * pi) - 2 / (pi * b11 * b11));
  check_deficit(find(recs, "p2_stability"), 4.0 / 3.0 - 2 / std::sqrt(pi), 1e-12);
  const double s2 = square_steklov_sigma2();
  check_deficit(find(recs, "brock"), std::sqrt(pi) - s2, 3e-4);
  check_deficit(find(recs, "brock_weinstock"), std::sqrt(pi) - s2, 3e-4);
  check_deficit(find(recs, "weinstock"), 2 * pi - 4 * s2, 1e-3);
  check_deficit(find(recs, "sum_inverses"), 2 / s2 - 2 / std::sqrt(pi), 3e-4);
  for (double alpha : {0.1, 1.0, 10.0}) {
    char id[32];
    std::snprintf(id, sizeof id, "bd_alpha%g", alpha);
    check_deficit(find(recs, id), square_robin(alpha) - disc_robin(alpha, 1 / std::sqrt(pi)), 1e-3);
  }
}

TEST_CASE("square: every record holds and the explicit bounds use the asymmetry") {
  const auto& r = square_report();
  CHECK(r.errors.empty());
  CHECK_FALSE(any_explicit_failure(r.records));
  for (const auto& rec : r.records) {
    CAPTURE(rec.id);
    CHECK(rec.status == CheckStatus::satisfied);
    if (rec.id != "kj_q1") CHECK(rec.deficit > 0.0);
  }
  const auto& fk = find(r.records, "fk_q2");
  const double a = r.geometry.fraenkel;
  CHECK(a == doctest::Approx(0.18109).epsilon(1e-3));
  CHECK(*fk.bound == doctest::Approx(constants_table(2, 2.0).tau_nq * a * a * a));
  const auto& hn = find(r.records, "hn2d");
  CHECK(*hn.bound == doctest::Approx(pi * 2.404825557695773 * 2.404825557695773 / 250 * std::pow(r.geometry.dN, 3)));
  CHECK(hn.asymmetry_kind == "dN");
}

TEST_CASE("Kohler-Jobin: q = 1 is an identity and the hierarchy arithmetic matches") {
  const auto& recs = square_report().records;
  const auto& kj1 = find(recs, "kj_q1");
  CHECK(std::abs(kj1.deficit) < 1e-13);
  CHECK(kj1.status == CheckStatus::satisfied);
  for (const char* id : {"kj_q1", "kj_q2", "kj_q4"}) {
    CAPTURE(id);
    CHECK(find(recs, id).trail.at("hierarchy_mismatch") < 1e-12);
  }
  CHECK(find(recs, "kj_q2").deficit > 0.0);
}

TEST_CASE("deficits are scale and translation invariant") {
  auto o = quick();
  o.checks = {"fk", "sv", "sw", "steklov", "mu2la1"};
  Domain big = translated(scaled(rectangle(1, 1, "square"), 3.0), {5.0, -2.0});
  const auto r = build_report(big, o);
  const auto& base = square_report().records;
  for (const auto& rec : r.records) {
    CAPTURE(rec.id);
    CHECK(std::abs(rec.deficit - find(base, rec.id).deficit) <= 1e-6 * std::abs(rec.deficit));
  }
}

TEST_CASE("topology: holes and disconnected domains skip the simply connected checks") {
  auto o = quick();
  o.h = 0.05;
  o.checks = {"hn2d", "szego", "steklov"};
  const auto hole = build_report(square_with_hole(), o);
  CHECK(find(hole.records, "hn2d").status == CheckStatus::skipped);
  CHECK(find(hole.records, "szego_sum").status == CheckStatus::skipped);
  CHECK(find(hole.records, "weinstock").status == CheckStatus::skipped);
  CHECK(find(hole.records, "sum_inverses").status == CheckStatus::satisfied);

  o.checks = {"hks", "hn2d"};
  const auto two = build_report(two_discs(64, 3.0), o);
  const auto& hks = find(two.records, "hks");
  CHECK(std::abs(hks.deficit) <= hks.tolerance);
  CHECK(two.geometry.fraenkel2 < 1e-3);
  CHECK(find(two.records, "hn2d").status == CheckStatus::skipped);
}

TEST_CASE("a missing solver value fails only the checks that need it") {
  SpectralReport r = square_report();
  r.records.clear();
  r.lambda1.reset();
  const auto recs = run_checks(r);
  CHECK(find(recs, "fk_q2").status == CheckStatus::failed);
  CHECK(find(recs, "fk_q2").note.find("lambda1") != std::string::npos);
  CHECK(find(recs, "ab").status == CheckStatus::failed);
  CHECK(find(recs, "sw").status == CheckStatus::satisfied);
  CHECK(find(recs, "fk_q1").status == CheckStatus::satisfied);
  CHECK(any_explicit_failure(recs));
  CHECK_THROWS_AS(run_checks(r, {"nonsense"}), ArgumentError);
}

TEST_CASE("report JSON round trip and schema version") {
  const auto& r = square_report();
  const auto j = to_json(r);
  CHECK(j.at("schema_version") == kReportSchemaVersion);
  const auto back = report_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.records.size() == r.records.size());

  auto bad = j;
  bad["schema_version"] = kReportSchemaVersion + 1;
  CHECK_THROWS_AS(report_from_json(bad), ArgumentError);
  bad.erase("schema_version");
  CHECK_THROWS_AS(report_from_json(bad), ArgumentError);
}

TEST_CASE("identical options give identical reports") {
  auto o = quick();
  o.h = 0.06;
  const auto a = to_json(build_report(regular_polygon(5), o)).dump();
  const auto b = to_json(build_report(regular_polygon(5), o)).dump();
  CHECK(a == b);
}

TEST_CASE("report options are validated") {
  ReportOptions o;
  o.levels = 4;
  CHECK_THROWS_AS(validate(o), ArgumentError);
  o = {};
  o.h = 0.0;
  CHECK_THROWS_AS(validate(o), ArgumentError);
  o = {};
  o.q_grid = {0.5};
  CHECK_THROWS_AS(validate(o), ArgumentError);
  o = {};
  o.alpha_grid = {-1.0};
  CHECK_THROWS_AS(validate(o), ArgumentError);
}
