#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "speclab/ball_spectra.hpp"
#include "speclab/config.hpp"
#include "speclab/domain_io.hpp"
#include "speclab/families.hpp"
#include "speclab/report.hpp"
#include "speclab/shapes.hpp"
#include "speclab/verify.hpp"

using namespace speclab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// 12 significant digits, as numbers rather than strings.
json rounded(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  return std::stod(g12(v));
}

struct ConfigFlags {
  std::string config_path;
  double h = 0.0;
  int levels = 0;
  int k = 0;
  std::string q_grid, alpha_grid, checks;
  double iso_beta = 0.0;
  int threads = -1;
  std::uint64_t seed = 0;
  std::string output;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--h", h, "mesh size on the unit-measure copy");
    sub->add_option("--levels", levels, "nested mesh levels (1-3)");
    sub->add_option("--k", k, "eigenvalues per spectrum");
    sub->add_option("--q-grid", q_grid, "comma-separated semilinear exponents");
    sub->add_option("--alpha-grid", alpha_grid, "comma-separated Robin parameters");
    sub->add_option("--iso-beta", iso_beta, "isoperimetric stability constant");
    sub->add_option("--checks", checks, "comma-separated check groups");
    sub->add_option("--threads", threads, "OpenMP threads (0: SPECLAB_THREADS or default)");
    sub->add_option("--seed", seed, "seed for multi-start optimizers");
    sub->add_option("-o,--output", output, "output path");
  }

  bool given(const char* name) const { return app->get_option(name)->count() > 0; }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (given("--h")) c.h = h;
    if (given("--levels")) c.levels = levels;
    if (given("--k")) c.k = k;
    if (given("--q-grid")) c.q_grid = parse_grid(q_grid);
    if (given("--alpha-grid")) c.alpha_grid = parse_grid(alpha_grid);
    if (given("--iso-beta")) c.iso_beta = iso_beta;
    if (given("--checks")) c.checks = split_list(checks);
    if (given("--threads")) c.threads = threads;
    if (given("--seed")) c.seed = seed;
    if (given("--output")) c.output = output;
    validate(c);
    apply_threads(c);
    return c;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
  if (!out) throw ArgumentError("write failed for " + path);
}

json constants_json(const ConstantsTable& t) {
  return {{"dim", t.dim},
          {"q", rounded(t.q)},
          {"iso_beta", rounded(t.iso_beta)},
          {"ps_constant", rounded(t.ps_constant)},
          {"tau_saint_venant", rounded(t.tau_saint_venant)},
          {"tau_nq", rounded(t.tau_nq)},
          {"rho_lower", rounded(t.rho_lower)},
          {"rho", rounded(t.rho)},
          {"c_berry", rounded(t.c_berry)},
          {"c_stek", rounded(t.c_stek)},
          {"kappa", rounded(t.kappa)},
          {"theta_ratio", rounded(t.theta_ratio)},
          {"kj_theta", rounded(t.kj_theta)},
          {"hn2d_constant", rounded(t.hn2d_constant)}};
}

void print_constants(const ConstantsTable& t) {
  const json j = constants_json(t);
  for (const auto& [key, v] : j.items()) std::cout << "  " << key << " = " << v.dump() << '\n';
}

int cmd_ball(int dim, double radius, std::optional<double> q, double iso_beta, bool as_json) {
  const auto b = ball_spectrum(dim, radius);
  const double qq = q.value_or(2.0);
  json j = {{"dim", dim},
            {"radius", rounded(radius)},
            {"lambda1", rounded(b.lambda1)},
            {"lambda2", rounded(b.lambda2)},
            {"mu2", rounded(b.mu2)},
            {"sigma2", rounded(b.sigma2)},
            {"torsion", rounded(b.torsion)},
            {"j_zero", rounded(b.j_zero)},
            {"beta_zero", rounded(b.beta_zero)},
            {"omega_n", rounded(b.omega_n)}};
  if (q) {
    j["q"] = rounded(qq);
    j["semilinear_lambda"] = rounded(ball_semilinear_eigenvalue(dim, qq, radius));
  }
  const auto t = constants_table(dim, qq, iso_beta);
  if (as_json) {
    j["constants"] = constants_json(t);
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "ball N=" << dim << " R=" << g12(radius) << '\n';
  for (const auto& [key, v] : j.items()) {
    if (key != "dim" && key != "radius") std::cout << "  " << key << " = " << v.dump() << '\n';
  }
  std::cout << "constants (q=" << g12(qq) << ")\n";
  print_constants(t);
  return kExitOk;
}

int cmd_constants(int dim, double q, double iso_beta, bool as_json) {
  const auto t = constants_table(dim, q, iso_beta);
  if (as_json) {
    std::cout << constants_json(t).dump(2) << '\n';
  } else {
    print_constants(t);
  }
  return kExitOk;
}

int summarize(const std::vector<DeficitRecord>& records, std::ostream& out) {
  int inconclusive = 0;
  for (const auto& rec : records) {
    out << rec.id << ' ' << to_string(rec.status) << " deficit=" << g12(rec.deficit)
        << " bound=" << (rec.bound ? g12(*rec.bound) : std::string("-")) << " tol=" << g12(rec.tolerance) << '\n';
    if (rec.status == CheckStatus::inconclusive) ++inconclusive;
  }
  if (inconclusive > 0) std::cerr << "warning: " << inconclusive << " inconclusive record(s)\n";
  return any_explicit_failure(records) ? kExitCheckFailed : kExitOk;
}

int cmd_report(const std::string& domain_path, const std::string& corpus_label, const RunConfig& cfg) {
  Domain d;
  if (!corpus_label.empty()) {
    d = corpus_domain(corpus_label);
  } else {
    const auto loaded = load_domain(domain_path);
    for (const auto& fix : loaded.orientation_fixes) std::cerr << "note: " << fix << '\n';
    d = loaded.domain;
  }
  const auto r = build_report(d, report_options(cfg));
  for (const auto& e : r.errors) std::cerr << "solver error: " << e << '\n';
  if (cfg.output.empty()) {
    std::cout << to_json(r).dump(2) << '\n';
    return summarize(r.records, std::cerr);
  }
  write_text(cfg.output, to_json(r).dump(2) + "\n");
  return summarize(r.records, std::cout);
}

struct SweepFlags {
  std::string family;
  double eps_max = 0.2;
  double eps_min = 0.02;
  int steps = 6;
  std::string h_schedule;
  std::string fits;
  int n_vertices = 512;
};

int cmd_sweep(const SweepFlags& f, const RunConfig& cfg) {
  FamilySpec spec;
  spec.kind = family_from_string(f.family);
  spec.eps = eps_grid(f.eps_max, f.eps_min, f.steps);
  spec.n_vertices = f.n_vertices;
  SweepOptions opts = sweep_options(cfg);
  if (!f.h_schedule.empty()) opts.h_schedule = parse_grid(f.h_schedule);
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty()) throw ArgumentError("sweep needs --checks");
  if (cfg.output.empty()) throw ArgumentError("sweep needs -o for the CSV");
  const auto r = run_sweep(spec, checks, opts);

  std::ostringstream csv;
  write_sweep_csv(r, csv);
  write_text(cfg.output, csv.str());
  std::string fits_path = f.fits.empty() ? cfg.fits_output : f.fits;
  if (fits_path.empty()) fits_path = std::filesystem::path(cfg.output).replace_extension(".fits.json").string();
  write_text(fits_path, sweep_fits_json(r).dump(2) + "\n");

  int code = kExitOk;
  for (const auto& p : r.points) {
    for (const auto& msg : p.failures) std::cerr << "eps=" << g12(p.eps) << ": " << msg << '\n';
    for (const auto& [id, st] : p.status) {
      if (st == "failed") {
        std::cerr << "eps=" << g12(p.eps) << ": " << id << " failed\n";
        code = kExitCheckFailed;
      }
    }
  }
  for (const auto& [id, fit] : r.fits) {
    std::cout << id;
    if (fit.vs_eps) std::cout << " slope_eps=" << g12(fit.vs_eps->slope) << " resid=" << g12(fit.vs_eps->residual);
    if (fit.vs_asymmetry) std::cout << " slope_asym=" << g12(fit.vs_asymmetry->slope);
    std::cout << '\n';
    if (!fit.vs_eps) {
      std::cerr << "error: " << id << ": " << fit.note << '\n';
      code = kExitCheckFailed;
    }
  }
  if (r.asymmetry_vs_eps) std::cout << "asymmetry slope_eps=" << g12(r.asymmetry_vs_eps->slope) << '\n';
  return code;
}

int cmd_verify(const std::string& suites, const RunConfig& cfg) {
  const auto results = run_verify(cfg, suites.empty() ? std::vector<std::string>{} : split_list(suites));
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
    std::cout << '\n';
    if (!r.passed) ++failed;
  }
  std::cout << results.size() - failed << '/' << results.size() << " passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_corpus(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& d : standard_corpus()) {
    write_text((std::filesystem::path(dir) / (d.label + ".json")).string(), domain_to_json(d).dump(2) + "\n");
    std::cout << d.label << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral isoperimetric deficits on planar domains"};
  app.require_subcommand(1);

  int dim = 2;
  double radius = 1.0;
  std::optional<double> ball_q;
  double iso_beta = kDefaultIsoBeta;
  bool as_json = false;
  auto* ball = app.add_subcommand("ball", "ball spectrum and constants");
  ball->add_option("--dim", dim)->check(CLI::Range(1, 12));
  ball->add_option("--radius", radius)->check(CLI::PositiveNumber);
  ball->add_option("--q", ball_q);
  ball->add_option("--iso-beta", iso_beta)->check(CLI::PositiveNumber);
  ball->add_flag("--json", as_json);

  double const_q = 2.0;
  auto* constants = app.add_subcommand("constants", "explicit constants table");
  constants->add_option("--dim", dim)->check(CLI::Range(1, 12));
  constants->add_option("--q", const_q);
  constants->add_option("--iso-beta", iso_beta)->check(CLI::PositiveNumber);
  constants->add_flag("--json", as_json);

  std::string domain_path, corpus_label;
  ConfigFlags report_flags;
  auto* report = app.add_subcommand("report", "deficit report for one domain");
  auto* domain_opt = report->add_option("domain", domain_path, "domain JSON file")->check(CLI::ExistingFile);
  report->add_option("--corpus", corpus_label, "built-in corpus label instead of a file")->excludes(domain_opt);
  report_flags.attach(report);

  SweepFlags sweep_flags;
  ConfigFlags sweep_config;
  auto* sweep = app.add_subcommand("sweep", "deficit decay along a shape family");
  sweep->add_option("--family", sweep_flags.family)->required();
  sweep->add_option("--eps-max", sweep_flags.eps_max);
  sweep->add_option("--eps-min", sweep_flags.eps_min);
  sweep->add_option("--steps", sweep_flags.steps);
  sweep->add_option("--h-schedule", sweep_flags.h_schedule, "comma-separated mesh sizes, one per eps");
  sweep->add_option("--fits", sweep_flags.fits, "fit JSON path (default: CSV path with .fits.json)");
  sweep->add_option("--vertices", sweep_flags.n_vertices);
  sweep_config.attach(sweep);

  std::string suites;
  ConfigFlags verify_config;
  auto* verify = app.add_subcommand("verify", "invariant suites on the built-in corpus");
  verify->add_option("--suite", suites, "comma-separated suites");
  verify_config.attach(verify);

  std::string corpus_dir;
  auto* corpus = app.add_subcommand("corpus", "write the built-in corpus as domain JSON files");
  corpus->add_option("dir", corpus_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ball) return cmd_ball(dim, radius, ball_q, iso_beta, as_json);
    if (*constants) return cmd_constants(dim, const_q, iso_beta, as_json);
    if (*report) {
      if (domain_path.empty() && corpus_label.empty()) throw ArgumentError("report needs a domain file or --corpus");
      return cmd_report(domain_path, corpus_label, report_flags.resolve());
    }
    if (*sweep) return cmd_sweep(sweep_flags, sweep_config.resolve());
    if (*verify) return cmd_verify(suites, verify_config.resolve());
    if (*corpus) return cmd_corpus(corpus_dir);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidDomainError& e) {
    std::cerr << "invalid domain: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
