#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "speclab/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string bin() {
  const char* b = std::getenv("SPECLAB_BIN");
  REQUIRE_MESSAGE(b, "SPECLAB_BIN not set");
  return b;
}

std::string corpus(const std::string& name) {
  const char* c = std::getenv("SPECLAB_CORPUS");
  REQUIRE_MESSAGE(c, "SPECLAB_CORPUS not set");
  return (fs::path(c) / name).string();
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + bin() + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("speclab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("ball prints spectra to 12 significant digits") {
  auto r = run("ball --dim 2 --radius 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda1 = 5.78318596295") != std::string::npos);
  CHECK(r.out.find("torsion = 0.392699081699") != std::string::npos);
  r = run("ball --dim 3 --radius 1 --json");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("lambda1").get<double>() == doctest::Approx(9.86960440109).epsilon(1e-12));
  r = run("ball --dim 2 --q 1 --json");
  CHECK(json::parse(r.out).at("constants").at("kj_theta").get<double>() == 1.0);
}

TEST_CASE("constants in JSON") {
  const auto r = run("constants --dim 2 --q 2 --json");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("theta_ratio").get<double>() == doctest::Approx(0.586174772589).epsilon(1e-11));
  CHECK(j.at("hn2d_constant").get<double>() > 0.0);
}

TEST_CASE("report on the square: every record satisfied and the file loads back") {
  const auto out = scratch() / "square.json";
  const auto r = run("report " + corpus("square.json") + " --h 0.05 -o " + out.string());
  CHECK(r.code == 0);
  const auto rep = speclab::load_report(out.string());
  CHECK(rep.records.size() >= 10);
  for (const auto& rec : rep.records) {
    CAPTURE(rec.id);
    CHECK(rec.status == speclab::CheckStatus::satisfied);
  }
  CHECK(rep.fine_spectra.at("dirichlet").size() == 2);
}

TEST_CASE("report on the holed square skips the simply connected checks") {
  const auto r = run("report " + corpus("square_hole.json") + " --h 0.06 --checks hn2d,szego");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out.substr(0, r.out.rfind("}\n") + 1));
  for (const auto& rec : j.at("records")) CHECK(rec.at("status") == "skipped");
}

TEST_CASE("config file values apply and flags override them") {
  const auto cfg = scratch() / "cfg.json";
  std::ofstream(cfg) << R"({"h": 0.06, "checks": ["sw"], "k": 4})";
  const auto out = scratch() / "cfg_report.json";
  auto r = run("report --corpus pentagon --config " + cfg.string() + " -o " + out.string());
  CHECK(r.code == 0);
  auto j = json::parse(slurp(out));
  CHECK(j.at("mesh").at("h").get<double>() == 0.06);
  CHECK(j.at("records").size() == 1);
  CHECK(j.at("fine_spectra").at("neumann").size() == 4);
  r = run("report --corpus pentagon --config " + cfg.string() + " --h 0.07 -o " + out.string());
  CHECK(json::parse(slurp(out)).at("mesh").at("h").get<double>() == 0.07);

  std::ofstream(cfg) << R"({"h": 0.06, "mesh": 3})";
  CHECK(run("report --corpus pentagon --config " + cfg.string()).code == 2);
}

TEST_CASE("identical runs write identical reports and CSVs") {
  const auto a = scratch() / "a.json", b = scratch() / "b.json";
  REQUIRE(run("report --corpus lshape --h 0.06 -o " + a.string()).code == 0);
  REQUIRE(run("report --corpus lshape --h 0.06 -o " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));

  const std::string sweep = "sweep --family ellipse --checks fk,sw --q-grid 2 --eps-max 0.3 --eps-min 0.1 --steps 5 --h 0.05";
  const auto c1 = scratch() / "s1.csv", c2 = scratch() / "s2.csv";
  REQUIRE(run(sweep + " -o " + c1.string()).code == 0);
  REQUIRE(run(sweep + " -o " + c2.string()).code == 0);
  CHECK(slurp(c1) == slurp(c2));
  CHECK(slurp(c1).rfind("eps,area,asym_kind,asym_value,deficit_fk_q2,deficit_sw", 0) == 0);
  const auto fits = json::parse(slurp(scratch() / "s1.fits.json"));
  CHECK(fits.at("fits").at("sw").at("vs_eps").at("slope").get<double>() > 0.5);
}

TEST_CASE("a sweep below the noise floor reports an error") {
  const auto out = scratch() / "noise.csv";
  const auto r = run("sweep --family nearly-spherical --checks sw --eps-max 0.0015 --eps-min 0.001 --steps 5 --h 0.08 -o " +
                     out.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("smaller mesh size h") != std::string::npos);
}

TEST_CASE("verify suites") {
  auto r = run("verify --suite ball");
  CHECK(r.code == 0);
  CHECK(r.out.find("4/4 passed") != std::string::npos);
  r = run("verify --suite geometry");
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(run("verify --suite nonsense").code == 2);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("report /nonexistent/domain.json").code == 2);
  CHECK(run("report --corpus square --levels 7").code == 2);
  CHECK(run("report --corpus square --checks fk,bogus").code == 2);
  CHECK(run("sweep --family torus --checks fk -o x.csv").code == 2);
  CHECK(run("ball --dim 2", "SPECLAB_THREADS=abc").code == 0);
  CHECK(run("report --corpus square --h 0.08 --checks sw", "SPECLAB_THREADS=abc").code == 2);
  const auto bad = scratch() / "bad.json";
  std::ofstream(bad) << R"({"label": "x", "outer": [[0, 0], [1, 0]]})";
  CHECK(run("report " + bad.string()).code == 2);
  std::ofstream(bad) << "not json";
  CHECK(run("report " + bad.string()).code == 2);
}
