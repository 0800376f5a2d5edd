#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "speclab/fem.hpp"
#include "speclab/mesh.hpp"
#include "speclab/shapes.hpp"

using namespace speclab;

namespace {

// Conformity, orientation and boundary-edge structure checked from scratch.
void check_invariants(const Mesh& m, double min_angle = 20.0) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : m.triangles) {
    Point a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
    REQUIRE(cross(b - a, c - a) > 0.0);
    for (int i = 0; i < 3; ++i) directed[{t[i], t[(i + 1) % 3]}]++;
  }
  int lonely = 0;
  for (const auto& [e, count] : directed) {
    REQUIRE(count == 1);
    if (!directed.count({e.second, e.first})) ++lonely;
  }
  CHECK(lonely == static_cast<int>(m.boundary_edges.size()));
  for (const auto& e : m.boundary_edges) {
    CHECK(directed.count({e[0], e[1]}) == 1);
    CHECK(directed.count({e[1], e[0]}) == 0);
  }
  CHECK(mesh_stats(m).min_angle_deg >= min_angle);
}

}  // namespace

TEST_CASE("unit square mesh statistics") {
  auto m = triangulate(rectangle(1, 1), 0.1);
  auto s = mesh_stats(m);
  CHECK(s.n_triangles >= 200);
  CHECK(s.n_triangles <= 300);
  CHECK(s.min_angle_deg >= 20.0);
  CHECK(s.area == doctest::Approx(1.0).epsilon(1e-12));
  check_invariants(m);

  auto finer = triangulate(rectangle(1, 1), 0.05);
  double ratio = static_cast<double>(finer.triangles.size()) / m.triangles.size();
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("corpus meshes satisfy the invariants") {
  for (const auto& d : standard_corpus()) {
    CAPTURE(d.label);
    Domain n = normalized(d, 1.0);
    auto m = triangulate(n, 0.06);
    check_invariants(m);
    CHECK(mesh_stats(m).area == doctest::Approx(measure(n)).epsilon(1e-11));
    for (const auto& e : m.boundary_edges) CHECK(dist(m.vertices[e[0]], m.vertices[e[1]]) <= 0.06 * (1 + 1e-12));
  }
}

TEST_CASE("boundary edges carry loop tags") {
  auto m = triangulate(square_with_hole(), 0.05);
  std::map<int, double> length;
  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    auto e = m.boundary_edges[i];
    length[m.boundary_loop[i]] += dist(m.vertices[e[0]], m.vertices[e[1]]);
  }
  REQUIRE(length.size() == 2);
  CHECK(length[0] == doctest::Approx(4.0));
  CHECK(length[1] == doctest::Approx(2.0));
  CHECK(mesh_stats(m).area == doctest::Approx(0.75));
}

TEST_CASE("uniform refinement") {
  auto m = triangulate(l_shape(), 0.2);
  auto r = refine_uniform(m);
  CHECK(r.triangles.size() == 4 * m.triangles.size());
  CHECK(r.boundary_edges.size() == 2 * m.boundary_edges.size());
  CHECK(r.h == doctest::Approx(0.1));
  CHECK(mesh_stats(r).min_angle_deg == doctest::Approx(mesh_stats(m).min_angle_deg));
  CHECK(mesh_stats(r).area == doctest::Approx(3.0).epsilon(1e-12));
  check_invariants(r);
}

TEST_CASE("needle-like input is rejected") {
  Domain d;
  d.label = "needle";
  d.outer = {{0, 0}, {1, 0}, {1, 0.002}};
  MeshingOptions opts;
  opts.max_vertices = 20000;
  CHECK_THROWS_AS(triangulate(d, 0.1, opts), MeshingError);
  CHECK_THROWS_AS(triangulate(rectangle(1, 1), -1.0), ArgumentError);
}

TEST_CASE("OFF export") {
  auto m = triangulate(rectangle(1, 1), 0.5);
  std::ostringstream out;
  write_off(m, out);
  std::istringstream in(out.str());
  std::string magic;
  std::size_t nv, nf, ne;
  in >> magic >> nv >> nf >> ne;
  CHECK(magic == "OFF");
  CHECK(nv == m.vertices.size());
  CHECK(nf == m.triangles.size());
  double x, y, z;
  for (std::size_t i = 0; i < nv; ++i) {
    in >> x >> y >> z;
    CHECK(x == m.vertices[i].x);
  }
  int three, a, b, c;
  in >> three >> a >> b >> c;
  CHECK(three == 3);
  CHECK(a == m.triangles[0][0]);
}

TEST_CASE("reference triangle element matrices") {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{0, 1}, {1, 2}, {2, 0}};
  m.boundary_loop = {0, 0, 0};
  auto ops = assemble(m);
  Eigen::Matrix3d k_ref;
  k_ref << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  Eigen::Matrix3d m_ref;
  m_ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  m_ref /= 24.0;
  CHECK((Eigen::MatrixXd(ops.stiffness) - k_ref).norm() < 1e-15);
  CHECK((Eigen::MatrixXd(ops.mass) - m_ref).norm() < 1e-15);
  for (int i = 0; i < 3; ++i) CHECK(ops.load[i] == doctest::Approx(1.0 / 6.0));
  double s2 = std::sqrt(2.0);
  Eigen::Matrix3d b_ref;
  b_ref << 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 6, (1 + s2) / 3, s2 / 6, 1.0 / 6, s2 / 6, (1 + s2) / 3;
  CHECK((Eigen::MatrixXd(ops.boundary_mass) - b_ref).norm() < 1e-14);

  m.vertices[2] = {2, 0};
  CHECK_THROWS_AS(assemble(m), MeshingError);
}

TEST_CASE("assembled forms: sums, symmetry, kernel, definiteness") {
  for (const auto& d : {normalized(l_shape()), square_with_hole(), normalized(two_discs())}) {
    CAPTURE(d.label);
    auto m = triangulate(d, 0.12);
    auto ops = assemble(m);
    const auto n = ops.load.size();
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    CHECK((ops.stiffness * ones).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ones.dot(ops.mass * ones) == doctest::Approx(measure(d)).epsilon(1e-12));
    CHECK(ops.load.sum() == doctest::Approx(measure(d)).epsilon(1e-12));
    CHECK(ones.dot(ops.boundary_mass * ones) == doctest::Approx(perimeter(d)).epsilon(1e-12));
    CHECK(ops.load.minCoeff() > 0.0);
    CHECK((SpMat(ops.stiffness.transpose()) - ops.stiffness).norm() == 0.0);
    CHECK((SpMat(ops.mass.transpose()) - ops.mass).norm() == 0.0);

    Eigen::MatrixXd k = Eigen::MatrixXd(ops.stiffness);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(k);
    int zero_modes = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(ks.eigenvalues()[i] > -1e-12);
      if (ks.eigenvalues()[i] < 1e-10) ++zero_modes;
    }
    CHECK(zero_modes == ops.components);
    CHECK(Eigen::MatrixXd(ops.mass).llt().info() == Eigen::Success);
    Eigen::MatrixXd bb = Eigen::MatrixXd(restrict_matrix(ops.boundary_mass, ops.boundary, ops.boundary));
    CHECK(bb.llt().info() == Eigen::Success);
  }
  CHECK(mesh_components(triangulate(two_discs(), 0.3)) == 2);
}

TEST_CASE("parallel assembly matches the serial reference bit for bit") {
  auto m = triangulate(normalized(regular_polygon(128)), 0.03);
  auto a = assemble(m);
  auto b = assemble_serial(m);
  CHECK((a.stiffness - b.stiffness).norm() == 0.0);
  CHECK((a.mass - b.mass).norm() == 0.0);
  CHECK((a.boundary_mass - b.boundary_mass).norm() == 0.0);
  CHECK((a.load - b.load).norm() == 0.0);
  CHECK(a.interior == b.interior);
}
