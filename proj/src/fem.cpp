#include "speclab/fem.hpp"

#include <numeric>

namespace speclab {
namespace {

using Triplet = Eigen::Triplet<double>;

struct ElementSlots {
  std::vector<Triplet> k, m;
  std::vector<double> load;
};

void element(const Mesh& mesh, std::size_t t, ElementSlots& s) {
  const auto& tri = mesh.triangles[t];
  Point p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
  double area = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
  if (!(area > 0.0)) throw MeshingError("degenerate or inverted triangle " + std::to_string(t));
  Point e[3];
  for (int i = 0; i < 3; ++i) e[i] = p[(i + 2) % 3] - p[(i + 1) % 3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::size_t slot = 9 * t + 3 * i + j;
      s.k[slot] = Triplet(tri[i], tri[j], dot(e[i], e[j]) / (4.0 * area));
      s.m[slot] = Triplet(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
    }
  for (int i = 0; i < 3; ++i) s.load[3 * t + i] = area / 3.0;
}

DiscreteOperators finish(const Mesh& mesh, ElementSlots& s) {
  const int n = static_cast<int>(mesh.vertices.size());
  DiscreteOperators ops;
  ops.stiffness.resize(n, n);
  ops.mass.resize(n, n);
  ops.boundary_mass.resize(n, n);
  ops.stiffness.setFromTriplets(s.k.begin(), s.k.end());
  ops.mass.setFromTriplets(s.m.begin(), s.m.end());
  ops.load = Eigen::VectorXd::Zero(n);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (int i = 0; i < 3; ++i) ops.load[mesh.triangles[t][i]] += s.load[3 * t + i];

  std::vector<Triplet> bd;
  bd.reserve(4 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    double len = dist(mesh.vertices[e[0]], mesh.vertices[e[1]]);
    bd.emplace_back(e[0], e[0], len / 3.0);
    bd.emplace_back(e[1], e[1], len / 3.0);
    bd.emplace_back(e[0], e[1], len / 6.0);
    bd.emplace_back(e[1], e[0], len / 6.0);
  }
  ops.boundary_mass.setFromTriplets(bd.begin(), bd.end());

  ops.boundary = boundary_vertices(mesh);
  std::vector<char> on_boundary(n, 0);
  for (int b : ops.boundary) on_boundary[b] = 1;
  for (int i = 0; i < n; ++i)
    if (!on_boundary[i]) ops.interior.push_back(i);
  ops.components = mesh_components(mesh);
  ops.h = mesh.h;
  return ops;
}

ElementSlots make_slots(const Mesh& mesh) {
  ElementSlots s;
  s.k.resize(9 * mesh.triangles.size());
  s.m.resize(9 * mesh.triangles.size());
  s.load.resize(3 * mesh.triangles.size());
  return s;
}

}  // namespace

DiscreteOperators assemble(const Mesh& mesh) {
  ElementSlots s = make_slots(mesh);
  const long nt = static_cast<long>(mesh.triangles.size());
  bool failed = false;
  long bad = -1;
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    try {
      element(mesh, static_cast<std::size_t>(t), s);
    } catch (const MeshingError&) {
#pragma omp critical
      {
        failed = true;
        if (bad < 0 || t < bad) bad = t;
      }
    }
  }
  if (failed) throw MeshingError("degenerate or inverted triangle " + std::to_string(bad));
  return finish(mesh, s);
}

DiscreteOperators assemble_serial(const Mesh& mesh) {
  ElementSlots s = make_slots(mesh);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) element(mesh, t, s);
  return finish(mesh, s);
}

int mesh_components(const Mesh& mesh) {
  std::vector<int> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& t : mesh.triangles)
    for (int i = 1; i < 3; ++i) parent[find(t[i])] = find(t[0]);
  int count = 0;
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++count;
  return count;
}

SpMat restrict_matrix(const SpMat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> row_map(a.rows(), -1), col_map(a.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<int>(j);
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      int r = row_map[it.row()], c = col_map[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SpMat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

Eigen::VectorXd extend_vector(const Eigen::VectorXd& v, const std::vector<int>& idx, int n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = v[i];
  return out;
}

}  // namespace speclab
