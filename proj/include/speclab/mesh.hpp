#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "speclab/geometry.hpp"

namespace speclab {

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;      // counterclockwise
  std::vector<std::array<int, 2>> boundary_edges;  // domain on the left
  std::vector<int> boundary_loop;                  // loop index per boundary edge (all_loops order)
  double h = 0.0;
};

struct MeshingOptions {
  double min_angle_deg = 21.0;
  int max_vertices = 400000;
};

// Conforming Delaunay triangulation of the domain with target edge length h.
Mesh triangulate(const Domain& d, double h, const MeshingOptions& opts = {});

// Red refinement: every triangle split into four through edge midpoints.
Mesh refine_uniform(const Mesh& m);

struct MeshStats {
  int n_vertices = 0;
  int n_triangles = 0;
  int n_boundary_edges = 0;
  double min_angle_deg = 0.0;
  double max_edge = 0.0;
  double area = 0.0;
};

MeshStats mesh_stats(const Mesh& m);

// Sorted indices of vertices on boundary edges.
std::vector<int> boundary_vertices(const Mesh& m);

void write_off(const Mesh& m, std::ostream& out);
void export_off(const Mesh& m, const std::string& path);

}  // namespace speclab
