#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "speclab/mesh.hpp"

namespace speclab {

using SpMat = Eigen::SparseMatrix<double>;

struct DiscreteOperators {
  SpMat stiffness;      // int grad phi_i . grad phi_j
  SpMat mass;           // int phi_i phi_j
  SpMat boundary_mass;  // boundary integral of phi_i phi_j
  Eigen::VectorXd load; // int phi_i
  std::vector<int> interior;
  std::vector<int> boundary;
  int components = 1;
  double h = 0.0;
};

// Linear-element forms. Element contributions are computed in parallel and
// reduced in triangle order, so the result matches assemble_serial bit for bit.
DiscreteOperators assemble(const Mesh& mesh);
DiscreteOperators assemble_serial(const Mesh& mesh);

// Connected components of the vertex graph.
int mesh_components(const Mesh& mesh);

// Submatrix on the given rows and columns.
SpMat restrict_matrix(const SpMat& a, const std::vector<int>& rows, const std::vector<int>& cols);
Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const std::vector<int>& idx);
Eigen::VectorXd extend_vector(const Eigen::VectorXd& v, const std::vector<int>& idx, int n);

}  // namespace speclab
