#include "speclab/eigensolver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>

#include "speclab/rng.hpp"

namespace speclab {
namespace {

using Factor = Eigen::SimplicialLDLT<SpMat>;

void factorize(Factor& f, const SpMat& a, const char* what) {
  f.compute(a);
  if (f.info() != Eigen::Success) throw SolverError(std::string("factorization failed: ") + what);
  if ((f.vectorD().array() <= 0.0).any()) throw SolverError(std::string("matrix not positive definite: ") + what);
}

void check_count(int k) {
  if (k < 1 || k > kMaxEigenCount) throw ArgumentError("eigenvalue count must be in [1, 6]");
}

// Modified Gram-Schmidt in the B inner product, applied twice. Columns that
// collapse are replaced by fresh random vectors.
void b_orthonormalize(Eigen::MatrixXd& x, const SpMat& b, const Eigen::MatrixXd* deflate, Rng& rng) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (int attempt = 0;; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        if (deflate)
          for (Eigen::Index d = 0; d < deflate->cols(); ++d) {
            Eigen::VectorXd bd = b * deflate->col(d);
            x.col(j) -= bd.dot(x.col(j)) * deflate->col(d);
          }
        for (Eigen::Index i = 0; i < j; ++i) {
          Eigen::VectorXd bi = b * x.col(i);
          x.col(j) -= bi.dot(x.col(j)) * x.col(i);
        }
      }
      double nrm = std::sqrt(std::max(0.0, x.col(j).dot(b * x.col(j))));
      if (nrm > 1e-300 && std::isfinite(nrm)) {
        x.col(j) /= nrm;
        break;
      }
      if (attempt > 5) throw SolverError("subspace collapsed");
      for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, j) = rng.uniform(-1.0, 1.0);
    }
  }
}

struct SubspaceResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;
  int iterations = 0;
};

// Lowest k eigenpairs of A x = theta B x, A and B symmetric positive definite,
// by block inverse iteration with Rayleigh-Ritz.
SubspaceResult subspace_iteration(const SpMat& a, const SpMat& b, int k, const Eigen::MatrixXd* deflate,
                                  const SolverOptions& opts) {
  const Eigen::Index n = a.rows();
  Eigen::Index avail = n - (deflate ? deflate->cols() : 0);
  if (avail < k) throw ArgumentError("mesh too coarse for the requested eigenvalue count");
  Eigen::Index p = std::min<Eigen::Index>(avail, k + 8);
  Factor fac;
  factorize(fac, a, "shift-invert operator");
  auto inf_norm = [](const SpMat& m) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it) rows[it.row()] += std::abs(it.value());
    return rows.maxCoeff();
  };
  const double norm_a = inf_norm(a), norm_b = inf_norm(b);
  Rng rng(opts.seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index r = 0; r < n; ++r) x(r, j) = rng.uniform(-1.0, 1.0);

  SubspaceResult out;
  for (int it = 0; it < opts.max_iterations; ++it) {
    b_orthonormalize(x, b, deflate, rng);
    Eigen::MatrixXd ax = a * x;
    Eigen::MatrixXd h = x.transpose() * ax;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    x = x * es.eigenvectors();
    ax = ax * es.eigenvectors();
    Eigen::MatrixXd bx = b * x;
    bool done = true;
    out.residuals.assign(k, 0.0);
    for (int i = 0; i < k; ++i) {
      double theta = es.eigenvalues()[i];
      double res = (ax.col(i) - theta * bx.col(i)).norm();
      double r = res / std::max(ax.col(i).norm(), 1e-300);
      double backward = res / ((norm_a + std::abs(theta) * norm_b) * x.col(i).norm());
      out.residuals[i] = r;
      if (!(r <= opts.tolerance || backward <= 1e-3 * opts.tolerance)) done = false;
    }
    if (done) {
      out.values = es.eigenvalues().head(k);
      out.vectors = x.leftCols(k);
      out.iterations = it + 1;
      return out;
    }
    for (Eigen::Index j = 0; j < p; ++j) x.col(j) = fac.solve(bx.col(j));
  }
  throw SolverError("eigen iteration did not converge in " + std::to_string(opts.max_iterations) +
                    " iterations; worst relative residual " +
                    std::to_string(*std::max_element(out.residuals.begin(), out.residuals.end())));
}

double spec_residual(const SpMat& k, const SpMat& m, const Eigen::VectorXd& u, double lambda) {
  return (k * u - lambda * (m * u)).norm() / u.norm();
}

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0) v = -v;
}

}  // namespace

EigResult dirichlet_eigs(const DiscreteOperators& ops, int k, const SolverOptions& opts) {
  check_count(k);
  if (ops.interior.empty()) throw ArgumentError("mesh has no interior vertices");
  SpMat ki = restrict_matrix(ops.stiffness, ops.interior, ops.interior);
  SpMat mi = restrict_matrix(ops.mass, ops.interior, ops.interior);
  auto sub = subspace_iteration(ki, mi, k, nullptr, opts);
  EigResult r;
  r.h = ops.h;
  r.iterations = sub.iterations;
  const int n = static_cast<int>(ops.load.size());
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd u = sub.vectors.col(i);
    r.values.push_back(sub.values[i]);
    r.residuals.push_back(spec_residual(ki, mi, u, sub.values[i]));
    Eigen::VectorXd full = extend_vector(u, ops.interior, n);
    fix_sign(full);
    r.vectors.push_back(full);
  }
  return r;
}

EigResult neumann_eigs(const DiscreteOperators& ops, int k, const SolverOptions& opts) {
  check_count(k);
  SpMat shifted = ops.stiffness + ops.mass;
  const Eigen::Index n = ops.load.size();
  Eigen::MatrixXd constant = Eigen::MatrixXd::Ones(n, 1);
  constant /= std::sqrt(ops.load.sum());
  auto sub = subspace_iteration(shifted, ops.mass, k, &constant, opts);
  EigResult r;
  r.h = ops.h;
  r.iterations = sub.iterations;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd u = sub.vectors.col(i);
    double mu = sub.values[i] - 1.0;
    fix_sign(u);
    r.values.push_back(mu);
    r.residuals.push_back(spec_residual(ops.stiffness, ops.mass, u, mu));
    r.vectors.push_back(u);
  }
  return r;
}

EigResult robin_eig1(const DiscreteOperators& ops, double alpha, const SolverOptions& opts) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("Robin parameter must be positive");
  SpMat a = ops.stiffness + alpha * ops.boundary_mass;
  auto sub = subspace_iteration(a, ops.mass, 1, nullptr, opts);
  EigResult r;
  r.h = ops.h;
  r.iterations = sub.iterations;
  Eigen::VectorXd u = sub.vectors.col(0);
  fix_sign(u);
  r.values.push_back(sub.values[0]);
  r.residuals.push_back(spec_residual(a, ops.mass, u, sub.values[0]));
  r.vectors.push_back(u);
  return r;
}

Eigen::MatrixXd dtn_matrix(const DiscreteOperators& ops, bool parallel) {
  const auto& bnd = ops.boundary;
  const auto& in = ops.interior;
  if (bnd.empty()) throw ArgumentError("mesh has no boundary");
  if (static_cast<int>(bnd.size()) > kMaxSteklovBoundary)
    throw ArgumentError("boundary index count " + std::to_string(bnd.size()) + " exceeds the dense cap of " +
                        std::to_string(kMaxSteklovBoundary));
  Eigen::MatrixXd kbb = Eigen::MatrixXd(restrict_matrix(ops.stiffness, bnd, bnd));
  if (in.empty()) return kbb;
  SpMat kii = restrict_matrix(ops.stiffness, in, in);
  SpMat kib = restrict_matrix(ops.stiffness, in, bnd);
  Factor fac;
  factorize(fac, kii, "interior stiffness");
  const long nb = static_cast<long>(bnd.size());
  Eigen::MatrixXd ext(in.size(), nb);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (long j = 0; j < nb; ++j) {
    Eigen::VectorXd rhs = Eigen::VectorXd(kib.col(j));
    ext.col(j) = fac.solve(rhs);
  }
  Eigen::MatrixXd s = kbb - Eigen::MatrixXd(kib.transpose()) * ext;
  return 0.5 * (s + s.transpose());
}

EigResult steklov_eigs(const DiscreteOperators& ops, int k, bool parallel) {
  check_count(k);
  const auto& bnd = ops.boundary;
  const auto& in = ops.interior;
  if (static_cast<int>(bnd.size()) < k + 2) throw ArgumentError("too few boundary vertices");
  Eigen::MatrixXd s = dtn_matrix(ops, parallel);
  Eigen::MatrixXd bd = Eigen::MatrixXd(restrict_matrix(ops.boundary_mass, bnd, bnd));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, bd);
  if (es.info() != Eigen::Success) throw SolverError("dense Steklov eigensolve failed");

  SpMat kii = restrict_matrix(ops.stiffness, in, in);
  SpMat kib = restrict_matrix(ops.stiffness, in, bnd);
  Factor fac;
  if (!in.empty()) factorize(fac, kii, "interior stiffness");
  const int n = static_cast<int>(ops.load.size());
  EigResult r;
  r.h = ops.h;
  for (int i = 1; i <= k; ++i) {
    double sigma = es.eigenvalues()[i];
    Eigen::VectorXd g = es.eigenvectors().col(i);
    g /= std::sqrt(g.dot(bd * g));
    Eigen::VectorXd full = extend_vector(g, bnd, n);
    if (!in.empty()) {
      Eigen::VectorXd ui = -fac.solve(kib * g);
      for (std::size_t j = 0; j < in.size(); ++j) full[in[j]] = ui[j];
      r.interior_residuals.push_back((kii * ui + kib * g).norm() / g.norm());
    } else {
      r.interior_residuals.push_back(0.0);
    }
    r.residuals.push_back((s * g - sigma * (bd * g)).norm() / g.norm());
    fix_sign(full);
    r.values.push_back(sigma);
    r.vectors.push_back(full);
  }
  return r;
}

TorsionResult torsion(const DiscreteOperators& ops) {
  if (ops.interior.empty()) throw ArgumentError("mesh has no interior vertices");
  SpMat kii = restrict_matrix(ops.stiffness, ops.interior, ops.interior);
  Factor fac;
  factorize(fac, kii, "interior stiffness");
  Eigen::VectorXd wi = fac.solve(restrict_vector(ops.load, ops.interior));
  TorsionResult t;
  t.w = extend_vector(wi, ops.interior, static_cast<int>(ops.load.size()));
  t.value = ops.load.dot(t.w);
  t.min_w = wi.minCoeff();
  if (t.min_w < 0.0) {
    if (t.min_w < -1e-12) throw SolverError("torsion function negative beyond 1e-12");
    t.positivity_warning = true;
  }
  return t;
}

namespace {

struct QuadPoint {
  double l0, l1, l2, w;
};

const std::vector<QuadPoint>& degree5_rule() {
  static const std::vector<QuadPoint> rule = [] {
    const double a1 = 0.059715871789769820, b1 = 0.470142064105115090, w1 = 0.132394152788506181;
    const double a2 = 0.797426985353087322, b2 = 0.101286507323456339, w2 = 0.125939180544827153;
    return std::vector<QuadPoint>{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225}, {a1, b1, b1, w1}, {b1, a1, b1, w1},
                                  {b1, b1, a1, w1},                   {a2, b2, b2, w2}, {b2, a2, b2, w2},
                                  {b2, b2, a2, w2}};
  }();
  return rule;
}

double tri_area(const Mesh& m, const std::array<int, 3>& t) {
  return 0.5 * cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
}

// Gradient of the discrete L^q functional / q: int |u|^{q-2} u phi_i.
Eigen::VectorXd lq_gradient(const Mesh& mesh, const Eigen::VectorXd& u, double q) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(u.size());
  for (const auto& t : mesh.triangles) {
    double area = tri_area(mesh, t);
    for (const auto& qp : degree5_rule()) {
      double l[3] = {qp.l0, qp.l1, qp.l2};
      double v = l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
      double f = v == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v), q - 1.0), v);
      for (int i = 0; i < 3; ++i) g[t[i]] += area * qp.w * f * l[i];
    }
  }
  return g;
}

}  // namespace

double lq_integral(const Mesh& mesh, const Eigen::VectorXd& u, double q) {
  double s = 0.0;
  for (const auto& t : mesh.triangles) {
    double area = tri_area(mesh, t);
    for (const auto& qp : degree5_rule()) {
      double v = qp.l0 * u[t[0]] + qp.l1 * u[t[1]] + qp.l2 * u[t[2]];
      s += area * qp.w * std::pow(std::abs(v), q);
    }
  }
  return s;
}

SemilinearResult semilinear_eig(const Mesh& mesh, const DiscreteOperators& ops, double q, const SolverOptions& opts) {
  if (!(q >= 1.0) || q > kMaxSemilinearExponent)
    throw ArgumentError("semilinear exponent must lie in [1, " + std::to_string(kMaxSemilinearExponent) + "]");
  SpMat kii = restrict_matrix(ops.stiffness, ops.interior, ops.interior);
  Factor fac;
  factorize(fac, kii, "interior stiffness");
  const int n = static_cast<int>(ops.load.size());

  auto normalize = [&](Eigen::VectorXd& u) { u /= std::pow(lq_integral(mesh, u, q), 1.0 / q); };
  auto run = [&](Eigen::VectorXd u, std::vector<double>& history) {
    u = u.cwiseAbs();
    normalize(u);
    double prev = u.dot(ops.stiffness * u);
    history.push_back(prev);
    for (int it = 0; it < opts.max_iterations; ++it) {
      Eigen::VectorXd rhs = restrict_vector(lq_gradient(mesh, u, q), ops.interior);
      u = extend_vector(fac.solve(rhs), ops.interior, n);
      normalize(u);
      double value = u.dot(ops.stiffness * u);
      history.push_back(value);
      if (std::abs(value - prev) < 1e-10 * std::abs(value)) return std::make_pair(value, u);
      prev = value;
    }
    throw SolverError("semilinear iteration did not converge for q = " + std::to_string(q) +
                      "; last values " + std::to_string(history[history.size() - 2]) + ", " +
                      std::to_string(history.back()));
  };

  SemilinearResult res;
  res.q = q;
  res.h = ops.h;
  auto tor = torsion(ops);
  auto [v1, u1] = run(tor.w, res.history_from_torsion);
  auto eig = dirichlet_eigs(ops, 1, opts);
  auto [v2, u2] = run(eig.vectors[0], res.history_from_eigenvector);
  res.torsion_start_won = v1 <= v2;
  res.value = res.torsion_start_won ? v1 : v2;
  res.u = res.torsion_start_won ? u1 : u2;
  return res;
}

double richardson(double coarse, double fine) { return fine + (fine - coarse) / 3.0; }

double richardson_error(double coarse, double fine) { return std::abs(fine - coarse) / 3.0; }

void attach_richardson(EigResult& fine, const EigResult& coarse) {
  if (coarse.values.size() != fine.values.size()) throw ArgumentError("mismatched eigenvalue counts");
  fine.extrapolated.clear();
  for (std::size_t i = 0; i < fine.values.size(); ++i)
    fine.extrapolated.push_back(richardson(coarse.values[i], fine.values[i]));
}

}  // namespace speclab
