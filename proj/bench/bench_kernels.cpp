#include <benchmark/benchmark.h>

#include "speclab/eigensolver.hpp"
#include "speclab/mesh.hpp"
#include "speclab/rearrangement.hpp"
#include "speclab/shapes.hpp"

using namespace speclab;

namespace {

const Mesh& mesh_for(int index) {
  static const Mesh meshes[] = {triangulate(normalized(l_shape()), 0.04), triangulate(normalized(l_shape()), 0.02),
                                triangulate(normalized(l_shape()), 0.01)};
  return meshes[index];
}

void set_counters(benchmark::State& state, const Mesh& m) {
  state.counters["vertices"] = static_cast<double>(m.vertices.size());
  state.counters["triangles"] = static_cast<double>(m.triangles.size());
}

void BM_AssembleParallel(benchmark::State& state) {
  const Mesh& m = mesh_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(m));
  set_counters(state, m);
}

void BM_AssembleSerial(benchmark::State& state) {
  const Mesh& m = mesh_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_serial(m));
  set_counters(state, m);
}

void BM_DtnParallel(benchmark::State& state) {
  const Mesh& m = mesh_for(static_cast<int>(state.range(0)));
  const auto ops = assemble(m);
  for (auto _ : state) benchmark::DoNotOptimize(dtn_matrix(ops, true));
  set_counters(state, m);
}

void BM_DtnSerial(benchmark::State& state) {
  const Mesh& m = mesh_for(static_cast<int>(state.range(0)));
  const auto ops = assemble(m);
  for (auto _ : state) benchmark::DoNotOptimize(dtn_matrix(ops, false));
  set_counters(state, m);
}

std::vector<double> thresholds(const Eigen::VectorXd& u, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = u.maxCoeff() * (i + 0.5) / n;
  return t;
}

void BM_DistributionParallel(benchmark::State& state) {
  const Mesh& m = mesh_for(static_cast<int>(state.range(0)));
  const auto w = torsion(assemble(m)).w;
  const auto t = thresholds(w, 256);
  for (auto _ : state) benchmark::DoNotOptimize(distribution(w, m, t, true));
  set_counters(state, m);
}

void BM_DistributionSerial(benchmark::State& state) {
  const Mesh& m = mesh_for(static_cast<int>(state.range(0)));
  const auto w = torsion(assemble(m)).w;
  const auto t = thresholds(w, 256);
  for (auto _ : state) benchmark::DoNotOptimize(distribution(w, m, t, false));
  set_counters(state, m);
}

}  // namespace

BENCHMARK(BM_AssembleParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DtnParallel)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DtnSerial)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistributionParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistributionSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
