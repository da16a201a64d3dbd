// Microbenchmarks over ring graphs with constant 3-dimensional stalks: big
// enough to exercise assembly and the SVD, small enough to run in seconds.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "sheaflab/sections.hpp"
#include "sheaflab/sheaf.hpp"

namespace {

using namespace sheaflab;

constexpr int kDim = 3;

Sheaf ring_sheaf(int nodes) {
  std::vector<std::string> ids;
  std::vector<GraphEdge> edges;
  for (int i = 0; i < nodes; ++i) ids.push_back("n" + std::to_string(i));
  for (int i = 0; i < nodes; ++i) {
    edges.push_back({"e" + std::to_string(i), ids[std::size_t(i)],
                     ids[std::size_t((i + 1) % nodes)]});
  }
  Complex cx = from_graph(ids, edges);

  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::map<std::string, int> dims;
  std::vector<RestrictionMap> maps;
  for (const Cell& c : cx.cells()) dims[c.id] = kDim;
  for (const CoveringRelation& rel : cx.relations()) {
    Eigen::MatrixXd m(kDim, kDim);
    for (int r = 0; r < kDim; ++r)
      for (int col = 0; col < kDim; ++col) m(r, col) = entry(rng);
    maps.push_back({rel, std::move(m)});
  }
  return build_sheaf(std::move(cx), std::move(dims), std::move(maps));
}

void bm_assemble_coboundary(benchmark::State& state) {
  Sheaf s = ring_sheaf(int(state.range(0)));
  for (auto _ : state) {
    CoboundaryOperator delta = assemble_coboundary(s);
    benchmark::DoNotOptimize(delta.matrix().data());
  }
}
BENCHMARK(bm_assemble_coboundary)->Arg(16)->Arg(64)->Arg(256);

void bm_global_sections(benchmark::State& state) {
  Sheaf s = ring_sheaf(int(state.range(0)));
  for (auto _ : state) {
    GlobalSectionBasis basis = global_sections(s);
    benchmark::DoNotOptimize(basis.dimension());
  }
}
BENCHMARK(bm_global_sections)->Arg(16)->Arg(64)->Arg(128);

void bm_nullspace(benchmark::State& state) {
  Sheaf s = ring_sheaf(int(state.range(0)));
  Eigen::MatrixXd delta = assemble_coboundary(s).matrix();
  for (auto _ : state) {
    TolerancedBasis basis = nullspace_basis(delta, kDefaultRelTol);
    benchmark::DoNotOptimize(basis.dimension());
  }
}
BENCHMARK(bm_nullspace)->Arg(16)->Arg(64)->Arg(128);

void bm_consistency_radius(benchmark::State& state) {
  Sheaf s = ring_sheaf(int(state.range(0)));
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  NodeAssignment a;
  for (const std::string& id : s.complex().maximal_cells()) {
    Eigen::VectorXd v(kDim);
    for (int i = 0; i < kDim; ++i) v[i] = coord(rng);
    a.values[id] = v;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(consistency_radius(s, a));
  }
}
BENCHMARK(bm_consistency_radius)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
