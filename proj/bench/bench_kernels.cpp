#include <benchmark/benchmark.h>

#include <map>

#include "impactfield/impact.hpp"
#include "impactfield/kernels.hpp"

using namespace impactfield;

namespace {

const Graph& graph_of(std::size_t n) {
  static std::map<std::size_t, Graph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, generate_er(n, 5.0 / static_cast<double>(n - 1), false, 42)).first;
  }
  return it->second;
}

void BM_BfsSerial(benchmark::State& state) {
  const auto& g = graph_of(static_cast<std::size_t>(state.range(0)));
  DistanceMatrix dist(g.n());
  for (auto _ : state) {
    kernels::all_pairs_bfs_serial(g, dist);
    benchmark::DoNotOptimize(dist.row(0).data());
  }
}

void BM_BfsParallel(benchmark::State& state) {
  const auto& g = graph_of(static_cast<std::size_t>(state.range(0)));
  DistanceMatrix dist(g.n());
  for (auto _ : state) {
    kernels::all_pairs_bfs(g, dist);
    benchmark::DoNotOptimize(dist.row(0).data());
  }
}

struct SpectralFixture {
  DistanceMatrix dist;
  ModeSet modes;
  std::vector<kernels::SpectralTerm> terms;

  explicit SpectralFixture(std::size_t n) : dist(geodesic_distances(graph_of(n))) {
    const auto w = build_weight(graph_of(n), 0.875);
    modes = select_modes(decompose(w, ModeCount::top(2)), 0.875, 2);
    for (const auto& m : modes.modes) {
      terms.push_back({0.875 * m.eigenvalue, m.propagator_gain, &m.receive, &m.send});
    }
  }
};

void BM_SpectralSerial(benchmark::State& state) {
  const SpectralFixture f(static_cast<std::size_t>(state.range(0)));
  Eigen::MatrixXd out(f.dist.n(), f.dist.n());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::spectral_impact_serial(f.terms, f.dist, out));
}

void BM_SpectralParallel(benchmark::State& state) {
  const SpectralFixture f(static_cast<std::size_t>(state.range(0)));
  Eigen::MatrixXd out(f.dist.n(), f.dist.n());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::spectral_impact(f.terms, f.dist, out));
}

}  // namespace

BENCHMARK(BM_BfsSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BfsParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectralSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectralParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
