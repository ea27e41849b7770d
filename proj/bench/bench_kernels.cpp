// Serial reference kernels against their OpenMP versions. Set OPTRESP_THREADS
// (or OMP_NUM_THREADS) to choose the thread count of the parallel variants.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "optresp/generators.hpp"
#include "optresp/kernels.hpp"
#include "optresp/rng.hpp"

using namespace optresp;

namespace {

const ResponseInstance& instance_of(std::int64_t n) {
  static std::vector<std::pair<std::int64_t, ResponseInstance>> cache;
  for (const auto& [size, inst] : cache) {
    if (size == n) return inst;
  }
  ErdosRenyiParams prm;
  prm.n = static_cast<std::size_t>(n);
  prm.edge_prob = 8.0 / static_cast<double>(n);
  cache.emplace_back(n, erdos_renyi_instance(prm, 11));
  return cache.back().second;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

template <auto Kernel>
void BM_jor(benchmark::State& state) {
  const auto& g = instance_of(state.range(0)).graph;
  const auto in = random_vector(g.num_nodes(), 1);
  std::vector<double> out(g.num_nodes());
  for (auto _ : state) {
    Kernel(g, 0.5, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}

template <auto Kernel>
void BM_spread(benchmark::State& state) {
  const auto& inst = instance_of(state.range(0));
  const auto in = random_vector(inst.num_nodes(), 2);
  std::vector<double> out(inst.num_nodes());
  for (auto _ : state) {
    Kernel(inst.graph, inst.p, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.graph.num_edges()));
}

template <auto Kernel>
void BM_sis(benchmark::State& state) {
  const auto& inst = instance_of(state.range(0));
  const auto in = random_vector(inst.num_nodes(), 3);
  std::vector<double> out(inst.num_nodes());
  for (auto _ : state) {
    Kernel(inst.graph, inst.p, 0.2, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.graph.num_edges()));
}

template <auto Kernel>
void BM_edge_distances(benchmark::State& state) {
  const auto& g = instance_of(state.range(0)).graph;
  constexpr std::size_t kVectors = 10;
  const auto vecs = random_vector(g.num_nodes() * kVectors, 4);
  std::vector<double> rho(g.num_edges());
  for (auto _ : state) {
    Kernel(g, vecs, kVectors, 2.0, rho);
    benchmark::DoNotOptimize(rho.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}

#define SIZES RangeMultiplier(8)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond)

BENCHMARK(BM_jor<kernels::serial::jor_apply>)->Name("jor/serial")->SIZES;
BENCHMARK(BM_jor<kernels::parallel::jor_apply>)->Name("jor/parallel")->SIZES;
BENCHMARK(BM_spread<kernels::serial::spread_apply>)->Name("spread/serial")->SIZES;
BENCHMARK(BM_spread<kernels::parallel::spread_apply>)->Name("spread/parallel")->SIZES;
BENCHMARK(BM_sis<kernels::serial::sis_apply>)->Name("sis/serial")->SIZES;
BENCHMARK(BM_sis<kernels::parallel::sis_apply>)->Name("sis/parallel")->SIZES;
BENCHMARK(BM_edge_distances<kernels::serial::edge_distances>)->Name("edge_distances/serial")->SIZES;
BENCHMARK(BM_edge_distances<kernels::parallel::edge_distances>)->Name("edge_distances/parallel")->SIZES;

}  // namespace

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
