#include <benchmark/benchmark.h>

#include "kmsa/data_io.hpp"
#include "kmsa/eigsolver.hpp"
#include "kmsa/graphs.hpp"
#include "kmsa/kernels.hpp"
#include "kmsa/optimizer.hpp"

#include <random>

namespace bm = benchmark;

namespace {

kmsa::MultiviewDataset fixture(int per_class) {
  kmsa::SyntheticSpec spec;
  spec.per_class = per_class;
  return kmsa::generate_synthetic(spec);
}

kmsa::Matrix random_spd(kmsa::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  kmsa::Matrix A(n, n);
  for (kmsa::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
  return A * A.transpose() + static_cast<double>(n) * kmsa::Matrix::Identity(n, n);
}

}  // namespace

static void BM_GaussianKernel(bm::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)));
  const auto spec = kmsa::KernelSpec::gaussian(1.0);
  for (auto _ : state) {
    kmsa::Matrix K = kmsa::build_kernel(data.views.front(), spec, false);
    bm::DoNotOptimize(K.data());
  }
  state.SetComplexityN(data.num_samples());
}
BENCHMARK(BM_GaussianKernel)->Arg(20)->Arg(50)->Arg(100)->Complexity();

static void BM_GeneralizedEigh(bm::State& state) {
  const kmsa::Index n = state.range(0);
  const kmsa::Matrix H = random_spd(n, 1) - 2.0 * random_spd(n, 2);
  const kmsa::Matrix M = random_spd(n, 3);
  for (auto _ : state) {
    auto r = kmsa::generalized_eigh(H, M, 5);
    bm::DoNotOptimize(r.vectors.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_GeneralizedEigh)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_SparseCodes(bm::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kmsa::Matrix W = kmsa::sparse_codes(data.views.front(), 0.1, 1000);
    bm::DoNotOptimize(W.data());
  }
}
BENCHMARK(BM_SparseCodes)->Arg(10)->Arg(20);

static void BM_Fit(bm::State& state) {
  const auto data = fixture(static_cast<int>(state.range(0)));
  kmsa::KmsaConfig cfg;
  cfg.graph = {state.range(1) ? kmsa::GraphRecipe::lda() : kmsa::GraphRecipe::pca()};
  for (auto _ : state) {
    kmsa::KmsaModel model = kmsa::fit(data, cfg);
    bm::DoNotOptimize(model.alpha.data());
  }
  state.counters["samples"] = static_cast<double>(data.num_samples());
}
BENCHMARK(BM_Fit)->Args({20, 0})->Args({20, 1})->Args({50, 0})->Args({50, 1})
    ->Unit(bm::kMillisecond);

BENCHMARK_MAIN();
