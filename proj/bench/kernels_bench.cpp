#include <benchmark/benchmark.h>

#include <map>

#include "unlearn/data.hpp"
#include "unlearn/kernels.hpp"
#include "unlearn/leverage.hpp"
#include "unlearn/unlearn.hpp"

using namespace unlearn;

namespace {

const Dataset& dataset(std::size_t n, std::size_t d) {
  static std::map<std::pair<std::size_t, std::size_t>, Dataset> cache;
  auto it = cache.find({n, d});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, d), gen_synthetic_sparse(n, d, 1.0, n * 31 + d)).first;
  return it->second;
}

template <bool Parallel>
void BM_Gram(benchmark::State& state) {
  const Dataset& data = dataset(state.range(0), state.range(1));
  for (auto _ : state) {
    Matrix g = Parallel ? kernels::gram(data.x(), {}, kDefaultLambda)
                        : kernels::serial::gram(data.x(), {}, kDefaultLambda);
    benchmark::DoNotOptimize(g.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Whiten(benchmark::State& state) {
  const Dataset& data = dataset(state.range(0), state.range(1));
  const Cholesky factor(kernels::gram(data.x(), {}, kDefaultLambda));
  for (auto _ : state) {
    Matrix z = Parallel ? kernels::whiten_rows(data.x(), factor) : kernels::serial::whiten_rows(data.x(), factor);
    benchmark::DoNotOptimize(z.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Outer(benchmark::State& state) {
  const Dataset& data = dataset(state.range(0), state.range(1));
  for (auto _ : state) {
    Matrix h = Parallel ? kernels::outer_rows(data.x()) : kernels::serial::outer_rows(data.x());
    benchmark::DoNotOptimize(h.data().data());
  }
}

void BM_Unlearn(benchmark::State& state, Method method) {
  const std::size_t n = state.range(0), d = state.range(1), k = state.range(2);
  const Dataset& data = dataset(n, d);
  const FullFit full = fit_full(data, kDefaultLambda);
  const HatState hat(data, full, HatMode::eager);
  const DeletionRequest req(sample_indices(n, k, 1), n);
  for (auto _ : state) {
    UnlearnResult r = run_method(method, data, req, full, &hat);
    benchmark::DoNotOptimize(r.theta.data());
  }
}

}  // namespace

BENCHMARK(BM_Gram<false>)->Name("gram/serial")->Args({4000, 200})->Args({20000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gram<true>)->Name("gram/omp")->Args({4000, 200})->Args({20000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Whiten<false>)->Name("whiten/serial")->Args({4000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Whiten<true>)->Name("whiten/omp")->Args({4000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Outer<false>)->Name("outer/serial")->Args({1000, 50})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Outer<true>)->Name("outer/omp")->Args({1000, 50})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Unlearn, retrain, Method::retrain)->Args({10000, 200, 10})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Unlearn, influence, Method::influence)->Args({10000, 200, 10})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Unlearn, residual, Method::residual)
    ->Args({10000, 200, 10})
    ->Args({10000, 200, 40})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
