#include <benchmark/benchmark.h>

#include <vector>

#include "simiter/kernels.hpp"
#include "simiter/sketch.hpp"

using namespace simiter;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return gaussian_matrix(rows, cols, rng);
}

// A (n x n) times a thin block (n x 16), the shape used by the iteration.
template <void (*Kernel)(const Matrix&, const Matrix&, Matrix&)>
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  const Matrix b = random_matrix(n, 16, 2);
  Matrix out(n, 16);
  for (auto _ : state) {
    Kernel(a, b, out);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * 16));
}

template <void (*Kernel)(const Matrix&, const Matrix&, Matrix&)>
void BM_MatmulAtB(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  const Matrix b = random_matrix(n, 16, 2);
  Matrix out(n, 16);
  for (auto _ : state) {
    Kernel(a, b, out);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * 16));
}

template <void (*Kernel)(const Matrix&, std::span<const double>, std::span<double>)>
void BM_Matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    Kernel(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

} // namespace

BENCHMARK(BM_Matmul<kernels::serial::matmul>)->Name("matmul/serial")->Arg(200)->Arg(800);
BENCHMARK(BM_Matmul<kernels::parallel::matmul>)->Name("matmul/parallel")->Arg(200)->Arg(800);
BENCHMARK(BM_MatmulAtB<kernels::serial::matmul_at_b>)->Name("matmul_at_b/serial")->Arg(200)->Arg(800);
BENCHMARK(BM_MatmulAtB<kernels::parallel::matmul_at_b>)->Name("matmul_at_b/parallel")->Arg(200)->Arg(800);
BENCHMARK(BM_Matvec<kernels::serial::matvec>)->Name("matvec/serial")->Arg(400)->Arg(1600);
BENCHMARK(BM_Matvec<kernels::parallel::matvec>)->Name("matvec/parallel")->Arg(400)->Arg(1600);
BENCHMARK(BM_Matvec<kernels::serial::matvec_t>)->Name("matvec_t/serial")->Arg(400)->Arg(1600);
BENCHMARK(BM_Matvec<kernels::parallel::matvec_t>)->Name("matvec_t/parallel")->Arg(400)->Arg(1600);

BENCHMARK_MAIN();
