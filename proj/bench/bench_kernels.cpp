#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tcut/kernels.hpp"
#include "tcut/switching.hpp"

using namespace tcut;

namespace {

Matrix reference_a1() {
  Matrix a(2, 2);
  a << -0.3216, -1.0, 2.0, -0.3216;
  return a;
}

Matrix reference_a2() {
  Matrix a(2, 2);
  a << -0.3216, -2.0, 1.0, -0.3216;
  return a;
}

// Block diagonal matrix with distinct complex pairs, d = 2 * pairs.
Matrix test_matrix(int pairs) {
  Matrix a = Matrix::Zero(2 * pairs, 2 * pairs);
  for (int k = 0; k < pairs; ++k) {
    const double alpha = -0.3 - 0.2 * k;
    const double beta = 0.7 + 0.45 * k;
    a.block(2 * k, 2 * k, 2, 2) << alpha, -beta, beta, alpha;
  }
  return a;
}

std::vector<double> grid(int n, double horizon) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) ts[static_cast<std::size_t>(j)] = horizon * j / (n - 1);
  return ts;
}

kernels::Execution mode(const benchmark::State& st) {
  return st.range(0) ? kernels::Execution::Parallel : kernels::Execution::Serial;
}

void BM_EvaluateOnGrid(benchmark::State& st) {
  const Basis basis = build_basis(compute_spectrum(SystemMatrix(test_matrix(static_cast<int>(st.range(1))))));
  Vector coeffs = Vector::LinSpaced(static_cast<Eigen::Index>(basis.size()), 1.0, 2.0);
  const auto ts = grid(8192, 10.0);
  std::vector<double> out(ts.size());
  for (auto _ : st) {
    kernels::evaluate_on_grid(basis, coeffs, ts, out, mode(st));
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(ts.size()));
}
BENCHMARK(BM_EvaluateOnGrid)->ArgsProduct({{0, 1}, {1, 3, 6}})->ArgNames({"parallel", "pairs"});

void BM_SampleTrajectory(benchmark::State& st) {
  const Matrix a = test_matrix(static_cast<int>(st.range(1)));
  const Vector x0 = Vector::Ones(a.rows()).normalized();
  const auto ts = grid(2000, 20.0);
  for (auto _ : st) {
    Matrix pts = kernels::sample_trajectory(a, x0, ts, mode(st));
    benchmark::DoNotOptimize(pts.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(ts.size()));
}
BENCHMARK(BM_SampleTrajectory)->ArgsProduct({{0, 1}, {1, 3}})->ArgNames({"parallel", "pairs"});

void BM_SwitchingSearch(benchmark::State& st) {
  const SwitchedSystem sys({{"A1", SystemMatrix(reference_a1()), 1.0, 2.5},
                            {"A2", SystemMatrix(reference_a2()), 1.0, 2.5}});
  const std::vector<double> tcuts{1.4228338, 1.4228338};
  for (auto _ : st) {
    const SearchOutcome o = random_switching_search(sys, tcuts, 200, 50.0, 7, mode(st));
    benchmark::DoNotOptimize(o.worstGrowth);
  }
  st.SetItemsProcessed(st.iterations() * 200);
}
BENCHMARK(BM_SwitchingSearch)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
