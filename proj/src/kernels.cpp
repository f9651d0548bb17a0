#include "tcut/kernels.hpp"

#include <vector>

#include <omp.h>

namespace tcut::kernels {
namespace {

// Below this many points a parallel region costs more than it saves.
constexpr std::size_t kParallelGrain = 2048;

}  // namespace

void evaluate_on_grid_serial(const Basis& basis, const Vector& coeffs, std::span<const double> ts,
                             std::span<double> out) {
  std::vector<double> u(basis.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    basis.values(ts[j], u);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += coeffs(static_cast<Eigen::Index>(i)) * u[i];
    out[j] = acc;
  }
}

void evaluate_on_grid_parallel(const Basis& basis, const Vector& coeffs,
                               std::span<const double> ts, std::span<double> out) {
  const auto count = static_cast<long>(ts.size());
#pragma omp parallel if (ts.size() >= kParallelGrain)
  {
    std::vector<double> u(basis.size());
#pragma omp for schedule(static)
    for (long j = 0; j < count; ++j) {
      basis.values(ts[static_cast<std::size_t>(j)], u);
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) acc += coeffs(static_cast<Eigen::Index>(i)) * u[i];
      out[static_cast<std::size_t>(j)] = acc;
    }
  }
}

void evaluate_on_grid(const Basis& basis, const Vector& coeffs, std::span<const double> ts,
                      std::span<double> out, Execution exec) {
  if (exec == Execution::Parallel) {
    evaluate_on_grid_parallel(basis, coeffs, ts, out);
  } else {
    evaluate_on_grid_serial(basis, coeffs, ts, out);
  }
}

Matrix moment_matrix(const Basis& basis, std::span<const double> ts, Execution exec) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto count = static_cast<long>(ts.size());
  Matrix m(n, count);
#pragma omp parallel if (exec == Execution::Parallel && ts.size() >= kParallelGrain)
  {
    std::vector<double> u(basis.size());
#pragma omp for schedule(static)
    for (long j = 0; j < count; ++j) {
      basis.values(ts[static_cast<std::size_t>(j)], u);
      for (Eigen::Index i = 0; i < n; ++i) m(i, j) = u[static_cast<std::size_t>(i)];
    }
  }
  return m;
}

Matrix sample_trajectory_serial(const Matrix& a, const Vector& x0, std::span<const double> ts) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(ts.size()));
  for (std::size_t j = 0; j < ts.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = expm(ts[j] * a) * x0;
  }
  return out;
}

Matrix sample_trajectory_parallel(const Matrix& a, const Vector& x0, std::span<const double> ts) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(ts.size()));
  const auto count = static_cast<long>(ts.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < count; ++j) {
    out.col(j) = expm(ts[static_cast<std::size_t>(j)] * a) * x0;
  }
  return out;
}

Matrix sample_trajectory(const Matrix& a, const Vector& x0, std::span<const double> ts,
                         Execution exec) {
  return exec == Execution::Parallel ? sample_trajectory_parallel(a, x0, ts)
                                     : sample_trajectory_serial(a, x0, ts);
}

}  // namespace tcut::kernels
