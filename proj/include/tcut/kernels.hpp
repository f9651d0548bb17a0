#pragma once

#include <span>

#include "tcut/linalg.hpp"
#include "tcut/spectral.hpp"

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both write every output slot independently, so results are
// bitwise identical regardless of thread count.
namespace tcut::kernels {

enum class Execution { Serial, Parallel };

/// out[j] = sum_i coeffs[i] * phi_i(ts[j])
void evaluate_on_grid_serial(const Basis& basis, const Vector& coeffs, std::span<const double> ts,
                             std::span<double> out);
void evaluate_on_grid_parallel(const Basis& basis, const Vector& coeffs, std::span<const double> ts,
                               std::span<double> out);
void evaluate_on_grid(const Basis& basis, const Vector& coeffs, std::span<const double> ts,
                      std::span<double> out, Execution exec);

/// Column j = u(ts[j]).
Matrix moment_matrix(const Basis& basis, std::span<const double> ts, Execution exec);

/// Column j = e^{ts[j] A} x0, each computed by its own matrix exponential.
Matrix sample_trajectory_serial(const Matrix& a, const Vector& x0, std::span<const double> ts);
Matrix sample_trajectory_parallel(const Matrix& a, const Vector& x0, std::span<const double> ts);
Matrix sample_trajectory(const Matrix& a, const Vector& x0, std::span<const double> ts,
                         Execution exec);

}  // namespace tcut::kernels
