#pragma once

#include "tcut/linalg.hpp"
#include "tcut/spectral.hpp"

namespace tcut {

/// Coefficient vector over a shared Basis.
struct Quasipolynomial {
  Vector coefficients;
};

double eval(const Quasipolynomial& p, const Basis& basis, double t);
double eval_derivative(const Quasipolynomial& p, const Basis& basis, double t);

/// u(t) = (phi_1(t), ..., phi_n(t)).
Vector moment_vector(const Basis& basis, double t);

struct SearchConfig {
  int gridPerDim = 64;
  int gridMin = 1024;
  // Abscissa tolerance of the maximizer refinement, relative to max(1, T).
  double tTol = 1e-13;
  // Use the OpenMP grid kernel. Results are identical either way.
  bool parallel = true;
};

struct SupNormResult {
  double value = 0.0;
  double argmax = 0.0;
  int signAtMax = 1;
};

/// Number of grid points sup_norm scans on [0, T].
int sup_norm_grid_size(const Basis& basis, double horizon, const SearchConfig& cfg);

/// max_{t in [0, T]} |p(t)| by a uniform grid scan followed by refinement of
/// every local maximizer through a bracketed root of p'. Ties go to the
/// smallest t.
SupNormResult sup_norm(const Quasipolynomial& p, const Basis& basis, double horizon,
                       const SearchConfig& cfg = {});

}  // namespace tcut
