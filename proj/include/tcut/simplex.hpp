#pragma once

#include "tcut/linalg.hpp"

namespace tcut {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vector x;
};

struct SimplexOptions {
  double tolerance = 1e-11;
  int maxPivots = 100000;
};

/// minimize c^T x  subject to  A x = b, x >= 0.
///
/// Dense two-phase tableau simplex. Meant for problems with few rows and many
/// columns (the grid and hull LPs have at most 13 rows).
LpResult minimize_standard_form(const Matrix& a, const Vector& b, const Vector& c,
                                const SimplexOptions& opts = {});

}  // namespace tcut
