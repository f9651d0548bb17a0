#pragma once

#include <Eigen/Dense>

namespace tcut {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Matrix exponential by scaling and squaring with a Pade approximant.
Matrix expm(const Matrix& a);

/// 2-norm condition number of `m` after scaling every row and column to unit
/// max-abs. Column and row scalings do not change the solution set of the
/// cone and collocation systems, so this is the meaningful degeneracy measure.
double equilibrated_condition(const Matrix& m);

}  // namespace tcut
