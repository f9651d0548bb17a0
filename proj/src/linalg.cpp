#include "tcut/linalg.hpp"

#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace tcut {

Matrix expm(const Matrix& a) { return a.exp(); }

double equilibrated_condition(const Matrix& m) {
  Matrix s = m;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double r = s.row(i).cwiseAbs().maxCoeff();
    if (r > 0.0) s.row(i) /= r;
  }
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    const double c = s.col(j).cwiseAbs().maxCoeff();
    if (c > 0.0) s.col(j) /= c;
  }
  Eigen::JacobiSVD<Matrix> svd(s);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smallest = sv(sv.size() - 1);
  if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

}  // namespace tcut
