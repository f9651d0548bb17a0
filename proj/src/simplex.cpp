#include "tcut/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tcut {
namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class TableauSolver {
 public:
  TableauSolver(Tableau t, std::vector<Eigen::Index> basis, const SimplexOptions& opts)
      : t_(std::move(t)), basis_(std::move(basis)), opts_(opts) {}

  // Last row holds reduced costs, last column the right-hand side. Columns at
  // or beyond `limit` never enter.
  LpStatus run(Eigen::Index limit) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index rhs = t_.cols() - 1;
    int degenerate = 0;
    for (int pivots = 0; pivots < opts_.maxPivots; ++pivots) {
      const bool bland = degenerate > 50;
      Eigen::Index enter = -1;
      double most = -opts_.tolerance;
      for (Eigen::Index j = 0; j < limit; ++j) {
        const double rc = t_(m, j);
        if (rc < most) {
          enter = j;
          most = rc;
          if (bland) break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a > opts_.tolerance) {
          const double r = t_(i, rhs) / a;
          if (r < ratio - 1e-15 || (r <= ratio + 1e-15 && leave >= 0 && basis_[i] < basis_[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      degenerate = ratio <= opts_.tolerance ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  Tableau& tableau() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }

 private:
  Tableau t_;
  std::vector<Eigen::Index> basis_;
  SimplexOptions opts_;
};

}  // namespace

LpResult minimize_standard_form(const Matrix& a, const Vector& b, const Vector& c,
                                const SimplexOptions& opts) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::Index rhs = n + m;

  // Phase I: artificials n..n+m-1, minimize their sum.
  Tableau t = Tableau::Zero(m + 1, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double flip = b(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = flip * a.row(i);
    t(i, n + i) = 1.0;
    t(i, rhs) = flip * b(i);
  }
  for (Eigen::Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) t(m, n + i) = 0.0;

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  TableauSolver solver(std::move(t), std::move(basis), opts);
  const LpStatus phase1 = solver.run(n);
  LpResult result;
  if (phase1 == LpStatus::IterationLimit) {
    result.status = phase1;
    return result;
  }
  auto& tab = solver.tableau();
  auto& bas = solver.basis();
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (-tab(m, rhs) > 1e-9 * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are redundant and get zeroed.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (bas[static_cast<std::size_t>(i)] < n) continue;
    Eigen::Index col = -1;
    double best = opts.tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab(i, j)) > best) {
        best = std::abs(tab(i, j));
        col = j;
      }
    }
    if (col >= 0) {
      solver.pivot(i, col);
    } else {
      tab.row(i).setZero();
    }
  }

  // Phase II objective.
  tab.row(m).setZero();
  tab.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto col = bas[static_cast<std::size_t>(i)];
    if (col < n && tab(m, col) != 0.0) tab.row(m) -= tab(m, col) * tab.row(i);
  }
  const LpStatus phase2 = solver.run(n);
  result.status = phase2;
  result.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto col = bas[static_cast<std::size_t>(i)];
    if (col < n) result.x(col) = tab(i, rhs);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace tcut
