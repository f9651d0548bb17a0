#include "tcut/remez.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tcut/errors.hpp"
#include "tcut/kernels.hpp"
#include "tcut/simplex.hpp"

namespace tcut {
namespace {

std::vector<double> chebyshev_nodes(std::size_t n, double horizon) {
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = (2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
                         (2.0 * static_cast<double>(n));
    nodes[i] = 0.5 * horizon * (1.0 - std::cos(theta));
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

Matrix signed_moments(const Basis& basis, const std::vector<double>& points,
                      const std::vector<int>& signs) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix a(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    a.col(static_cast<Eigen::Index>(i)) = signs[i] * moment_vector(basis, points[i]);
  }
  return a;
}

// Factorization of the cone matrix [a_1 ... a_n] with a degeneracy check.
// The small solves run in extended precision: the cone coefficients that
// drive the exchange (gamma_0 / Gamma) are often tiny and the moment matrices
// have condition numbers up to 1e12.
class ConeSystem {
 public:
  using Wide = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

  ConeSystem(const Matrix& columns, double maxCondition)
      : columns_(columns.cast<long double>()), cond_(equilibrated_condition(columns)) {
    if (!(cond_ <= maxCondition)) {
      std::ostringstream msg;
      msg << "cone matrix is degenerate (equilibrated condition " << cond_ << ")";
      throw DegenerateBasis(msg.str());
    }
    lu_.compute(columns_);
  }

  Vector coordinates(const Vector& v) const {
    const WideVector x = lu_.solve(v.cast<long double>());
    return x.cast<double>();
  }
  double condition() const { return cond_; }

  // (p, ell) = 1 and (p, a_i) = b for all i, solved as one bordered system.
  std::pair<Vector, double> equioscillating(const Vector& ell) const {
    const auto n = columns_.rows();
    Wide m = Wide::Zero(n + 1, n + 1);
    m.block(0, 0, 1, n) = ell.cast<long double>().transpose();
    m.block(1, 0, n, n) = columns_.transpose();
    m.block(1, n, n, 1).setConstant(-1.0L);
    WideVector rhs = WideVector::Zero(n + 1);
    rhs(0) = 1.0L;
    const WideVector sol = m.fullPivLu().solve(rhs);
    return {sol.head(n).cast<double>(), static_cast<double>(sol(n))};
  }

 private:
  Wide columns_;
  double cond_;
  Eigen::FullPivLU<Wide> lu_;
};

// Moves noticeably negative cone coefficients to the positive side by flipping
// the sign of their point.
int normalize_signs(Vector& coeffs, std::vector<int>& signs) {
  const double scale = coeffs.cwiseAbs().sum();
  int flips = 0;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (coeffs(i) < -1e-12 * scale) {
      coeffs(i) = -coeffs(i);
      signs[static_cast<std::size_t>(i)] = -signs[static_cast<std::size_t>(i)];
      ++flips;
    }
  }
  return flips;
}

double point_tolerance(const DeviationProblem& problem, const RemezConfig& cfg) {
  return cfg.search.tTol * std::max(1.0, problem.horizon) * 10.0;
}

struct Trial {
  std::vector<double> points;
  std::vector<int> signs;
  Vector gamma;
  int flips = 0;
  double inserted = 0.0;
  double insertedValue = 0.0;
  int replaced = -1;
  double ratio = 0.0;  // gamma0 / Gamma
  double gamma0 = 0.0;
  double gammaSum = 0.0;
};

}  // namespace

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::Stalled: return "stalled";
    case SolverStatus::EarlyExit: return "earlyExit";
  }
  return "unknown";
}

AlternanceState initialize(const DeviationProblem& problem, const RemezConfig& cfg) {
  const auto& basis = problem.basis;
  const std::size_t n = basis.size();
  const Vector& ell = problem.functional.ell;
  if (n == 0) throw DegenerateBasis("empty basis");
  if (static_cast<std::size_t>(ell.size()) != n) {
    throw ValidationError("functional length does not match the basis");
  }
  if (ell.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("functional must be nonzero");

  auto points = chebyshev_nodes(n, problem.horizon);
  const double shift = 1e-3 * problem.horizon / static_cast<double>(n);
  // Last well-conditioned node set; used when some coefficient stays zero
  // through every retry (ell on a face of the cone, e.g. decayed fast modes).
  std::optional<std::pair<std::vector<double>, Vector>> fallback;
  for (int attempt = 0; attempt <= cfg.jitterRetries; ++attempt) {
    if (attempt > 0) {
      for (auto& t : points) t = std::min(problem.horizon, t + shift);
    }
    std::vector<int> plus(n, 1);
    Matrix u = signed_moments(basis, points, plus);
    if (!(equilibrated_condition(u) <= cfg.maxCondition)) continue;
    Vector c = u.fullPivLu().solve(ell);
    const double cmax = c.cwiseAbs().maxCoeff();
    bool zero = false;
    for (Eigen::Index i = 0; i < c.size(); ++i) zero = zero || std::abs(c(i)) <= 1e-14 * cmax;
    fallback.emplace(points, c);
    if (!zero) break;
  }
  if (!fallback) {
    throw DegenerateBasis("collocation matrix singular at Chebyshev nodes after jitter retries");
  }

  const auto& [nodes, c] = *fallback;
  AlternanceState st;
  st.points = nodes;
  st.signs.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.signs[i] = c(static_cast<Eigen::Index>(i)) < 0.0 ? -1 : 1;
  st.globalSign = 1;
  const ConeSystem cone(signed_moments(basis, st.points, st.signs), cfg.maxCondition);
  st.coneCoeffs = cone.coordinates(ell);
  auto [p, b] = cone.equioscillating(ell);
  if (!(b > 0.0)) throw DegenerateBasis("initial equioscillation level is not positive");
  st.polynomial.coefficients = p;
  st.lower = b;
  st.upper = sup_norm(st.polynomial, basis, problem.horizon, cfg.search).value;
  // b and B meet when the minimum is attained by p(T) = 1; the solved level
  // can then exceed the evaluated sup norm by rounding.
  st.lower = std::min(st.lower, st.upper);
  return st;
}

StepOutcome exchange_step(const AlternanceState& state, const DeviationProblem& problem,
                          const RemezConfig& cfg) {
  const auto& basis = problem.basis;
  const Vector& ell = problem.functional.ell;
  const double horizon = problem.horizon;
  const auto n = state.points.size();

  StepOutcome out;
  out.state = state;
  auto& rec = out.record;
  rec.lowerBefore = state.lower;
  rec.upperBefore = state.upper;

  const SupNormResult sup = sup_norm(state.polynomial, basis, horizon, cfg.search);
  rec.supNorm = sup.value;
  rec.maximizer = sup.argmax;
  const double tol = point_tolerance(problem, cfg);

  double nearest = std::numeric_limits<double>::infinity();
  for (double t : state.points) nearest = std::min(nearest, std::abs(t - sup.argmax));
  if (nearest <= tol && sup.value <= state.lower * (1.0 + cfg.relTol)) {
    out.stalled = true;
    out.state.upper = std::min(state.upper, sup.value);
    rec.lowerAfter = out.state.lower;
    rec.upperAfter = out.state.upper;
    return out;
  }

  const ConeSystem current(signed_moments(basis, state.points, state.signs), cfg.maxCondition);
  const Vector alpha = current.coordinates(state.globalSign * ell);

  auto attempt = [&](double t0) -> Trial {
    Trial tr;
    const double v0 = eval(state.polynomial, basis, t0);
    const int sigma0 = v0 < 0.0 ? -1 : 1;
    tr.inserted = t0;
    tr.insertedValue = std::abs(v0);
    const Vector a0 = sigma0 * moment_vector(basis, t0);
    const Vector s = current.coordinates(a0);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (!(s(ii) > 0.0)) continue;
      const double r = alpha(ii) > 0.0 ? s(ii) / alpha(ii) : std::numeric_limits<double>::infinity();
      if (r > best) {
        best = r;
        tr.replaced = static_cast<int>(i);
      }
    }
    if (tr.replaced < 0) return tr;
    tr.points = state.points;
    tr.signs = state.signs;
    tr.points[static_cast<std::size_t>(tr.replaced)] = t0;
    tr.signs[static_cast<std::size_t>(tr.replaced)] = sigma0;
    const ConeSystem next(signed_moments(basis, tr.points, tr.signs), cfg.maxCondition);
    tr.gamma = next.coordinates(state.globalSign * ell);
    tr.flips = normalize_signs(tr.gamma, tr.signs);
    tr.gamma0 = tr.gamma(tr.replaced);
    tr.gammaSum = tr.gamma.sum();
    tr.ratio = tr.gammaSum > 0.0 ? tr.gamma0 / tr.gammaSum : 0.0;
    return tr;
  };

  Trial chosen;
  try {
    chosen = attempt(sup.argmax);
  } catch (const DegenerateBasis&) {
    if (nearest > tol) throw;
    // The maximizer duplicates an alternance point; nothing left to exchange.
    out.stalled = true;
    out.state.upper = std::min(state.upper, sup.value);
    rec.lowerAfter = out.state.lower;
    rec.upperAfter = out.state.upper;
    return out;
  }
  if (chosen.replaced < 0) {
    out.stalled = true;
    out.state.upper = std::min(state.upper, sup.value);
    rec.lowerAfter = out.state.lower;
    rec.upperAfter = out.state.upper;
    return out;
  }

  if (chosen.ratio < cfg.singularFloor) {
    // Nudge t0 toward whichever neighbour keeps |p| larger and retry once.
    const double eta = 1e-6 * horizon;
    const double left = std::max(0.0, sup.argmax - eta);
    const double right = std::min(horizon, sup.argmax + eta);
    const double vl = std::abs(eval(state.polynomial, basis, left));
    const double vr = std::abs(eval(state.polynomial, basis, right));
    const double moved = vr >= vl ? right : left;
    if (moved != sup.argmax) {
      try {
        Trial retry = attempt(moved);
        if (retry.replaced >= 0 && retry.ratio > chosen.ratio) {
          chosen = std::move(retry);
          rec.perturbed = true;
        }
      } catch (const DegenerateBasis&) {
      }
    }
    rec.slow = chosen.ratio < cfg.singularFloor;
  }

  const ConeSystem next(signed_moments(basis, chosen.points, chosen.signs), cfg.maxCondition);
  auto [p, b] = next.equioscillating(ell);

  auto& st = out.state;
  st.points = std::move(chosen.points);
  st.signs = std::move(chosen.signs);
  st.coneCoeffs = chosen.gamma;
  st.polynomial.coefficients = p;
  st.lower = b;
  st.upper = std::min(state.upper, sup.value);
  st.lower = std::min(st.lower, st.upper);

  rec.inserted = chosen.inserted;
  rec.insertedValue = chosen.insertedValue;
  rec.replaced = chosen.replaced;
  rec.gamma0 = chosen.gamma0;
  rec.gammaSum = chosen.gammaSum;
  rec.signFlips = chosen.flips;
  rec.lowerAfter = st.lower;
  rec.upperAfter = st.upper;
  return out;
}

LeastDeviationResult solve_least_deviation(const DeviationProblem& problem,
                                           const RemezConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw ValidationError("eps must be positive");
  LeastDeviationResult res;
  AlternanceState state = initialize(problem, cfg);
  res.lower = state.lower;
  res.upper = state.upper;

  auto decided = [&] {
    if (!cfg.decisionThreshold) return false;
    return res.lower > *cfg.decisionThreshold || res.upper <= *cfg.decisionThreshold;
  };
  auto finish = [&](SolverStatus s) {
    res.status = s;
    res.certificate = state;
    res.polynomial = state.polynomial;
    return res;
  };

  if (decided()) return finish(SolverStatus::EarlyExit);
  if (res.upper - res.lower < cfg.eps) return finish(SolverStatus::Converged);

  int slowSteps = 0;
  for (int k = 1; k <= cfg.maxIterations; ++k) {
    StepOutcome step = exchange_step(state, problem, cfg);
    step.record.iteration = k;
    res.iterations = k;
    state = std::move(step.state);
    res.lower = std::max(res.lower, state.lower);
    res.upper = std::min(res.upper, state.upper);
    if (step.record.slow) ++slowSteps;
    const bool stalled = step.stalled;
    res.trace.push_back(step.record);

    if (decided()) return finish(SolverStatus::EarlyExit);
    if (res.upper - res.lower < cfg.eps) return finish(SolverStatus::Converged);
    if (stalled) {
      res.warnings.push_back("exchange stalled: maximizer coincides with an alternance point");
      return finish(SolverStatus::Stalled);
    }
  }
  if (slowSteps > 0) {
    res.warnings.push_back("slow convergence: " + std::to_string(slowSteps) +
                           " steps with gamma0/Gamma below the singular floor");
  }
  res.warnings.push_back("iteration cap reached with B - b = " +
                         std::to_string(res.upper - res.lower));
  return finish(SolverStatus::Stalled);
}

bool verify_certificate(const LeastDeviationResult& result, const DeviationProblem& problem) {
  const auto& cert = result.certificate;
  const auto& basis = problem.basis;
  const std::size_t n = cert.points.size();
  if (n == 0 || cert.signs.size() != n || n != basis.size()) return false;

  for (std::size_t i = 0; i < n; ++i) {
    const double v = eval(cert.polynomial, basis, cert.points[i]);
    const int s = v < 0.0 ? -1 : 1;
    if (v != 0.0 && s != cert.signs[i]) return false;
    const double mag = std::abs(v);
    if (mag < result.lower * (1.0 - 1e-6) || mag > result.upper * (1.0 + 1e-9)) return false;
  }

  const Matrix a = signed_moments(basis, cert.points, cert.signs);
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) return false;
  Vector alpha = lu.solve(problem.functional.ell);
  if (!((a * alpha - problem.functional.ell).norm() <=
        1e-8 * (1.0 + problem.functional.ell.norm()))) {
    return false;
  }
  const double scale = alpha.cwiseAbs().sum();
  if (!(scale > 0.0)) return false;
  alpha /= scale;
  const bool plus = (alpha.array() >= -1e-9).all();
  const bool minus = (alpha.array() <= 1e-9).all();
  return plus || minus;
}

double lp_grid_oracle(const DeviationProblem& problem, const std::vector<double>& grid) {
  const auto& basis = problem.basis;
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto g = static_cast<Eigen::Index>(grid.size());
  if (static_cast<std::size_t>(g) < 10 * basis.size()) {
    throw ValidationError("grid oracle needs at least 10 n points");
  }
  const Matrix u = kernels::moment_matrix(basis, grid, kernels::Execution::Parallel);

  // Dual: maximize mu subject to mu ell = sum (lp_j - lm_j) u_j,
  // sum (lp_j + lm_j) = 1, all variables nonnegative.
  Matrix a = Matrix::Zero(n + 1, 1 + 2 * g);
  a.block(0, 0, n, 1) = problem.functional.ell;
  a.block(0, 1, n, g) = -u;
  a.block(0, 1 + g, n, g) = u;
  a.block(n, 1, 1, 2 * g).setOnes();
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0;
  Vector c = Vector::Zero(1 + 2 * g);
  c(0) = -1.0;
  const LpResult lp = minimize_standard_form(a, b, c);
  if (lp.status != LpStatus::Optimal) {
    throw DegenerateBasis("grid LP did not reach an optimum");
  }
  const double value = -lp.objective;
  if (!(value > 0.0)) throw DegenerateBasis("grid LP optimum is zero: moments do not span ell");
  return value;
}

double lp_grid_oracle(const DeviationProblem& problem, int gridSize) {
  if (gridSize < 2) throw ValidationError("grid size must be at least 2");
  std::vector<double> grid(static_cast<std::size_t>(gridSize));
  for (int j = 0; j < gridSize; ++j) {
    grid[static_cast<std::size_t>(j)] = problem.horizon * j / (gridSize - 1);
  }
  grid.back() = problem.horizon;
  return lp_grid_oracle(problem, grid);
}

}  // namespace tcut
