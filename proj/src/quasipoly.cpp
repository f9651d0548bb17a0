#include "tcut/quasipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "tcut/kernels.hpp"

namespace tcut {

double eval(const Quasipolynomial& p, const Basis& basis, double t) {
  std::vector<double> u(basis.size());
  basis.values(t, u);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += p.coefficients(static_cast<Eigen::Index>(i)) * u[i];
  return acc;
}

double eval_derivative(const Quasipolynomial& p, const Basis& basis, double t) {
  std::vector<double> du(basis.size());
  basis.derivatives(t, du);
  double acc = 0.0;
  for (std::size_t i = 0; i < du.size(); ++i) acc += p.coefficients(static_cast<Eigen::Index>(i)) * du[i];
  return acc;
}

Vector moment_vector(const Basis& basis, double t) {
  Vector u(static_cast<Eigen::Index>(basis.size()));
  basis.values(t, std::span<double>(u.data(), static_cast<std::size_t>(u.size())));
  return u;
}

int sup_norm_grid_size(const Basis& basis, double horizon, const SearchConfig& cfg) {
  const int n = static_cast<int>(basis.size());
  const double oscillation = 16.0 * (1.0 + basis.max_frequency() * horizon / std::numbers::pi);
  return std::max({cfg.gridPerDim * n, cfg.gridMin, static_cast<int>(std::ceil(oscillation))});
}

namespace {

struct Candidate {
  double t;
  double value;  // |p(t)|
  int sign;
};

// Maximizer of sign * p on [lo, hi] given sign * p' > 0 at lo and < 0 at hi.
Candidate refine(const Quasipolynomial& p, const Basis& basis, double lo, double hi, int sign,
                 double tol) {
  auto slope = [&](double t) { return sign * eval_derivative(p, basis, t); };
  std::uintmax_t maxIter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      slope, lo, hi, [tol](double x, double y) { return std::abs(y - x) <= tol; }, maxIter);
  Candidate best{lo, -1.0, sign};
  for (double t : {a, 0.5 * (a + b), b}) {
    const double v = eval(p, basis, t);
    if (std::abs(v) > best.value) best = {t, std::abs(v), v < 0.0 ? -1 : 1};
  }
  return best;
}

}  // namespace

SupNormResult sup_norm(const Quasipolynomial& p, const Basis& basis, double horizon,
                       const SearchConfig& cfg) {
  const int count = sup_norm_grid_size(basis, horizon, cfg);
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) ts[static_cast<std::size_t>(j)] = horizon * j / (count - 1);
  ts.back() = horizon;
  std::vector<double> vals(ts.size());
  kernels::evaluate_on_grid(basis, p.coefficients, ts, vals,
                            cfg.parallel ? kernels::Execution::Parallel : kernels::Execution::Serial);

  const double tol = cfg.tTol * std::max(1.0, horizon);
  const std::size_t last = ts.size() - 1;
  auto sgn = [](double v) { return v < 0.0 ? -1 : 1; };

  Candidate best{0.0, std::abs(vals[0]), sgn(vals[0])};
  auto consider = [&](const Candidate& c) {
    if (c.value > best.value || (c.value == best.value && c.t < best.t)) best = c;
  };
  consider({ts[last], std::abs(vals[last]), sgn(vals[last])});

  for (std::size_t j = 0; j <= last; ++j) {
    const double here = std::abs(vals[j]);
    const bool leftOk = j == 0 || here >= std::abs(vals[j - 1]);
    const bool rightOk = j == last || here >= std::abs(vals[j + 1]);
    if (!leftOk || !rightOk || here == 0.0) continue;
    const int s = sgn(vals[j]);
    consider({ts[j], here, s});
    const double slopeHere = s * eval_derivative(p, basis, ts[j]);
    if (slopeHere > 0.0 && j < last) {
      if (s * eval_derivative(p, basis, ts[j + 1]) < 0.0) {
        consider(refine(p, basis, ts[j], ts[j + 1], s, tol));
      }
    } else if (slopeHere < 0.0 && j > 0) {
      if (s * eval_derivative(p, basis, ts[j - 1]) > 0.0) {
        consider(refine(p, basis, ts[j - 1], ts[j], s, tol));
      }
    }
  }
  if (best.value == 0.0) return {0.0, 0.0, 1};
  return {best.value, best.t, best.sign};
}

}  // namespace tcut
