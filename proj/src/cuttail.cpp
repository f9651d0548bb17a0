#include "tcut/cuttail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "tcut/errors.hpp"
#include "tcut/kernels.hpp"
#include "tcut/simplex.hpp"

namespace tcut {
namespace {

Spectrum spectrum_for(const SystemMatrix& a, const CutTailConfig& cfg) {
  return cfg.spectrumOverride ? *cfg.spectrumOverride : compute_spectrum(a, cfg.spectral);
}

void require_hurwitz(const SystemMatrix& a, const CutTailConfig& cfg) {
  if (!is_hurwitz(a, cfg.spectral)) {
    throw NotHurwitz("matrix is not Hurwitz: T_cut is undefined");
  }
}

double slowest_rate(const Spectrum& s) {
  double a = -std::numeric_limits<double>::infinity();
  for (const auto& it : s.items) a = std::max(a, it.alpha);
  return std::abs(a);
}

// Bracketed root with a sign change between lo and hi.
template <class F>
double bracketed_root(F f, double lo, double hi, double tol) {
  std::uintmax_t iters = 300;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, [tol](double x, double y) { return std::abs(y - x) <= tol; }, iters);
  return 0.5 * (a + b);
}

// Bisection on a monotone predicate (false below the threshold, true above).
template <class Decide>
void bisect(double& lo, double& hi, double tol, Decide decide) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (decide(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CutTail: return "cutTail";
    case Verdict::NotCutTail: return "notCutTail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(TcutMethod m) {
  switch (m) {
    case TcutMethod::RemezBisection: return "remezBisection";
    case TcutMethod::PlanarReal: return "planarReal";
    case TcutMethod::PlanarComplex: return "planarComplex";
    case TcutMethod::HullOracle: return "hullOracle";
  }
  return "unknown";
}

CutTailDecision decide_cut_tail(const Basis& basis, double horizon, const CutTailConfig& cfg) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("T must be positive");
  const double floor = cfg.roundingFactor * std::numeric_limits<double>::epsilon() *
                       basis.collocation_condition(horizon);
  const double tolUsed = std::max(cfg.decisionTol, floor);
  const double threshold = 1.0 + tolUsed;
  RemezConfig rc = cfg.remez;
  rc.decisionThreshold = threshold;
  const DeviationProblem problem{basis, horizon, {moment_vector(basis, horizon)}};
  const LeastDeviationResult res = solve_least_deviation(problem, rc);

  CutTailDecision d;
  d.horizon = horizon;
  d.lower = res.lower;
  d.upper = res.upper;
  d.iterations = res.iterations;
  d.solverStatus = res.status;
  d.decisionTol = tolUsed;
  if (res.lower > threshold) {
    d.verdict = Verdict::CutTail;
    d.thresholdMargin = res.lower - threshold;
  } else if (res.upper <= threshold) {
    d.verdict = Verdict::NotCutTail;
    d.thresholdMargin = threshold - res.upper;
  } else {
    d.verdict = Verdict::Inconclusive;
    d.thresholdMargin = -std::min(threshold - res.lower, res.upper - threshold);
  }
  return d;
}

CutTailDecision is_cut_tail(const SystemMatrix& a, double horizon, const CutTailConfig& cfg) {
  require_hurwitz(a, cfg);
  return decide_cut_tail(build_basis(spectrum_for(a, cfg)), horizon, cfg);
}

CutTailResult compute_tcut(const SystemMatrix& a, double tol, const CutTailConfig& cfg) {
  if (!(tol > 0.0)) throw ValidationError("bisection tolerance must be positive");
  require_hurwitz(a, cfg);
  const Spectrum spectrum = spectrum_for(a, cfg);
  const Basis basis = build_basis(spectrum);

  CutTailResult res;
  res.method = TcutMethod::RemezBisection;
  res.minimalDegree = spectrum.minimalDegree;
  if (spectrum.minimalDegree == 1) return res;  // the whole half-line (0, inf) is cut tail

  // Inconclusive verdicts get one retry with a tighter threshold.
  auto decide = [&](double t) {
    ++res.decisions;
    CutTailDecision d = decide_cut_tail(basis, t, cfg);
    if (d.verdict == Verdict::Inconclusive) {
      CutTailConfig tighter = cfg;
      tighter.decisionTol = cfg.decisionTol * 0.1;
      ++res.decisions;
      d = decide_cut_tail(basis, t, tighter);
    }
    return d;
  };

  double t = 1.0 / slowest_rate(spectrum);
  bool bracketed = false;
  for (int i = 0; i <= cfg.maxDoublings; ++i, t *= 2.0) {
    const CutTailDecision d = decide(t);
    if (d.verdict == Verdict::CutTail) {
      res.tHigh = t;
      res.highDecision = d;
      bracketed = true;
      break;
    }
    if (d.verdict == Verdict::NotCutTail) {
      res.tLow = t;
      res.lowDecision = d;
    }
  }
  if (!bracketed) {
    throw NoUpperBracket("no cut tail point found after " + std::to_string(cfg.maxDoublings) +
                         " doublings");
  }

  while (res.tHigh - res.tLow > tol) {
    const double mid = 0.5 * (res.tLow + res.tHigh);
    if (mid <= res.tLow || mid >= res.tHigh) break;
    const CutTailDecision d = decide(mid);
    if (d.verdict == Verdict::CutTail) {
      res.tHigh = mid;
      res.highDecision = d;
    } else if (d.verdict == Verdict::NotCutTail) {
      res.tLow = mid;
      res.lowDecision = d;
    } else {
      res.widened = true;
      break;
    }
  }
  return res;
}

double tcut_planar_real(double alpha1, double alpha2) {
  if (!(alpha1 < 0.0 && alpha2 < 0.0)) throw ValidationError("planar real case needs negative eigenvalues");
  if (alpha1 == alpha2) {
    throw ValidationError("planar closed form excludes a double eigenvalue");
  }
  if (alpha1 > alpha2) std::swap(alpha1, alpha2);
  auto g = [=](double t) {
    return (1.0 + std::exp(-alpha1 * t)) / alpha1 - (1.0 + std::exp(-alpha2 * t)) / alpha2;
  };
  double hi = 1.0 / std::abs(alpha2);
  while (g(hi) > 0.0) hi *= 2.0;
  return bracketed_root(g, 0.0, hi, 1e-14 * std::max(1.0, hi));
}

double tcut_planar_complex(double alpha, double beta) {
  if (!(alpha < 0.0 && beta > 0.0)) throw ValidationError("planar complex case needs alpha < 0 < beta");
  auto h = [=](double t) {
    return alpha * std::sin(beta * t) + beta * std::cos(beta * t) + beta * std::exp(alpha * t);
  };
  const double step = std::numbers::pi / (8.0 * beta);
  double lo = 0.0;
  double hi = step;
  // h(pi / beta) = beta (e^{alpha pi / beta} - 1) < 0, so the scan ends within 8 steps.
  while (h(hi) > 0.0) {
    lo = hi;
    hi += step;
  }
  return bracketed_root(h, lo, hi, 1e-14 * std::max(1.0, hi));
}

CutTailResult tcut_planar(const SystemMatrix& a, const SpectralConfig& cfg) {
  if (a.dim() != 2) throw ValidationError("planar closed form needs a 2x2 matrix");
  if (!is_hurwitz(a, cfg)) throw NotHurwitz("matrix is not Hurwitz: T_cut is undefined");
  Eigen::EigenSolver<Matrix> solver(a.entries(), false);
  if (solver.info() != Eigen::Success) throw SpectralError("eigenvalue computation did not converge");
  const auto ev = solver.eigenvalues();
  const double norm = std::max(a.entries().norm(), std::numeric_limits<double>::min());
  const double tol = cfg.clusterRelTol * norm;

  CutTailResult res;
  res.minimalDegree = 2;
  double value = 0.0;
  if (std::abs(ev(0).imag()) > tol) {
    res.method = TcutMethod::PlanarComplex;
    value = tcut_planar_complex(ev(0).real(), std::abs(ev(0).imag()));
  } else {
    const double a1 = std::min(ev(0).real(), ev(1).real());
    const double a2 = std::max(ev(0).real(), ev(1).real());
    if (a2 - a1 <= tol) throw ValidationError("planar closed form excludes a double eigenvalue");
    res.method = TcutMethod::PlanarReal;
    value = tcut_planar_real(a1, a2);
  }
  res.tLow = value;
  res.tHigh = value;
  return res;
}

HullMembership hull_membership(const SystemMatrix& a, const Vector& x0, double horizon,
                               int samples, const CutTailConfig& cfg) {
  const auto d = a.dim();
  if (d > cfg.hullMaxDim) {
    std::ostringstream msg;
    msg << "hull oracle is limited to dimension " << cfg.hullMaxDim << ", got " << d;
    throw ValidationError(msg.str());
  }
  if (x0.size() != d) throw ValidationError("initial state has the wrong dimension");
  if (!(horizon > 0.0)) throw ValidationError("T must be positive");
  if (samples < 4) throw ValidationError("hull oracle needs at least 4 samples");
  const double x0norm = x0.norm();
  if (!(x0norm > 0.0)) throw ValidationError("initial state must be nonzero");
  const double abscissa = spectral_abscissa(a);
  if (!(abscissa < -cfg.spectral.hurwitzMargin)) {
    throw NotHurwitz("matrix is not Hurwitz: T_cut is undefined");
  }

  HullMembership out;
  out.horizonUsed = horizon + 20.0 / std::abs(abscissa);

  // Half the samples on [0, T] (T itself is the last of them), the rest on
  // (T, T_big]; extreme points of the hull come from the head of the arc.
  const int head = samples / 2;
  const int tail = samples - head;
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < head; ++j) ts.push_back(horizon * j / (head - 1));
  ts[static_cast<std::size_t>(head - 1)] = horizon;
  for (int j = 1; j <= tail; ++j) ts.push_back(horizon + (out.horizonUsed - horizon) * j / tail);

  const Vector unit = x0 / x0norm;
  Matrix pts = kernels::sample_trajectory(a.entries(), unit, ts, kernels::Execution::Parallel);
  const Vector target = pts.col(head - 1);

  // Smallest axis margin over the current samples, plus the sample indices
  // carrying weight in any of the optimal combinations.
  auto solve = [&](std::vector<Eigen::Index>& active) {
    const auto count = static_cast<Eigen::Index>(ts.size());
    // Variables [lp (count), lm (count), delta, slack] >= 0.
    Matrix lp = Matrix::Zero(d + 1, 2 * count + 2);
    lp.block(0, 0, d, count) = pts;
    lp.block(0, count, d, count) = -pts;
    lp.block(d, 0, 1, 2 * count).setOnes();
    lp(d, 2 * count + 1) = 1.0;
    Vector rhs(d + 1);
    rhs.head(d) = target;
    rhs(d) = 1.0;
    Vector cost = Vector::Zero(2 * count + 2);
    cost(2 * count) = -1.0;

    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < d; ++m) {
      for (double dir : {1.0, -1.0}) {
        lp.col(2 * count).setZero();
        lp(m, 2 * count) = -dir;
        const LpResult r = minimize_standard_form(lp, rhs, cost);
        if (r.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
        if (r.status != LpStatus::Optimal) throw DegenerateBasis("hull membership LP failed");
        margin = std::min(margin, r.x(2 * count));
        for (Eigen::Index j = 0; j < count; ++j) {
          if (r.x(j) > 0.0 || r.x(count + j) > 0.0) active.push_back(j);
        }
      }
    }
    return margin;
  };

  std::vector<Eigen::Index> active;
  double margin = solve(active);
  // Resample densely around the contributing times; the sampled hull only
  // grows, so the margin can only move towards its continuum value.
  for (int round = 0; round < cfg.hullRefinements && std::isfinite(margin); ++round) {
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    std::vector<double> order(ts);
    std::sort(order.begin(), order.end());
    std::vector<double> extra;
    for (auto j : active) {
      const double t = ts[static_cast<std::size_t>(j)];
      auto it = std::lower_bound(order.begin(), order.end(), t);
      const double lo = it == order.begin() ? t : *(it - 1);
      const double hi = (it + 1) == order.end() ? t : *(it + 1);
      constexpr int kLocal = 32;
      for (int k = 1; k < kLocal; ++k) {
        const double s = lo + (hi - lo) * k / kLocal;
        if (s != t) extra.push_back(s);
      }
    }
    if (extra.empty()) break;
    const Matrix more =
        kernels::sample_trajectory(a.entries(), unit, extra, kernels::Execution::Parallel);
    Matrix grown(d, pts.cols() + more.cols());
    grown << pts, more;
    pts = std::move(grown);
    ts.insert(ts.end(), extra.begin(), extra.end());
    active.clear();
    margin = std::max(margin, solve(active));
  }
  out.margin = margin;
  out.interior = margin > cfg.hullMarginTol;
  return out;
}

bool hull_membership_oracle(const SystemMatrix& a, const Vector& x0, double horizon, int samples,
                            const CutTailConfig& cfg) {
  return hull_membership(a, x0, horizon, samples, cfg).interior;
}

CutTailResult tcut_hull(const SystemMatrix& a, double tol, int samples, std::uint64_t seed,
                        const CutTailConfig& cfg) {
  if (!(tol > 0.0)) throw ValidationError("bisection tolerance must be positive");
  require_hurwitz(a, cfg);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector x0(a.dim());
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = normal(rng);

  CutTailResult res;
  res.method = TcutMethod::HullOracle;
  res.minimalDegree = compute_spectrum(a, cfg.spectral).minimalDegree;
  if (res.minimalDegree == 1) return res;

  auto inside = [&](double t) {
    ++res.decisions;
    return hull_membership(a, x0, t, samples, cfg).interior;
  };
  double t = 1.0 / std::abs(spectral_abscissa(a));
  bool bracketed = false;
  for (int i = 0; i <= cfg.maxDoublings; ++i, t *= 2.0) {
    if (inside(t)) {
      res.tHigh = t;
      bracketed = true;
      break;
    }
    res.tLow = t;
  }
  if (!bracketed) throw NoUpperBracket("hull oracle never reported an interior point");
  bisect(res.tLow, res.tHigh, tol, inside);
  return res;
}

}  // namespace tcut
