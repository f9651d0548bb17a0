#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcut/linalg.hpp"
#include "tcut/quasipoly.hpp"
#include "tcut/spectral.hpp"

namespace tcut {

/// Linear functional on the quasipolynomial space, as a co-vector.
struct Functional {
  Vector ell;
};

/// min ||p||_{C[0,T]} subject to <p, ell> = 1 over span(basis).
struct DeviationProblem {
  Basis basis;
  double horizon = 1.0;
  Functional functional;
};

struct RemezConfig {
  SearchConfig search;
  // Stop once B_k - b_k < eps.
  double eps = 1e-6;
  int maxIterations = 500;
  // When set, stop as soon as b_k > threshold or B_k <= threshold.
  std::optional<double> decisionThreshold;
  // Stall when the new maximizer repeats a point and r_k <= b_k (1 + relTol).
  double relTol = 1e-13;
  // gamma_0 / Gamma below this triggers the perturbation retry.
  double singularFloor = 1e-10;
  // Equilibrated condition number above which a cone matrix is degenerate.
  double maxCondition = 1e12;
  int jitterRetries = 8;
};

/// Working set of the point exchange: n points whose signed moment
/// vectors a_i = sign_i u(t_i) span a cone containing globalSign * ell.
struct AlternanceState {
  std::vector<double> points;
  std::vector<int> signs;
  int globalSign = 1;
  Quasipolynomial polynomial;
  // Equioscillation level: p(t_i) = signs[i] * lower.
  double lower = 0.0;
  // Best sup norm seen so far.
  double upper = 0.0;
  // globalSign * ell = sum coneCoeffs[i] * a_i, all positive.
  Vector coneCoeffs;
};

/// Diagnostics of one exchange.
struct StepRecord {
  int iteration = 0;
  double lowerBefore = 0.0;
  double upperBefore = 0.0;
  double supNorm = 0.0;      // r_k
  double maximizer = 0.0;    // t_0 as located by sup_norm
  double inserted = 0.0;     // point actually inserted (t_0 unless perturbed)
  double insertedValue = 0.0;  // |p_k(inserted)|
  int replaced = -1;         // q
  double gamma0 = 0.0;
  double gammaSum = 0.0;     // Gamma, including gamma0
  double lowerAfter = 0.0;
  double upperAfter = 0.0;
  bool perturbed = false;
  bool slow = false;
  int signFlips = 0;
};

struct StepOutcome {
  AlternanceState state;
  StepRecord record;
  bool stalled = false;
};

enum class SolverStatus { Converged, Stalled, EarlyExit };

std::string to_string(SolverStatus s);

struct LeastDeviationResult {
  Quasipolynomial polynomial;
  // Best bounds over all iterations: lower <= min <= upper.
  double lower = 0.0;
  double upper = 0.0;
  AlternanceState certificate;
  int iterations = 0;
  SolverStatus status = SolverStatus::Stalled;
  std::vector<StepRecord> trace;
  std::vector<std::string> warnings;
};

/// Chebyshev nodes, signs from the cone expansion of ell, then the
/// equioscillating polynomial through them. Throws DegenerateBasis when the
/// collocation matrix stays singular after the jitter retries.
AlternanceState initialize(const DeviationProblem& problem, const RemezConfig& cfg);

/// One point exchange: locate the maximizer of |p_k|, swap it for the point
/// with the largest s_i / alpha_i ratio and re-solve from scratch.
StepOutcome exchange_step(const AlternanceState& state, const DeviationProblem& problem,
                          const RemezConfig& cfg);

LeastDeviationResult solve_least_deviation(const DeviationProblem& problem,
                                           const RemezConfig& cfg);

/// Re-derives the cone certificate from the alternance points: +-ell must be a
/// nonnegative combination of sign(p(t_i)) u(t_i) and |p(t_i)| must sit in
/// [b (1 - 1e-6), B (1 + 1e-9)].
bool verify_certificate(const LeastDeviationResult& result, const DeviationProblem& problem);

/// Discretized problem on a uniform grid of `gridSize` points solved exactly
/// as a linear program; a lower bound on the continuum minimum.
double lp_grid_oracle(const DeviationProblem& problem, int gridSize);

/// Same LP on caller-chosen abscissae.
double lp_grid_oracle(const DeviationProblem& problem, const std::vector<double>& grid);

}  // namespace tcut
