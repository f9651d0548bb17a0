#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tcut/remez.hpp"
#include "tcut/spectral.hpp"

namespace tcut {

enum class Verdict { CutTail, NotCutTail, Inconclusive };
enum class TcutMethod { RemezBisection, PlanarReal, PlanarComplex, HullOracle };

std::string to_string(Verdict v);
std::string to_string(TcutMethod m);

struct CutTailConfig {
  SpectralConfig spectral;
  RemezConfig remez = [] {
    RemezConfig r;
    r.eps = 1e-15;
    return r;
  }();
  // T is a cut tail point when the least deviation exceeds 1 + decisionTol.
  double decisionTol = 1e-13;
  // The threshold is raised to roundingFactor * eps * cond(collocation at T)
  // when that is larger: below the cut tail b and B equal 1 only up to the
  // rounding of the linear solves, which grows with the basis condition.
  double roundingFactor = 1.0;
  // Replaces compute_spectrum when set.
  std::optional<Spectrum> spectrumOverride;
  int maxDoublings = 60;
  // Hull oracle.
  double hullMarginTol = 1e-6;
  int hullMaxDim = 6;
  // Rounds of local resampling around the times active in the hull LPs.
  int hullRefinements = 4;
};

struct CutTailDecision {
  double horizon = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double lower = 0.0;
  double upper = 0.0;
  // Signed distance of the decisive bound from 1 + decisionTol (b - thr for
  // cutTail, thr - B for notCutTail, -min of both when inconclusive).
  double thresholdMargin = 0.0;
  int iterations = 0;
  SolverStatus solverStatus = SolverStatus::Stalled;
  // Threshold offset actually used (decisionTol or the rounding floor).
  double decisionTol = 0.0;
};

struct CutTailResult {
  double tLow = 0.0;
  double tHigh = 0.0;
  TcutMethod method = TcutMethod::RemezBisection;
  std::optional<CutTailDecision> lowDecision;
  std::optional<CutTailDecision> highDecision;
  int decisions = 0;
  // Bisection stopped early on an inconclusive verdict.
  bool widened = false;
  int minimalDegree = 0;

  double estimate() const { return 0.5 * (tLow + tHigh); }
};

/// Verdict for a prepared basis; ell = u(T).
CutTailDecision decide_cut_tail(const Basis& basis, double horizon, const CutTailConfig& cfg);

/// Throws NotHurwitz for unstable input.
CutTailDecision is_cut_tail(const SystemMatrix& a, double horizon, const CutTailConfig& cfg = {});

/// Bisection on the cut-tail verdict until tHigh - tLow <= tol.
CutTailResult compute_tcut(const SystemMatrix& a, double tol, const CutTailConfig& cfg = {});

/// Positive root of (1 + e^{-a1 t}) / a1 = (1 + e^{-a2 t}) / a2 for real
/// eigenvalues a1 < a2 < 0.
double tcut_planar_real(double alpha1, double alpha2);

/// Smallest positive root of alpha sin(beta t) + beta cos(beta t) + beta e^{alpha t}
/// for eigenvalues alpha +- i beta.
double tcut_planar_complex(double alpha, double beta);

/// Closed-form T_cut of a 2x2 Hurwitz matrix with distinct eigenvalues.
/// Throws ValidationError for other shapes or a double eigenvalue.
CutTailResult tcut_planar(const SystemMatrix& a, const SpectralConfig& cfg = {});

struct HullMembership {
  bool interior = false;
  // Smallest of the 2d axis-direction margins.
  double margin = 0.0;
  double horizonUsed = 0.0;
};

/// Brute-force interior test of x(T) in co{+-x(t_j)} over sampled t_j in
/// [0, T + 20 / |max Re lambda|].
HullMembership hull_membership(const SystemMatrix& a, const Vector& x0, double horizon,
                               int samples, const CutTailConfig& cfg = {});

bool hull_membership_oracle(const SystemMatrix& a, const Vector& x0, double horizon, int samples,
                            const CutTailConfig& cfg = {});

/// T_cut by bisection on the hull oracle verdict, for a seeded random x0.
CutTailResult tcut_hull(const SystemMatrix& a, double tol, int samples, std::uint64_t seed,
                        const CutTailConfig& cfg = {});

}  // namespace tcut
