#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tcut/cuttail.hpp"
#include "tcut/kernels.hpp"
#include "tcut/spectral.hpp"

namespace tcut {

struct Regime {
  std::string label;
  SystemMatrix matrix;
  double dwell = 1.0;  // m(A)
  double upper = std::numeric_limits<double>::infinity();  // M(A)
};

/// Regimes with dwell-time lower bounds and optional upper bounds on the
/// switching intervals. All regimes share one dimension.
class SwitchedSystem {
 public:
  explicit SwitchedSystem(std::vector<Regime> regimes);

  const std::vector<Regime>& regimes() const { return regimes_; }
  const Regime& regime(const std::string& label) const;
  Eigen::Index dim() const { return regimes_.front().matrix.dim(); }

 private:
  std::vector<Regime> regimes_;
};

struct Segment {
  std::string label;
  double duration = 0.0;
};

struct SwitchingLaw {
  std::vector<Segment> segments;
};

/// Empty when the law is admissible; otherwise one message per offending segment.
std::vector<std::string> law_violations(const SwitchedSystem& sys, const SwitchingLaw& law);

struct DwellRow {
  std::string label;
  bool hurwitz = false;
  double dwell = 0.0;
  std::optional<double> upper;  // given M, if finite
  // Absent when the report stopped at a non-Hurwitz regime.
  std::optional<double> tcut;
  std::optional<double> tcutLow;
  std::optional<double> tcutHigh;
  std::optional<double> criticalM;  // dwell + tcut
};

struct DwellReport {
  std::vector<DwellRow> rows;
  bool allHurwitz = false;
  // Every regime has a finite M with M >= criticalM.
  bool boundsCoverCritical = false;
  std::string verdictNote;
};

DwellReport critical_bounds(const SwitchedSystem& sys, double tol, const CutTailConfig& cfg = {});

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  double norm = 0.0;
};

/// Piecewise exact trajectory; `stepsPerSegment` samples per segment with the
/// boundary states propagated by one exponential per segment.
std::vector<TrajectorySample> simulate(const SwitchedSystem& sys, const SwitchingLaw& law,
                                       const Vector& x0, int stepsPerSegment);

struct SearchOutcome {
  // max over trials of ||Phi(horizon)||_2, i.e. the worst ||x(horizon)|| / ||x0||.
  double worstGrowth = 0.0;
  int worstTrial = -1;
  SwitchingLaw worstLaw;
  Vector worstInitial;
  std::vector<double> growth;  // per trial
};


/// Random admissible laws with durations uniform in [m, min(M, m + 3 T_cut)].
/// Trial i draws from its own generator seeded by (seed, i).
SearchOutcome random_switching_search(const SwitchedSystem& sys, const std::vector<double>& tcuts,
                                      int trials, double horizon, std::uint64_t seed,
                                      kernels::Execution exec = kernels::Execution::Parallel);

/// Convenience overload computing T_cut of every regime first.
SearchOutcome random_switching_search(const SwitchedSystem& sys, int trials, double horizon,
                                      std::uint64_t seed, double tol = 1e-6,
                                      const CutTailConfig& cfg = {});

/// Transition matrix of the law truncated at `horizon` (the last segment may
/// be cut short).
Matrix transition_matrix(const SwitchedSystem& sys, const SwitchingLaw& law, double horizon);

}  // namespace tcut
