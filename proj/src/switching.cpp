#include "tcut/switching.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "tcut/errors.hpp"

namespace tcut {

SwitchedSystem::SwitchedSystem(std::vector<Regime> regimes) : regimes_(std::move(regimes)) {
  if (regimes_.empty()) throw ValidationError("switched system needs at least one regime");
  std::set<std::string> labels;
  const auto d = regimes_.front().matrix.dim();
  for (const auto& r : regimes_) {
    if (!labels.insert(r.label).second) throw ValidationError("duplicate regime label '" + r.label + "'");
    if (r.matrix.dim() != d) {
      throw ValidationError("regime '" + r.label + "' has a different dimension");
    }
    if (!(r.dwell > 0.0) || !std::isfinite(r.dwell)) {
      throw ValidationError("regime '" + r.label + "': dwell time m must be positive and finite");
    }
    if (!(r.upper > r.dwell)) {
      throw ValidationError("regime '" + r.label + "': upper bound M must exceed m");
    }
  }
}

const Regime& SwitchedSystem::regime(const std::string& label) const {
  auto it = std::find_if(regimes_.begin(), regimes_.end(),
                         [&](const Regime& r) { return r.label == label; });
  if (it == regimes_.end()) throw ValidationError("unknown regime '" + label + "'");
  return *it;
}

std::vector<std::string> law_violations(const SwitchedSystem& sys, const SwitchingLaw& law) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < law.segments.size(); ++i) {
    const auto& seg = law.segments[i];
    std::ostringstream msg;
    msg << "segment " << i << " (" << seg.label << ", " << seg.duration << "): ";
    auto it = std::find_if(sys.regimes().begin(), sys.regimes().end(),
                           [&](const Regime& r) { return r.label == seg.label; });
    if (it == sys.regimes().end()) {
      out.push_back(msg.str() + "unknown regime");
      continue;
    }
    const double slack = 1e-12 * std::max(1.0, it->dwell);
    if (!std::isfinite(seg.duration) || seg.duration < it->dwell - slack) {
      out.push_back(msg.str() + "shorter than the dwell time");
    } else if (seg.duration > it->upper + slack) {
      out.push_back(msg.str() + "longer than the upper bound M");
    }
    if (i > 0 && law.segments[i - 1].label == seg.label) {
      out.push_back(msg.str() + "repeats the previous regime");
    }
  }
  return out;
}

DwellReport critical_bounds(const SwitchedSystem& sys, double tol, const CutTailConfig& cfg) {
  DwellReport rep;
  rep.allHurwitz = true;
  std::string firstUnstable;
  for (const auto& r : sys.regimes()) {
    DwellRow row;
    row.label = r.label;
    row.dwell = r.dwell;
    if (std::isfinite(r.upper)) row.upper = r.upper;
    row.hurwitz = is_hurwitz(r.matrix, cfg.spectral);
    if (!row.hurwitz && rep.allHurwitz) {
      rep.allHurwitz = false;
      firstUnstable = r.label;
    }
    rep.rows.push_back(row);
  }
  if (!rep.allHurwitz) {
    rep.verdictNote = "regime '" + firstUnstable +
                      "' is not Hurwitz: the unrestricted system {A, m} is unstable";
    return rep;
  }

  rep.boundsCoverCritical = true;
  std::string shortRegime;
  for (auto& row : rep.rows) {
    const CutTailResult tc = compute_tcut(sys.regime(row.label).matrix, tol, cfg);
    row.tcut = tc.estimate();
    row.tcutLow = tc.tLow;
    row.tcutHigh = tc.tHigh;
    row.criticalM = row.dwell + *row.tcut;
    if (!row.upper || *row.upper < *row.criticalM) {
      rep.boundsCoverCritical = false;
      if (row.upper && shortRegime.empty()) shortRegime = row.label;
    }
  }
  std::ostringstream note;
  note << "all regimes are Hurwitz; stability of {A, m} is equivalent to stability of "
          "{A, m, m + T_cut}";
  if (rep.boundsCoverCritical) {
    note << "; every given M satisfies M >= m + T_cut, so stability under the M bounds "
            "transfers to the unrestricted system";
  } else if (!shortRegime.empty()) {
    note << "; regime '" << shortRegime
         << "' has M < m + T_cut, so bounded-interval stability does not transfer by itself";
  }
  rep.verdictNote = note.str();
  return rep;
}

std::vector<TrajectorySample> simulate(const SwitchedSystem& sys, const SwitchingLaw& law,
                                       const Vector& x0, int stepsPerSegment) {
  const auto bad = law_violations(sys, law);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "switching law is not admissible:";
    for (const auto& b : bad) msg << " [" << b << "]";
    throw ValidationError(msg.str());
  }
  if (x0.size() != sys.dim()) throw ValidationError("initial state has the wrong dimension");
  if (stepsPerSegment < 1) throw ValidationError("stepsPerSegment must be at least 1");

  std::vector<TrajectorySample> out;
  out.push_back({0.0, x0, x0.norm()});
  double t = 0.0;
  Vector start = x0;
  for (const auto& seg : law.segments) {
    const Matrix& a = sys.regime(seg.label).matrix.entries();
    Vector x = start;
    for (int j = 1; j <= stepsPerSegment; ++j) {
      const double tau = seg.duration * j / stepsPerSegment;
      x = expm(tau * a) * start;
      out.push_back({t + tau, x, x.norm()});
    }
    t += seg.duration;
    start = x;
  }
  return out;
}

Matrix transition_matrix(const SwitchedSystem& sys, const SwitchingLaw& law, double horizon) {
  Matrix phi = Matrix::Identity(sys.dim(), sys.dim());
  double t = 0.0;
  for (const auto& seg : law.segments) {
    if (t >= horizon) break;
    const double tau = std::min(seg.duration, horizon - t);
    phi = expm(tau * sys.regime(seg.label).matrix.entries()) * phi;
    t += tau;
  }
  if (t < horizon * (1.0 - 1e-12)) throw ValidationError("switching law ends before the horizon");
  return phi;
}

namespace {

SwitchingLaw random_law(const SwitchedSystem& sys, const std::vector<double>& tcuts,
                        double horizon, std::mt19937_64& rng) {
  const auto& regs = sys.regimes();
  SwitchingLaw law;
  if (regs.size() == 1) {
    law.segments.push_back({regs[0].label, std::max(horizon, regs[0].dwell)});
    return law;
  }
  std::uniform_int_distribution<std::size_t> pick(0, regs.size() - 1);
  std::uniform_int_distribution<std::size_t> other(0, regs.size() - 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t cur = pick(rng);
  double t = 0.0;
  while (t < horizon) {
    const auto& r = regs[cur];
    const double hi = std::min(r.upper, r.dwell + 3.0 * tcuts[cur]);
    const double dur = r.dwell + (hi - r.dwell) * unit(rng);
    law.segments.push_back({r.label, dur});
    t += dur;
    std::size_t next = other(rng);
    if (next >= cur) ++next;
    cur = next;
  }
  return law;
}

}  // namespace

SearchOutcome random_switching_search(const SwitchedSystem& sys, const std::vector<double>& tcuts,
                                      int trials, double horizon, std::uint64_t seed,
                                      kernels::Execution exec) {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (tcuts.size() != sys.regimes().size()) throw ValidationError("one T_cut per regime expected");
  if (sys.regimes().size() == 1 && sys.regimes()[0].upper < horizon) {
    throw ValidationError("a single regime with M < horizon admits no law covering the horizon");
  }

  std::vector<double> growth(static_cast<std::size_t>(trials));
  std::vector<SwitchingLaw> laws(static_cast<std::size_t>(trials));
  std::vector<Vector> initial(static_cast<std::size_t>(trials));

  auto run_trial = [&](int i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    const auto k = static_cast<std::size_t>(i);
    laws[k] = random_law(sys, tcuts, horizon, rng);
    const Matrix phi = transition_matrix(sys, laws[k], horizon);
    Eigen::JacobiSVD<Matrix> svd(phi, Eigen::ComputeFullV);
    growth[k] = svd.singularValues()(0);
    initial[k] = svd.matrixV().col(0);
  };

  if (exec == kernels::Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < trials; ++i) run_trial(i);
  } else {
    for (int i = 0; i < trials; ++i) run_trial(i);
  }

  SearchOutcome out;
  for (int i = 0; i < trials; ++i) {
    if (growth[static_cast<std::size_t>(i)] > out.worstGrowth || out.worstTrial < 0) {
      out.worstGrowth = growth[static_cast<std::size_t>(i)];
      out.worstTrial = i;
    }
  }
  out.worstLaw = laws[static_cast<std::size_t>(out.worstTrial)];
  out.worstInitial = initial[static_cast<std::size_t>(out.worstTrial)];
  out.growth = std::move(growth);
  return out;
}

SearchOutcome random_switching_search(const SwitchedSystem& sys, int trials, double horizon,
                                      std::uint64_t seed, double tol, const CutTailConfig& cfg) {
  std::vector<double> tcuts;
  for (const auto& r : sys.regimes()) tcuts.push_back(compute_tcut(r.matrix, tol, cfg).estimate());
  return random_switching_search(sys, tcuts, trials, horizon, seed);
}

}  // namespace tcut
