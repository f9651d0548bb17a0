#pragma once

#include <span>
#include <string>
#include <vector>

#include "tcut/linalg.hpp"

namespace tcut {

/// Square, finite, non-empty real matrix describing one regime x' = A x.
class SystemMatrix {
 public:
  explicit SystemMatrix(Matrix entries);

  const Matrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  Matrix entries_;
};

/// One eigenvalue cluster alpha +- i*beta (beta >= 0) with the size of its
/// largest Jordan block.
struct SpectrumItem {
  double alpha = 0.0;
  double beta = 0.0;
  int blockSize = 1;
};

struct Spectrum {
  std::vector<SpectrumItem> items;
  int minimalDegree = 0;
  // Rank decisions that fell inside the guard band, eigenvalue clusters that
  // had to be merged, and similar numerical caveats.
  std::vector<std::string> warnings;
};

struct SpectralConfig {
  // is_hurwitz requires Re(lambda) < -hurwitzMargin.
  double hurwitzMargin = 1e-12;
  // Eigenvalues closer than clusterRelTol * ||A|| are merged.
  double clusterRelTol = 1e-7;
  // Singular values of (A - lambda I)^k below rankRelTol * ||A||^k count as zero.
  double rankRelTol = 1e-9;
  // Singular values within this factor of the rank threshold raise a warning.
  double guardBand = 100.0;
};

bool is_hurwitz(const SystemMatrix& a, const SpectralConfig& cfg = {});

/// Largest real part over the spectrum.
double spectral_abscissa(const SystemMatrix& a);

Spectrum compute_spectrum(const SystemMatrix& a, const SpectralConfig& cfg = {});

/// Validates a user-supplied spectrum (distinct items, beta >= 0, r >= 1) and
/// fills in minimalDegree.
Spectrum make_spectrum(std::vector<SpectrumItem> items);

enum class Trig { Cos, Sin };

/// t^power * e^{alpha t} * cos(beta t)   or   ... * sin(beta t)
struct BasisFunction {
  double alpha = 0.0;
  double beta = 0.0;
  int power = 0;
  Trig kind = Trig::Cos;

  double value(double t) const;
  double derivative(double t) const;
};

/// Ordered real basis of the quasipolynomial space of a matrix.
///
/// Functions sharing (alpha, beta) are evaluated together so that e^{alpha t},
/// cos and sin are computed once per group.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<BasisFunction> functions);

  std::size_t size() const { return functions_.size(); }
  const BasisFunction& operator[](std::size_t i) const { return functions_[i]; }
  const std::vector<BasisFunction>& functions() const { return functions_; }

  /// Largest beta over the basis (0 for a purely real spectrum).
  double max_frequency() const;

  void values(double t, std::span<double> out) const;
  void derivatives(double t, std::span<double> out) const;

  /// Equilibrated condition number of the collocation matrix at the n
  /// Chebyshev nodes of [0, horizon]; finite iff the basis is independent there.
  double collocation_condition(double horizon) const;

 private:
  struct Group {
    double alpha;
    double beta;
    std::vector<std::size_t> members;
  };

  std::vector<BasisFunction> functions_;
  std::vector<Group> groups_;
  int maxPower_ = 0;
};

/// Sorted by alpha descending, beta ascending, power ascending, cos before sin.
Basis build_basis(const Spectrum& spectrum);

}  // namespace tcut
