#include "tcut/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tcut/errors.hpp"

namespace tcut {
namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

Eigen::VectorXcd eigenvalues_of(const Matrix& a) {
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw SpectralError("eigenvalue computation did not converge");
  }
  return solver.eigenvalues();
}

double operator_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

std::vector<double> chebyshev_nodes(std::size_t n, double horizon) {
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = (2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
                         (2.0 * static_cast<double>(n));
    nodes[i] = 0.5 * horizon * (1.0 - std::cos(theta));
  }
  return nodes;
}

}  // namespace

SystemMatrix::SystemMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    std::ostringstream msg;
    msg << "system matrix must be square and non-empty, got " << entries_.rows() << "x"
        << entries_.cols();
    throw ValidationError(msg.str());
  }
  if (!entries_.allFinite()) throw ValidationError("system matrix has non-finite entries");
}

double spectral_abscissa(const SystemMatrix& a) {
  const auto eig = eigenvalues_of(a.entries());
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eig.size(); ++i) best = std::max(best, eig(i).real());
  return best;
}

bool is_hurwitz(const SystemMatrix& a, const SpectralConfig& cfg) {
  return spectral_abscissa(a) < -cfg.hurwitzMargin;
}

Spectrum make_spectrum(std::vector<SpectrumItem> items) {
  if (items.empty()) throw ValidationError("spectrum must contain at least one item");
  Spectrum s;
  for (const auto& it : items) {
    if (!std::isfinite(it.alpha) || !std::isfinite(it.beta) || it.beta < 0.0 || it.blockSize < 1) {
      throw ValidationError("spectrum item needs finite alpha, beta >= 0 and blockSize >= 1");
    }
    s.minimalDegree += (it.beta > 0.0 ? 2 : 1) * it.blockSize;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].alpha == items[j].alpha && items[i].beta == items[j].beta) {
        throw ValidationError("spectrum items must be distinct");
      }
    }
  }
  s.items = std::move(items);
  return s;
}

Spectrum compute_spectrum(const SystemMatrix& a, const SpectralConfig& cfg) {
  const Matrix& m = a.entries();
  const auto d = m.rows();
  const auto eig = eigenvalues_of(m);
  double norm = operator_norm(m);
  if (!(norm > 0.0)) norm = 1.0;
  const double clusterTol = cfg.clusterRelTol * norm;

  // One candidate per real eigenvalue and per upper-half-plane member of a
  // conjugate pair; near-real eigenvalues are snapped to the axis.
  std::vector<Complex> cand;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const Complex z = eig(i);
    if (std::abs(z.imag()) <= clusterTol) {
      cand.emplace_back(z.real(), 0.0);
    } else if (z.imag() > 0.0) {
      cand.push_back(z);
    }
  }

  // Single-linkage clustering.
  const std::size_t c = cand.size();
  std::vector<std::size_t> parent(c);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      if (std::abs(cand[i] - cand[j]) <= clusterTol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<long> slot(c, -1);
  for (std::size_t i = 0; i < c; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[root])].push_back(i);
  }

  Spectrum out;
  const ComplexMatrix mc = m.cast<Complex>();
  for (const auto& members : clusters) {
    Complex lambda{0.0, 0.0};
    for (auto i : members) lambda += cand[i];
    lambda /= static_cast<double>(members.size());
    const bool real = lambda.imag() == 0.0;
    const int mult = static_cast<int>(members.size());

    int block = 1;
    if (mult > 1) {
      const ComplexMatrix shifted = mc - lambda * ComplexMatrix::Identity(d, d);
      ComplexMatrix power = ComplexMatrix::Identity(d, d);
      int nullity1 = 0;
      int found = 0;
      for (int k = 1; k <= mult; ++k) {
        power = power * shifted;
        const double thr = cfg.rankRelTol * std::pow(norm, k);
        Eigen::JacobiSVD<ComplexMatrix> svd(power);
        const auto& sv = svd.singularValues();
        int nullity = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
          if (sv(i) < thr) ++nullity;
          if (sv(i) > thr / cfg.guardBand && sv(i) < thr * cfg.guardBand) {
            std::ostringstream w;
            w << "rank decision for eigenvalue (" << lambda.real() << ", " << lambda.imag()
              << ") at power " << k
              << " is within the guard band (sigma=" << sv(i) << ", threshold=" << thr << ")";
            out.warnings.push_back(w.str());
          }
        }
        if (k == 1) nullity1 = nullity;
        if (nullity >= mult) {
          found = k;
          break;
        }
      }
      if (found > 0) {
        block = found;
      } else {
        // Nullity never reached the cluster size: the cluster merged nearby
        // distinct eigenvalues. Use the largest block consistent with the
        // observed number of blocks.
        block = std::max(1, mult - std::max(nullity1, 1) + 1);
        std::ostringstream w;
        w << "eigenvalue cluster of size " << mult << " near " << lambda.real()
          << " is not numerically defective; using block size " << block;
        out.warnings.push_back(w.str());
      }
    }
    out.items.push_back({lambda.real(), std::abs(lambda.imag()), block});
    out.minimalDegree += (real ? 1 : 2) * block;
  }
  std::sort(out.items.begin(), out.items.end(), [](const SpectrumItem& x, const SpectrumItem& y) {
    if (x.alpha != y.alpha) return x.alpha > y.alpha;
    return x.beta < y.beta;
  });
  return out;
}

double BasisFunction::value(double t) const {
  const double trig = kind == Trig::Cos ? std::cos(beta * t) : std::sin(beta * t);
  return std::pow(t, power) * std::exp(alpha * t) * trig;
}

double BasisFunction::derivative(double t) const {
  const double e = std::exp(alpha * t);
  const double c = std::cos(beta * t);
  const double s = std::sin(beta * t);
  const double tk = std::pow(t, power);
  const double dtk = power == 0 ? 0.0 : power * std::pow(t, power - 1);
  const double radial = dtk + alpha * tk;
  return kind == Trig::Cos ? e * (radial * c - beta * tk * s) : e * (radial * s + beta * tk * c);
}

Basis::Basis(std::vector<BasisFunction> functions) : functions_(std::move(functions)) {
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    const auto& f = functions_[i];
    if (f.kind == Trig::Sin && !(f.beta > 0.0)) {
      throw ValidationError("sine basis function requires beta > 0");
    }
    if (f.power < 0 || f.power > 63) throw ValidationError("basis power must lie in [0, 63]");
    maxPower_ = std::max(maxPower_, f.power);
    auto g = std::find_if(groups_.begin(), groups_.end(), [&](const Group& gr) {
      return gr.alpha == f.alpha && gr.beta == f.beta;
    });
    if (g == groups_.end()) {
      groups_.push_back({f.alpha, f.beta, {i}});
    } else {
      g->members.push_back(i);
    }
  }
}

double Basis::max_frequency() const {
  double b = 0.0;
  for (const auto& f : functions_) b = std::max(b, f.beta);
  return b;
}

void Basis::values(double t, std::span<double> out) const {
  double powers[64];
  const int maxp = std::min(maxPower_, 63);
  powers[0] = 1.0;
  for (int k = 1; k <= maxp; ++k) powers[k] = powers[k - 1] * t;
  for (const auto& g : groups_) {
    const double e = std::exp(g.alpha * t);
    const double c = g.beta == 0.0 ? 1.0 : std::cos(g.beta * t);
    const double s = g.beta == 0.0 ? 0.0 : std::sin(g.beta * t);
    for (auto i : g.members) {
      const auto& f = functions_[i];
      out[i] = powers[f.power] * e * (f.kind == Trig::Cos ? c : s);
    }
  }
}

void Basis::derivatives(double t, std::span<double> out) const {
  double powers[64];
  const int maxp = std::min(maxPower_, 63);
  powers[0] = 1.0;
  for (int k = 1; k <= maxp; ++k) powers[k] = powers[k - 1] * t;
  for (const auto& g : groups_) {
    const double e = std::exp(g.alpha * t);
    const double c = g.beta == 0.0 ? 1.0 : std::cos(g.beta * t);
    const double s = g.beta == 0.0 ? 0.0 : std::sin(g.beta * t);
    for (auto i : g.members) {
      const auto& f = functions_[i];
      const double tk = powers[f.power];
      const double dtk = f.power == 0 ? 0.0 : f.power * powers[f.power - 1];
      const double radial = dtk + g.alpha * tk;
      out[i] = f.kind == Trig::Cos ? e * (radial * c - g.beta * tk * s)
                                   : e * (radial * s + g.beta * tk * c);
    }
  }
}

double Basis::collocation_condition(double horizon) const {
  const auto n = functions_.size();
  const auto nodes = chebyshev_nodes(n, horizon);
  Matrix m(n, n);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    values(nodes[j], col);
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return equilibrated_condition(m);
}

Basis build_basis(const Spectrum& spectrum) {
  auto items = spectrum.items;
  std::sort(items.begin(), items.end(), [](const SpectrumItem& a, const SpectrumItem& b) {
    if (a.alpha != b.alpha) return a.alpha > b.alpha;
    return a.beta < b.beta;
  });
  std::vector<BasisFunction> fns;
  for (const auto& it : items) {
    for (int k = 0; k < it.blockSize; ++k) {
      fns.push_back({it.alpha, it.beta, k, Trig::Cos});
      if (it.beta > 0.0) fns.push_back({it.alpha, it.beta, k, Trig::Sin});
    }
  }
  return Basis(std::move(fns));
}

}  // namespace tcut
