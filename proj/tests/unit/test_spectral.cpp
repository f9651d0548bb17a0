#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "random_matrices.hpp"
#include "tcut/errors.hpp"
#include "tcut/quasipoly.hpp"
#include "tcut/spectral.hpp"

using namespace tcut;
using tcut::testkit::example_a1;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(SystemMatrix, RejectsBadShapes) {
  EXPECT_THROW(SystemMatrix(Matrix(0, 0)), ValidationError);
  EXPECT_THROW(SystemMatrix(Matrix::Zero(2, 3)), ValidationError);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SystemMatrix{nan}, ValidationError);
  nan(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(SystemMatrix{nan}, ValidationError);
}

TEST(IsHurwitz, Examples) {
  EXPECT_TRUE(is_hurwitz(SystemMatrix(Matrix::Constant(1, 1, -1.0))));
  EXPECT_FALSE(is_hurwitz(SystemMatrix(m2(0, 1, -1, 0))));
  EXPECT_TRUE(is_hurwitz(SystemMatrix(example_a1())));
  EXPECT_FALSE(is_hurwitz(SystemMatrix(Matrix::Constant(1, 1, 1.0))));
  EXPECT_FALSE(is_hurwitz(SystemMatrix(Matrix::Constant(1, 1, -1e-13))));
}

TEST(ComputeSpectrum, ReferencePairIsAComplexPair) {
  const Spectrum s = compute_spectrum(SystemMatrix(example_a1()));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_NEAR(s.items[0].alpha, -0.3216, 1e-12);
  EXPECT_NEAR(s.items[0].beta, std::numbers::sqrt2, 1e-12);
  EXPECT_EQ(s.items[0].blockSize, 1);
  EXPECT_EQ(s.minimalDegree, 2);
}

TEST(ComputeSpectrum, DiagonalDistinct) {
  const Spectrum s = compute_spectrum(SystemMatrix(m2(-1, 0, 0, -2)));
  ASSERT_EQ(s.items.size(), 2u);
  EXPECT_DOUBLE_EQ(s.items[0].alpha, -1.0);
  EXPECT_DOUBLE_EQ(s.items[1].alpha, -2.0);
  EXPECT_EQ(s.items[0].beta, 0.0);
  EXPECT_EQ(s.minimalDegree, 2);
}

TEST(ComputeSpectrum, RepeatedSemisimpleHasDegreeOne) {
  const Spectrum s = compute_spectrum(SystemMatrix(m2(-1, 0, 0, -1)));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_EQ(s.items[0].blockSize, 1);
  EXPECT_EQ(s.minimalDegree, 1);
}

TEST(ComputeSpectrum, JordanBlockOfSizeTwo) {
  const Spectrum s = compute_spectrum(SystemMatrix(m2(-1, 1, 0, -1)));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_EQ(s.items[0].blockSize, 2);
  EXPECT_EQ(s.minimalDegree, 2);
}

TEST(ComputeSpectrum, ComplexJordanBlock) {
  // Real form of a 2x2 Jordan block at -0.5 +- i.
  Matrix a = Matrix::Zero(4, 4);
  a.topLeftCorner(2, 2) = m2(-0.5, 1, -1, -0.5);
  a.bottomRightCorner(2, 2) = m2(-0.5, 1, -1, -0.5);
  a.topRightCorner(2, 2) = Matrix::Identity(2, 2);
  const Spectrum s = compute_spectrum(SystemMatrix(a));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_NEAR(s.items[0].beta, 1.0, 1e-6);
  EXPECT_EQ(s.items[0].blockSize, 2);
  EXPECT_EQ(s.minimalDegree, 4);
}

TEST(ComputeSpectrum, SimilarityInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 4;
    const auto ev = testkit::random_eigenvalues(rng, d, testkit::SpectrumKind::Mixed);
    const Matrix b = testkit::real_form(ev);
    const Matrix s = testkit::random_similarity(rng, d);
    const Spectrum sb = compute_spectrum(SystemMatrix(b));
    const Spectrum sa = compute_spectrum(SystemMatrix(s * b * s.inverse()));
    ASSERT_EQ(sa.items.size(), sb.items.size());
    EXPECT_EQ(sa.minimalDegree, sb.minimalDegree);
    for (std::size_t i = 0; i < sa.items.size(); ++i) {
      EXPECT_NEAR(sa.items[i].alpha, sb.items[i].alpha, 1e-9);
      EXPECT_NEAR(sa.items[i].beta, sb.items[i].beta, 1e-9);
      EXPECT_EQ(sa.items[i].blockSize, sb.items[i].blockSize);
    }
  }
}

TEST(ComputeSpectrum, BlockDiagonalKeepsMinimalDegree) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = testkit::random_hurwitz(rng, 2 + trial % 3, testkit::SpectrumKind::Mixed);
    EXPECT_EQ(compute_spectrum(SystemMatrix(testkit::blockdiag(a, a))).minimalDegree,
              compute_spectrum(SystemMatrix(a)).minimalDegree);
  }
}

TEST(MakeSpectrum, ValidatesOverrides) {
  const Spectrum s = make_spectrum({{-1.0, 0.0, 2}, {-0.5, 2.0, 1}});
  EXPECT_EQ(s.minimalDegree, 4);
  EXPECT_THROW(make_spectrum({{-1.0, -1.0, 1}}), ValidationError);
  EXPECT_THROW(make_spectrum({{-1.0, 0.0, 0}}), ValidationError);
  EXPECT_THROW(make_spectrum({{-1.0, 0.0, 1}, {-1.0, 0.0, 1}}), ValidationError);
  EXPECT_THROW(make_spectrum({}), ValidationError);
}

TEST(BuildBasis, SingleReal) {
  const Basis b = build_basis(make_spectrum({{-1.0, 0.0, 1}}));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_DOUBLE_EQ(b[0].value(0.7), std::exp(-0.7));
}

TEST(BuildBasis, ReferencePairCosThenSin) {
  const Basis b = build_basis(make_spectrum({{-0.3216, std::numbers::sqrt2, 1}}));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].kind, Trig::Cos);
  EXPECT_EQ(b[1].kind, Trig::Sin);
  const double t = 0.9;
  EXPECT_NEAR(b[0].value(t), std::exp(-0.3216 * t) * std::cos(std::numbers::sqrt2 * t), 1e-15);
  EXPECT_NEAR(b[1].value(t), std::exp(-0.3216 * t) * std::sin(std::numbers::sqrt2 * t), 1e-15);
}

TEST(BuildBasis, JordanPowers) {
  const Basis b = build_basis(make_spectrum({{-1.0, 0.0, 2}}));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].power, 0);
  EXPECT_EQ(b[1].power, 1);
  EXPECT_NEAR(b[1].value(2.0), 2.0 * std::exp(-2.0), 1e-15);
}

TEST(BuildBasis, DeterministicOrdering) {
  const Basis b = build_basis(make_spectrum({{-2.0, 0.0, 1}, {-0.5, 3.0, 1}, {-0.5, 1.0, 2}}));
  ASSERT_EQ(b.size(), 7u);
  // alpha descending, beta ascending, power ascending, cos before sin
  EXPECT_EQ(b[0].alpha, -0.5);
  EXPECT_EQ(b[0].beta, 1.0);
  EXPECT_EQ(b[0].power, 0);
  EXPECT_EQ(b[0].kind, Trig::Cos);
  EXPECT_EQ(b[1].kind, Trig::Sin);
  EXPECT_EQ(b[2].power, 1);
  EXPECT_EQ(b[4].beta, 3.0);
  EXPECT_EQ(b[6].alpha, -2.0);
}

TEST(Basis, GroupedEvaluationMatchesScalar) {
  const Basis b = build_basis(make_spectrum({{-2.0, 0.0, 3}, {-0.5, 1.5, 2}}));
  std::vector<double> vals(b.size()), ders(b.size());
  for (double t : {0.0, 0.3, 1.7, 5.0}) {
    b.values(t, vals);
    b.derivatives(t, ders);
    for (std::size_t i = 0; i < b.size(); ++i) {
      EXPECT_NEAR(vals[i], b[i].value(t), 1e-14);
      EXPECT_NEAR(ders[i], b[i].derivative(t), 1e-14);
    }
  }
}

TEST(Basis, CollocationIsNonsingular) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = testkit::random_hurwitz(rng, 2 + trial % 4, testkit::SpectrumKind::Mixed);
    const Basis b = build_basis(compute_spectrum(SystemMatrix(a)));
    EXPECT_LT(b.collocation_condition(2.0), 1e12);
  }
}

// Every coordinate functional of e^{tA} x0 lies in the span of the basis.
TEST(Basis, ReproducesTrajectoryCoordinates) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const Matrix a = testkit::random_hurwitz(rng, d, testkit::SpectrumKind::Mixed);
    const Basis basis = build_basis(compute_spectrum(SystemMatrix(a)));
    const auto n = static_cast<Eigen::Index>(basis.size());
    Vector x0(d), y(d);
    for (int i = 0; i < d; ++i) {
      x0(i) = g(rng);
      y(i) = g(rng);
    }
    const double horizon = 1.0 / -testkit::max_real_part(a);
    auto f = [&](double t) { return y.dot(expm(t * a) * x0); };
    Matrix u(n, n);
    Vector rhs(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t = horizon * 0.5 * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / n));
      u.row(j) = moment_vector(basis, t).transpose();
      rhs(j) = f(t);
    }
    const Vector c = u.colPivHouseholderQr().solve(rhs);
    double scale = 0.0, worst = 0.0;
    for (int j = 0; j < 10 * n; ++j) {
      const double t = horizon * (j + 0.37) / (10.0 * static_cast<double>(n));
      scale = std::max(scale, std::abs(f(t)));
      worst = std::max(worst, std::abs(moment_vector(basis, t).dot(c) - f(t)));
    }
    EXPECT_LT(worst, 1e-8 * scale) << "trial " << trial << " d " << d;
  }
}

TEST(Expm, MatchesClosedFormOnTwoByTwo) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = testkit::random_hurwitz(
        rng, 2, trial % 2 ? testkit::SpectrumKind::Real : testkit::SpectrumKind::Complex);
    for (double t : {0.1, 1.0, 7.5}) {
      const Matrix ref = testkit::expm2_closed_form(a, t);
      EXPECT_LT((expm(t * a) - ref).norm(), 1e-12 * std::max(1.0, ref.norm()));
    }
  }
}
