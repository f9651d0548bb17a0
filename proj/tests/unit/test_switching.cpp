#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "random_matrices.hpp"
#include "tcut/errors.hpp"
#include "tcut/switching.hpp"

using namespace tcut;
using tcut::testkit::example_a1;
using tcut::testkit::example_a2;

namespace {

constexpr double kTcutA1 = 1.422833846323806;

SwitchedSystem example_system(double upper = 2.5) {
  return SwitchedSystem({{"A1", SystemMatrix(example_a1()), 1.0, upper},
                         {"A2", SystemMatrix(example_a2()), 1.0, upper}});
}

SwitchedSystem scalar_system() {
  return SwitchedSystem({{"s", SystemMatrix(Matrix::Constant(1, 1, -1.0)), 1.0}});
}

}  // namespace

TEST(SwitchedSystem, Validation) {
  EXPECT_THROW(SwitchedSystem({}), ValidationError);
  try {
    SwitchedSystem({{"A1", SystemMatrix(example_a1()), 1.0, 1.0}});
    FAIL() << "M = m accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("A1"), std::string::npos);
  }
  EXPECT_THROW(SwitchedSystem({{"a", SystemMatrix(example_a1()), 1.0},
                               {"a", SystemMatrix(example_a2()), 1.0}}),
               ValidationError);
  EXPECT_THROW(SwitchedSystem({{"a", SystemMatrix(example_a1()), 0.0}}), ValidationError);
  EXPECT_THROW(SwitchedSystem({{"a", SystemMatrix(example_a1()), 1.0},
                               {"b", SystemMatrix(Matrix::Constant(1, 1, -1.0)), 1.0}}),
               ValidationError);
  EXPECT_EQ(example_system().dim(), 2);
  EXPECT_THROW(example_system().regime("A3"), ValidationError);
}

TEST(LawViolations, ReportsEachOffendingSegment) {
  const SwitchedSystem sys = example_system();
  EXPECT_TRUE(law_violations(sys, {{{"A1", 1.0}, {"A2", 2.5}, {"A1", 1.7}}}).empty());
  EXPECT_TRUE(law_violations(sys, {}).empty());
  EXPECT_EQ(law_violations(sys, {{{"A1", 0.5}, {"A2", 3.0}}}).size(), 2u);
  EXPECT_EQ(law_violations(sys, {{{"A1", 1.0}, {"A1", 1.0}}}).size(), 1u);
  EXPECT_EQ(law_violations(sys, {{{"B", 1.0}}}).size(), 1u);
}

TEST(CriticalBounds, ReferencePair) {
  const DwellReport r = critical_bounds(example_system(), 1e-6);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(r.allHurwitz);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.tcut && row.criticalM);
    EXPECT_NEAR(*row.tcut, kTcutA1, 2e-6);
    EXPECT_EQ(*row.criticalM - row.dwell - *row.tcut, 0.0);
    EXPECT_LE(*row.tcutLow, *row.tcut);
    EXPECT_GE(*row.tcutHigh, *row.tcut);
  }
  EXPECT_TRUE(r.boundsCoverCritical);
  EXPECT_NE(r.verdictNote.find("m + T_cut"), std::string::npos);
}

TEST(CriticalBounds, UpperBelowCriticalIsReported) {
  const DwellReport r = critical_bounds(example_system(2.0), 1e-6);
  EXPECT_TRUE(r.allHurwitz);
  EXPECT_FALSE(r.boundsCoverCritical);
  const DwellReport open = critical_bounds(example_system(std::numeric_limits<double>::infinity()), 1e-6);
  EXPECT_FALSE(open.boundsCoverCritical);
}

TEST(CriticalBounds, ScalarRegime) {
  const DwellReport r = critical_bounds(scalar_system(), 1e-6);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(*r.rows[0].tcut, 0.0);
  EXPECT_EQ(*r.rows[0].criticalM, 1.0);
}

TEST(CriticalBounds, NonHurwitzRegimeIsAReportOutcome) {
  const SwitchedSystem sys({{"good", SystemMatrix(Matrix::Constant(1, 1, -1.0)), 1.0},
                            {"bad", SystemMatrix(Matrix::Constant(1, 1, 1.0)), 1.0}});
  const DwellReport r = critical_bounds(sys, 1e-6);
  EXPECT_FALSE(r.allHurwitz);
  EXPECT_FALSE(r.boundsCoverCritical);
  EXPECT_NE(r.verdictNote.find("'bad' is not Hurwitz"), std::string::npos);
  for (const auto& row : r.rows) EXPECT_FALSE(row.tcut.has_value());
}

TEST(Simulate, SingleSegmentMatchesClosedForm) {
  const SwitchedSystem sys = example_system();
  const Vector x0 = Vector::Unit(2, 0);
  const auto traj = simulate(sys, {{{"A1", 1.0}}}, x0, 10);
  ASSERT_EQ(traj.size(), 11u);
  EXPECT_EQ(traj.front().t, 0.0);
  for (const auto& s : traj) {
    const Vector expected = testkit::expm2_closed_form(example_a1(), s.t) * x0;
    EXPECT_LT((s.x - expected).norm(), 1e-12 * (1.0 + expected.norm()));
    EXPECT_NEAR(s.norm, s.x.norm(), 1e-15);
  }
  EXPECT_NEAR(traj.back().t, 1.0, 1e-15);
}

TEST(Simulate, EmptyLawAndRejections) {
  const SwitchedSystem sys = example_system();
  const Vector x0 = Vector::Unit(2, 1);
  const auto traj = simulate(sys, {}, x0, 5);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0].x, x0);
  EXPECT_THROW(simulate(sys, {{{"A1", 1.0}, {"A1", 1.0}}}, x0, 5), ValidationError);
  EXPECT_THROW(simulate(sys, {{{"A1", 0.2}}}, x0, 5), ValidationError);
  EXPECT_THROW(simulate(sys, {{{"A1", 1.0}}}, Vector::Ones(3), 5), ValidationError);
}

TEST(Simulate, SemigroupProperty) {
  const SwitchedSystem sys = example_system();
  const Vector x0(Vector::Ones(2));
  const SwitchingLaw first{{{"A1", 1.3}, {"A2", 2.1}}};
  const SwitchingLaw second{{{"A1", 1.9}, {"A2", 1.0}, {"A1", 2.4}}};
  SwitchingLaw joined = first;
  joined.segments.insert(joined.segments.end(), second.segments.begin(), second.segments.end());
  const Vector mid = simulate(sys, first, x0, 1).back().x;
  const Vector chained = simulate(sys, second, mid, 1).back().x;
  const Vector direct = simulate(sys, joined, x0, 1).back().x;
  EXPECT_LT((chained - direct).norm(), 1e-10 * direct.norm());
}

TEST(TransitionMatrix, TruncatesLastSegment) {
  const SwitchedSystem sys = example_system();
  const Matrix phi = transition_matrix(sys, {{{"A1", 1.0}, {"A2", 2.0}}}, 1.5);
  const Matrix expected =
      testkit::expm2_closed_form(example_a2(), 0.5) * testkit::expm2_closed_form(example_a1(), 1.0);
  EXPECT_LT((phi - expected).norm(), 1e-12);
  EXPECT_THROW(transition_matrix(sys, {{{"A1", 1.0}}}, 1.5), ValidationError);
}

TEST(RandomSearch, DeterministicAndScheduleIndependent) {
  const SwitchedSystem sys = example_system();
  const std::vector<double> tcuts{kTcutA1, kTcutA1};
  const SearchOutcome a = random_switching_search(sys, tcuts, 40, 20.0, 5, kernels::Execution::Parallel);
  const SearchOutcome b = random_switching_search(sys, tcuts, 40, 20.0, 5, kernels::Execution::Parallel);
  const SearchOutcome c = random_switching_search(sys, tcuts, 40, 20.0, 5, kernels::Execution::Serial);
  EXPECT_EQ(a.growth, b.growth);
  EXPECT_EQ(a.growth, c.growth);
  EXPECT_EQ(a.worstTrial, c.worstTrial);
  EXPECT_EQ(a.worstGrowth, *std::max_element(a.growth.begin(), a.growth.end()));
  const SearchOutcome d = random_switching_search(sys, tcuts, 40, 20.0, 6);
  EXPECT_NE(a.growth, d.growth);
}

TEST(RandomSearch, LawsAreAdmissibleAndCoverHorizon) {
  const SwitchedSystem sys = example_system();
  const SearchOutcome o = random_switching_search(sys, {kTcutA1, kTcutA1}, 20, 30.0, 9);
  EXPECT_TRUE(law_violations(sys, o.worstLaw).empty());
  double total = 0.0;
  for (const auto& s : o.worstLaw.segments) {
    total += s.duration;
    EXPECT_LE(s.duration, 1.0 + 3 * kTcutA1 + 1e-12);
  }
  EXPECT_GE(total, 30.0);
  EXPECT_NEAR(o.worstInitial.norm(), 1.0, 1e-12);
  const Matrix phi = transition_matrix(sys, o.worstLaw, 30.0);
  EXPECT_NEAR((phi * o.worstInitial).norm(), o.worstGrowth, 1e-12 * (1 + o.worstGrowth));
}

TEST(RandomSearch, SingleRegimeDecays) {
  const SearchOutcome o = random_switching_search(scalar_system(), 10, 20.0, 1);
  EXPECT_LT(o.worstGrowth, 1.0);
  EXPECT_NEAR(o.worstGrowth, std::exp(-20.0), 1e-20);
}

TEST(RandomSearch, SimilarityInvariantUpToCondition) {
  std::mt19937_64 rng(51);
  const Matrix s = testkit::random_similarity(rng, 2);
  const Matrix si = s.inverse();
  const SwitchedSystem sys = example_system();
  const SwitchedSystem conj({{"A1", SystemMatrix(s * example_a1() * si), 1.0, 2.5},
                             {"A2", SystemMatrix(s * example_a2() * si), 1.0, 2.5}});
  const std::vector<double> tcuts{kTcutA1, kTcutA1};
  const SearchOutcome a = random_switching_search(sys, tcuts, 30, 25.0, 3);
  const SearchOutcome b = random_switching_search(conj, tcuts, 30, 25.0, 3);
  const Eigen::JacobiSVD<Matrix> svd(s);
  const double kappa = svd.singularValues()(0) / svd.singularValues()(1);
  for (std::size_t i = 0; i < a.growth.size(); ++i) {
    EXPECT_LE(std::abs(std::log(b.growth[i] / a.growth[i])), std::log(kappa) + 1e-9);
  }
}

TEST(RandomSearch, Guards) {
  EXPECT_THROW(random_switching_search(example_system(), std::vector<double>{1.0, 1.0}, 0, 10.0, 1), ValidationError);
  EXPECT_THROW(random_switching_search(example_system(), std::vector<double>{1.0}, 5, 10.0, 1), ValidationError);
  const SwitchedSystem bounded({{"s", SystemMatrix(Matrix::Constant(1, 1, -1.0)), 1.0, 2.0}});
  EXPECT_THROW(random_switching_search(bounded, std::vector<double>{0.0}, 5, 10.0, 1), ValidationError);
}
