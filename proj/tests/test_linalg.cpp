#include <gtest/gtest.h>

#include <algorithm>

#include "sysmat/error.hpp"
#include "sysmat/linalg.hpp"

using namespace sysmat;

namespace {

constexpr double kEps = 2.220446049250313e-16;

ComplexMatrix real(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::vector<Complex> sorted_by_real(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return v;
}

}  // namespace

TEST(RankRevealing, IdentityHasFullRank) {
  const auto rr = rank_revealing(ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(rr.decision.rank, 3);
  for (double s : rr.decision.singular_values) EXPECT_NEAR(s, 1.0, 1e-15);
}

TEST(RankRevealing, ZeroMatrixHasRankZero) {
  EXPECT_EQ(rank_revealing(ComplexMatrix::Zero(2, 2)).decision.rank, 0);
}

TEST(RankRevealing, TinySingularValueIsDropped) {
  const auto rr = rank_revealing(real({{1, 0}, {0, 1e-16}}), 1e-12);
  EXPECT_EQ(rr.decision.rank, 1);
  EXPECT_DOUBLE_EQ(rr.decision.tolerance_used, 1e-12 * 2 * 1.0);
}

TEST(RankRevealing, ReconstructsInput) {
  const ComplexMatrix m = ComplexMatrix::Random(4, 6);
  const auto rr = rank_revealing(m);
  ComplexMatrix sigma = ComplexMatrix::Zero(4, 6);
  for (Index i = 0; i < 4; ++i) sigma(i, i) = rr.singular_values(i);
  EXPECT_LT((rr.left * sigma * rr.right.adjoint() - m).norm(), 50 * kEps * m.norm());
  EXPECT_TRUE(std::is_sorted(rr.decision.singular_values.rbegin(),
                             rr.decision.singular_values.rend()));
}

TEST(RankRevealing, EmptyInputThrows) {
  try {
    rank_revealing(ComplexMatrix(0, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_matrix);
  }
}

TEST(RankRevealing, AmbiguityFlagNearThreshold) {
  EXPECT_TRUE(rank_revealing(real({{1, 0}, {0, 3e-12}}), 1e-12).decision.ambiguous);
  EXPECT_FALSE(rank_revealing(real({{1, 0}, {0, 1e-3}}), 1e-12).decision.ambiguous);
}

TEST(RowCompress, SingleNonzeroRowMovesToTop) {
  const ComplexMatrix m = real({{0}, {5}});
  const auto c = row_compress(m);
  EXPECT_EQ(c.rank, 1);
  const ComplexMatrix um = c.transform * m;
  EXPECT_NEAR(std::abs(um(0, 0)), 5.0, 1e-14);
  EXPECT_NEAR(std::abs(um(1, 0)), 0.0, 1e-14);
}

TEST(RowCompress, ZeroMatrix) {
  EXPECT_EQ(row_compress(ComplexMatrix::Zero(3, 2)).rank, 0);
}

TEST(RowCompress, RepeatedRowHasRankOne) {
  const ComplexMatrix m = real({{1, 0}, {1, 0}});
  const auto c = row_compress(m);
  EXPECT_EQ(c.rank, 1);
  const ComplexMatrix um = c.transform * m;
  EXPECT_LT(um.row(1).norm(), 1e-14);
  EXPECT_LT(unitarity_defect(c.transform), 10 * kEps);
}

TEST(RowCompress, BottomPlacement) {
  const ComplexMatrix m = real({{1, 2}, {0, 0}, {0, 0}});
  const auto c = row_compress(m, RankTolerance::relative(1e-12), RowPlacement::bottom);
  const ComplexMatrix um = c.transform * m;
  EXPECT_LT(um.topRows(2).norm(), 1e-14);
  EXPECT_NEAR(um.row(2).norm(), std::sqrt(5.0), 1e-14);
}

TEST(ColCompress, HouseholderOnOnes) {
  const ComplexMatrix m = real({{1, 1}});
  const auto c = col_compress(m);
  EXPECT_EQ(c.rank, 1);
  const ComplexMatrix mv = m * c.transform;
  EXPECT_NEAR(std::abs(mv(0, 0)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(mv(0, 1)), 0.0, 1e-15);
}

TEST(ColCompress, IdentityAndZero) {
  EXPECT_EQ(col_compress(ComplexMatrix::Identity(3, 3)).rank, 3);
  EXPECT_EQ(col_compress(ComplexMatrix::Zero(2, 3)).rank, 0);
}

TEST(ColCompress, LeftZeros) {
  const ComplexMatrix m = real({{1, 1, 0}, {2, 2, 0}});
  const auto c = col_compress(m, 1e-12, ZeroSide::left);
  const ComplexMatrix mv = m * c.transform;
  EXPECT_LT(mv.leftCols(2).norm(), 1e-14);
  EXPECT_LT(unitarity_defect(c.transform), 10 * kEps);
}

TEST(CompleteRows, ProducesUnitary) {
  const ComplexMatrix q = random_unitary(5, 3);
  const ComplexMatrix full = complete_rows_to_unitary(q.topRows(2));
  EXPECT_LT(unitarity_defect(full), 1e-14);
  EXPECT_LT((full.topRows(2) - q.topRows(2)).norm(), 1e-15);
}

TEST(GeneralizedEigenvalues, DiagonalPencil) {
  const auto ev = generalized_eigenvalues(real({{1, 0}, {0, 2}}), ComplexMatrix::Identity(2, 2));
  ASSERT_EQ(ev.size(), 2u);
  std::vector<Complex> v{ev[0].value, ev[1].value};
  v = sorted_by_real(v);
  EXPECT_NEAR(std::abs(v[0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v[1] - 2.0), 0.0, 1e-14);
}

TEST(GeneralizedEigenvalues, OneInfinite) {
  const auto ev = generalized_eigenvalues(ComplexMatrix::Identity(2, 2), real({{1, 0}, {0, 0}}));
  int infinite = 0;
  for (const auto& e : ev) {
    if (e.infinite) {
      ++infinite;
    } else {
      EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-14);
    }
  }
  EXPECT_EQ(infinite, 1);
}

TEST(GeneralizedEigenvalues, NilpotentLeadingCoefficient) {
  const auto ev = generalized_eigenvalues(ComplexMatrix::Identity(2, 2), real({{0, 1}, {0, 0}}));
  EXPECT_TRUE(ev[0].infinite);
  EXPECT_TRUE(ev[1].infinite);
}

TEST(GeneralizedEigenvalues, SingularPencilThrows) {
  try {
    generalized_eigenvalues(real({{1, 0}, {0, 0}}), real({{1, 0}, {0, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_pencil);
  }
}

TEST(GeneralizedEigenvalues, UnitaryEquivalenceInvariance) {
  const ComplexMatrix l0 = real({{1, 2, 0}, {0, -3, 1}, {0, 0, 4}});
  const ComplexMatrix l1 = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix q = random_unitary(3, 11);
  const ComplexMatrix z = random_unitary(3, 12);
  auto a = generalized_eigenvalues(l0, l1);
  auto b = generalized_eigenvalues(q * l0 * z, q * l1 * z);
  std::vector<Complex> va, vb;
  for (auto& e : a) va.push_back(e.value);
  for (auto& e : b) vb.push_back(e.value);
  va = sorted_by_real(va);
  vb = sorted_by_real(vb);
  for (std::size_t i = 0; i < va.size(); ++i) EXPECT_NEAR(std::abs(va[i] - vb[i]), 0.0, 1e-12);
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
  const ComplexMatrix q = random_unitary(6, 42);
  EXPECT_LT(unitarity_defect(q), 1e-14);
  EXPECT_EQ(q, random_unitary(6, 42));
}
