#include <gtest/gtest.h>

#include <random>

#include "sysmat/error.hpp"
#include "sysmat/minreal.hpp"
#include "support.hpp"

using namespace sysmat;
using namespace sysmat::testing;

namespace {

constexpr double kEps = 2.220446049250313e-16;

const std::vector<double> kE5{1.5, -2.0, 0.5, 3.0, -1.0, 0.25};
const std::vector<double> kE1{-3.0, 2.0};

std::vector<Complex> sample_points(std::uint64_t seed, int count) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Complex> pts;
  for (int i = 0; i < count; ++i) pts.emplace_back(u(gen), u(gen));
  return pts;
}

double transfer_gap(const SystemQuadruple& reduced, const SystemQuadruple& original,
                    const ComplexMatrix& wl, const ComplexMatrix& wr, std::uint64_t seed) {
  double worst = 0.0;
  for (Complex x : sample_points(seed, 10)) {
    const ComplexMatrix r = transfer_eval(original, x);
    const ComplexMatrix rr = transfer_eval(reduced, x);
    worst = std::max(worst, (rr - wl * r * wr).norm() / std::max(1.0, r.norm()));
  }
  return worst;
}

/// Controllable, observable state-space quadruple lambda*I - A0, B0, C0, D0.
SystemQuadruple state_space(std::uint64_t seed, Index d, Index m, Index n) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  auto rnd = [&](Index r, Index c) {
    ComplexMatrix x(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) x(i, j) = g(gen);
    return x;
  };
  return {Pencil(rnd(d, d), eye(d)), Pencil(-rnd(d, n), zeros(d, n)),
          Pencil(-rnd(m, d), zeros(m, d)), Pencil(-rnd(m, n), zeros(m, n))};
}

}  // namespace

TEST(StronglyMinimal, GenericStateSpace) {
  const MinimalityReport r = is_strongly_minimal(state_space(1, 3, 2, 2));
  EXPECT_TRUE(r.e_controllable);
  EXPECT_TRUE(r.e_observable);
  EXPECT_TRUE(r.strongly_minimal);
  EXPECT_TRUE(r.offending.empty());
}

TEST(StronglyMinimal, Example1FailsAtInfinity) {
  const MinimalityReport r = is_strongly_minimal(example1_quadruple(kE5, kE1));
  EXPECT_FALSE(r.strongly_minimal);
  EXPECT_FALSE(r.e_controllable);
  ASSERT_FALSE(r.offending.empty());
  for (const auto& o : r.offending) {
    EXPECT_FALSE(o.value.has_value());
  }
}

TEST(StronglyMinimal, Example2HasFiniteOffender) {
  const MinimalityReport r = is_strongly_minimal(example2_quadruple(kE5, kE1));
  EXPECT_FALSE(r.e_controllable);
  bool found_zero = false;
  for (const auto& o : r.offending)
    if (o.side == Side::controllable && o.value && std::abs(*o.value) < 1e-8) found_zero = true;
  EXPECT_TRUE(found_zero);
}

TEST(StronglyMinimal, SingularAThrows) {
  const SystemQuadruple q(Pencil(mat({{1, 0}, {0, 0}}), mat({{1, 0}, {0, 0}})),
                          Pencil::zero(2, 1), Pencil::zero(1, 2), Pencil::zero(1, 1));
  EXPECT_THROW(is_strongly_minimal(q), Error);
}

TEST(StronglyIrreducible, FollowsFromMinimality) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SystemQuadruple q = state_space(seed, 3, 2, 1);
    ASSERT_TRUE(is_strongly_minimal(q).strongly_minimal);
    EXPECT_TRUE(is_strongly_irreducible(q));
  }
}

TEST(StronglyIrreducible, DOnlyIsVacuous) {
  const SystemQuadruple q(Pencil::zero(0, 0), Pencil::zero(0, 2), Pencil::zero(2, 0),
                          Pencil(mat({{1, 2}, {3, 4}}), zeros(2, 2)));
  EXPECT_TRUE(is_strongly_irreducible(q));
}

TEST(ReduceControllable, AlreadyControllable) {
  const SystemQuadruple q = state_space(7, 3, 2, 2);
  const Reduction red = reduce_controllable(q);
  EXPECT_EQ(red.record.d_deflated, 0);
  EXPECT_EQ(red.q.state_dim(), 3);
  EXPECT_LT(unitarity_defect(red.record.w33), 100 * kEps);
  EXPECT_LT(transfer_gap(red.q, q, eye(2), red.record.w33, 3), 1e-12);
}

TEST(ReduceControllable, Example1DeflatesFourInfinite) {
  const SystemQuadruple q = example1_quadruple(kE5, kE1);
  const Reduction red = reduce_controllable(q);
  EXPECT_EQ(red.record.d_deflated, 4);
  const KroneckerReport x = kronecker_structure(red.record.x_deflated);
  EXPECT_TRUE(x.finite_eigen.empty());
  EXPECT_EQ(x.infinite_degree(), 4);
  EXPECT_FALSE(kronecker_structure(red.q.controllability_pencil()).has_eigenvalues());
  EXPECT_LT(unitarity_defect(red.record.w_tilde), 100 * kEps);
  EXPECT_LT(transfer_gap(red.q, q, eye(2), red.record.w33, 5), 1e-10);
}

TEST(ReduceControllable, Example2DeflatesZero) {
  const SystemQuadruple q = example2_quadruple(kE5, kE1);
  const Reduction red = reduce_controllable(q);
  const KroneckerReport x = kronecker_structure(red.record.x_deflated);
  ASSERT_EQ(x.finite_eigen.size(), 1u);
  EXPECT_LT(std::abs(x.finite_eigen[0].value), 1e-8);
  EXPECT_EQ(x.finite_eigen[0].partial_multiplicities, (std::vector<Index>{1}));
  EXPECT_EQ(red.record.d_deflated, 1 + x.infinite_degree());
  EXPECT_FALSE(kronecker_structure(red.q.controllability_pencil()).has_eigenvalues());
  EXPECT_LT(transfer_gap(red.q, q, eye(2), red.record.w33, 6), 1e-10);
}

TEST(ReduceControllable, ObservabilityPreserved) {
  // contract d): an E-observable input stays E-observable
  const SystemQuadruple q = example1_quadruple(kE5, kE1);
  ASSERT_TRUE(is_strongly_minimal(q).e_observable);
  EXPECT_TRUE(is_strongly_minimal(reduce_controllable(q).q).e_observable);
}

TEST(ReduceControllable, UnitaryAndNonUnitaryAgree) {
  const SystemQuadruple q = example2_quadruple(kE5, kE1);
  const Reduction u = reduce_controllable(q);
  const NonUnitaryReduction e = reduce_controllable_nonunitary(q);
  EXPECT_EQ(u.record.d_deflated, e.d_deflated);
  // R_E = R exactly, while the unitary variant realizes R * W33
  EXPECT_LT(transfer_gap(e.q, q, eye(2), eye(2), 8), 1e-10);
  for (Complex x : sample_points(9, 5)) {
    const ComplexMatrix diff = transfer_eval(u.q, x) - transfer_eval(e.q, x) * u.record.w33;
    EXPECT_LT(diff.norm(), 1e-10 * std::max(1.0, transfer_eval(u.q, x).norm()));
  }
}

TEST(ReduceObservable, AlreadyObservable) {
  const SystemQuadruple q = state_space(11, 2, 1, 2);
  EXPECT_EQ(reduce_observable(q).record.d_deflated, 0);
}

TEST(ReduceObservable, TransposedExample2) {
  const SystemQuadruple q = example2_quadruple(kE5, kE1).transposed();
  const Reduction red = reduce_observable(q);
  const KroneckerReport x = kronecker_structure(red.record.x_deflated);
  ASSERT_EQ(x.finite_eigen.size(), 1u);
  EXPECT_LT(std::abs(x.finite_eigen[0].value), 1e-8);
  EXPECT_FALSE(kronecker_structure(red.q.observability_pencil()).has_eigenvalues());
  EXPECT_LT(transfer_gap(red.q, q, red.record.w33, eye(2), 12), 1e-10);
}

TEST(ReduceObservable, UnobservableScalarState) {
  // A = lambda, C = 0: eigenvalue 0 cannot be seen
  const SystemQuadruple q(Pencil(zeros(1, 1), eye(1)), Pencil(-eye(1), zeros(1, 1)),
                          Pencil::zero(1, 1), Pencil(mat({{2}}), zeros(1, 1)));
  const Reduction red = reduce_observable(q);
  EXPECT_EQ(red.record.d_deflated, 1);
  EXPECT_EQ(red.q.state_dim(), 0);
}

TEST(StronglyMinimalReduce, Example1) {
  const SystemQuadruple q = example1_quadruple(kE5, kE1);
  const MinimalReduction red = strongly_minimal_reduce(q);
  EXPECT_EQ(red.q.state_dim(), 4);
  EXPECT_TRUE(is_strongly_minimal(red.q).strongly_minimal);
  EXPECT_EQ(numerical_rank(system_pencil(red.q).l1(), RankTolerance::relative(1e-12)), 6);
  EXPECT_LT(transfer_gap(red.q, q, red.wl, red.wr, 13), 1e-10);
}

TEST(StronglyMinimalReduce, Example2BothOrders) {
  const SystemQuadruple q = example2_quadruple(kE5, kE1);
  for (ReductionOrder order :
       {ReductionOrder::controllable_first, ReductionOrder::observable_first}) {
    const MinimalReduction red = strongly_minimal_reduce(q, kDefaultTol, 0x5eed, order);
    EXPECT_TRUE(is_strongly_minimal(red.q).strongly_minimal);
    EXPECT_LT(transfer_gap(red.q, q, red.wl, red.wr, 14), 1e-10);
    Index deflated = 0;
    for (const auto& r : red.records) deflated += r.d_deflated;
    EXPECT_EQ(deflated + red.q.state_dim(), q.state_dim());
  }
}

TEST(StronglyMinimalReduce, MinimalInputUnchangedInSize) {
  const SystemQuadruple q = state_space(21, 4, 2, 3);
  const MinimalReduction red = strongly_minimal_reduce(q);
  EXPECT_EQ(red.q.state_dim(), 4);
  EXPECT_LT(unitarity_defect(red.wl), 100 * kEps);
  EXPECT_LT(unitarity_defect(red.wr), 100 * kEps);
}

TEST(ReduceControllable, Example2DeflationDoesNotDependOnSeed) {
  // a barely admissible rotation angle used to hide the regular part
  const SystemQuadruple q = example2_quadruple(kE5, kE1);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Reduction red = reduce_controllable(q, kDefaultTol, seed);
    EXPECT_EQ(red.record.d_deflated, 5) << "seed " << seed;
  }
}

TEST(ReduceControllable, TinyLeadingCoefficientKeepsLargeRoot) {
  // e5 = q * (lambda / 2^17 - 1): exact root 131072 next to the Jordan block at infinity
  const std::vector<double> q{1.0, -2.0, 0.5, 3.0, -1.0};
  const double inv = 1.0 / 131072.0;
  std::vector<double> e5(6, 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    e5[i] -= q[i];
    e5[i + 1] += q[i] * inv;
  }
  const Reduction red = reduce_controllable(example1_quadruple(e5, kE1));
  EXPECT_EQ(red.record.d_deflated, 4);
  const std::vector<Complex> eig = finite_values(generalized_eigenvalues(system_pencil(red.q)));
  ASSERT_EQ(eig.size(), 6u);
  double err = 1.0;
  for (Complex v : eig) err = std::min(err, std::abs(v - 131072.0) / 131072.0);
  EXPECT_LT(err, 1e-12);
}
