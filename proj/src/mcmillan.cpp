#include "sysmat/mcmillan.hpp"

#include <algorithm>
#include <numeric>

#include "sysmat/error.hpp"
#include "sysmat/minreal.hpp"
#include "sysmat/staircase.hpp"

namespace sysmat {

namespace {

constexpr double kSamePoint = 1e-6;

bool same_point(Complex a, Complex b) {
  return std::abs(a - b) <= kSamePoint * std::max({1.0, std::abs(a), std::abs(b)});
}

struct PointAccumulator {
  Complex value;
  std::vector<Index> poles;
  std::vector<Index> zeros;
};

PointAccumulator& find_or_add(std::vector<PointAccumulator>& pts, Complex v) {
  for (auto& p : pts)
    if (same_point(p.value, v)) return p;
  pts.push_back({v, {}, {}});
  return pts.back();
}

}  // namespace

void McMillanStructure::update_degrees() {
  polar_degree = 0;
  zero_degree = 0;
  auto add = [&](const std::vector<Index>& idx) {
    for (Index d : idx) {
      if (d < 0) polar_degree -= d;
      if (d > 0) zero_degree += d;
    }
  };
  for (const auto& p : finite_points) add(p.indices);
  add(infinity_indices);
  mcmillan_degree = polar_degree;
}

std::vector<Index> merge_indices(const std::vector<Index>& pole_orders,
                                 const std::vector<Index>& zero_orders, Index r) {
  if (static_cast<Index>(pole_orders.size() + zero_orders.size()) > r)
    throw Error(Errc::structural_inconsistency,
                "more nonzero structural indices than the normal rank allows");
  std::vector<Index> out;
  for (Index k : pole_orders) out.push_back(-k);
  for (Index k : zero_orders) out.push_back(k);
  out.resize(static_cast<std::size_t>(r), 0);
  std::sort(out.begin(), out.end());
  return out;
}

Pencil infinite_pole_pencil(const SystemQuadruple& q) {
  const Index d = q.state_dim();
  const Index m = q.outputs();
  const Index n = q.inputs();
  const Index size = d + m + n;
  ComplexMatrix l1 = ComplexMatrix::Zero(size, size);
  ComplexMatrix l0 = ComplexMatrix::Zero(size, size);
  l1.block(0, 0, d, d) = q.a().l1();
  l1.block(0, d, d, n) = -q.b().l1();
  l1.block(d, 0, m, d) = q.c().l1();
  l1.block(d, d, m, n) = q.d().l1();
  l0.block(0, 0, d, d) = q.a().l0();
  l0.block(d, d + n, m, m) = ComplexMatrix::Identity(m, m);
  l0.block(d + m, d, n, n) = -ComplexMatrix::Identity(n, n);
  return {l0, l1};
}

McMillanStructure rational_structure(const SystemQuadruple& input, const StructureOptions& opts) {
  SystemQuadruple q = input;
  if (!opts.assume_strongly_minimal && !is_strongly_minimal(q, opts.tol, opts.seed).strongly_minimal) {
    if (!opts.reduce) throw Error(Errc::not_strongly_minimal, "not strongly minimal");
    q = strongly_minimal_reduce(q, opts.tol, opts.seed).q;
  }

  McMillanStructure out;
  out.rows = q.outputs();
  out.cols = q.inputs();
  const KroneckerReport s = kronecker_structure(system_pencil(q), opts.tol, opts.seed);
  const KroneckerReport a = kronecker_structure(q.a(), opts.tol, opts.seed);
  const KroneckerReport big = kronecker_structure(infinite_pole_pencil(q), opts.tol, opts.seed);
  out.tolerance_ambiguous = s.tolerance_ambiguous || a.tolerance_ambiguous || big.tolerance_ambiguous;

  out.normal_rank = s.normal_rank - q.state_dim();
  if (out.normal_rank < 0)
    throw Error(Errc::structural_inconsistency, "system pencil rank below state dimension");
  out.right_minimal = s.right_minimal;
  out.left_minimal = s.left_minimal;

  std::vector<PointAccumulator> pts;
  for (const auto& b : a.finite_eigen) {
    auto& p = find_or_add(pts, b.value);
    p.poles.insert(p.poles.end(), b.partial_multiplicities.begin(), b.partial_multiplicities.end());
  }
  for (const auto& b : s.finite_eigen) {
    auto& p = find_or_add(pts, b.value);
    p.zeros.insert(p.zeros.end(), b.partial_multiplicities.begin(), b.partial_multiplicities.end());
  }
  for (const auto& p : pts)
    out.finite_points.push_back({p.value, merge_indices(p.poles, p.zeros, out.normal_rank)});
  std::sort(out.finite_points.begin(), out.finite_points.end(),
            [](const PointStructure& x, const PointStructure& y) {
              if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
              return x.value.imag() < y.value.imag();
            });

  out.infinity_indices = merge_indices(infinity_mcmillan_indices(big),
                                       infinity_mcmillan_indices(s), out.normal_rank);
  out.update_degrees();
  return out;
}

bool degree_sum_check(const McMillanStructure& s) {
  const Index eps = std::accumulate(s.right_minimal.begin(), s.right_minimal.end(), Index{0});
  const Index eta = std::accumulate(s.left_minimal.begin(), s.left_minimal.end(), Index{0});
  return s.polar_degree == s.zero_degree + eps + eta;
}

Index mcmillan_degree(const McMillanStructure& s) { return s.polar_degree; }

}  // namespace sysmat
