#pragma once

// Pole/zero/minimal-index structure of the transfer function of a strongly
// minimal quadruple, read off from pencil eigenstructure.

#include <cstdint>
#include <vector>

#include "sysmat/pencil.hpp"

namespace sysmat {

/// Local Smith-McMillan indices d_1 <= ... <= d_r at one point; negative
/// entries are poles, positive entries zeros.
struct PointStructure {
  Complex value;
  std::vector<Index> indices;
};

struct McMillanStructure {
  Index rows = 0;
  Index cols = 0;
  Index normal_rank = 0;
  std::vector<PointStructure> finite_points;
  std::vector<Index> infinity_indices;
  std::vector<Index> right_minimal;
  std::vector<Index> left_minimal;
  Index polar_degree = 0;
  Index zero_degree = 0;
  Index mcmillan_degree = 0;
  bool tolerance_ambiguous = false;

  /// Recomputes the three degree fields from the index data.
  void update_degrees();
};

struct StructureOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = 0x5eed;
  /// Skip the strong minimality test.
  bool assume_strongly_minimal = false;
  /// Reduce a non-minimal input first instead of failing.
  bool reduce = true;
};

McMillanStructure rational_structure(const SystemQuadruple& q, const StructureOptions& opts = {});

/// delta_p == delta_z + sum(eps) + sum(eta)
bool degree_sum_check(const McMillanStructure& s);
Index mcmillan_degree(const McMillanStructure& s);

/// [[A1, -B1, 0], [C1, D1, 0], [0, 0, 0]] lambda - [[A0, 0, 0], [0, 0, I], [0, -I, 0]];
/// its zeros at infinity are the poles at infinity of R.
Pencil infinite_pole_pencil(const SystemQuadruple& q);

/// Merges pole orders (positive numbers, negated on output) and zero orders
/// into r sorted indices padded with zeros. Throws structural_inconsistency
/// when more than r of them are nonzero.
std::vector<Index> merge_indices(const std::vector<Index>& pole_orders,
                                 const std::vector<Index>& zero_orders, Index r);

}  // namespace sysmat
