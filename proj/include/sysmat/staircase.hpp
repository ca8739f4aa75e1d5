#pragma once

// Staircase reductions of (possibly singular) pencils and the Kronecker
// structure they reveal.

#include <cstdint>
#include <vector>

#include "sysmat/pencil.hpp"

namespace sysmat {

/// One staircase step: `null_cols` columns of the leading coefficient were
/// found null inside the active window, and the constant coefficient restricted
/// to them had rank `rank_rows`.
struct StaircaseStep {
  Index null_cols = 0;
  Index rank_rows = 0;
};

/// Raw result of the column-nullspace staircase on the pair (E, F), i.e. the
/// pencil lambda*E - F. transformed_e = U * E * V, transformed_f = U * F * V.
/// The active window left at termination is the top-left block
/// window_rows x window_cols; everything to its right is zero in those rows.
struct StaircaseRun {
  ComplexMatrix u;
  ComplexMatrix v;
  ComplexMatrix e;
  ComplexMatrix f;
  Index window_rows = 0;
  Index window_cols = 0;
  std::vector<StaircaseStep> steps;
  bool ambiguous = false;

  /// Count of right minimal indices equal to k for k = 0, 1, ...
  std::vector<Index> epsilon_counts() const;
  /// Count of infinite Jordan blocks of size k for k = 1, 2, ... (index k-1).
  std::vector<Index> infinite_counts() const;
};

/// Extracts the right singular blocks and the infinite blocks of
/// lambda*E - F with unitary transformations. `threshold` is an absolute
/// singular value cut.
StaircaseRun column_staircase(const ComplexMatrix& e, const ComplexMatrix& f, double threshold);

struct StaircaseForm {
  ComplexMatrix u;  // row transformation
  ComplexMatrix w;  // column transformation: u * P * w^H = transformed
  Pencil transformed;
  Index d_reg = 0;
  std::vector<StaircaseStep> block_sizes;
  Rotation rotation;
  bool ambiguous = false;

  /// The regular block X(lambda) in the top-left corner.
  Pencil regular_part() const;
  /// The trailing block [A_hat, -B_hat] without eigenvalues.
  Pencil trailing_part() const;
};

/// U*P*W^H = [[X, 0], [Y, S_hat]] with X (d_reg x d_reg) regular carrying every
/// eigenvalue of P and S_hat free of finite and infinite eigenvalues.
/// Requires full row normal rank. Both passes decide ranks on the leading
/// coefficient of P itself; `rotation` stays the identity. `seed` only drives
/// the normal rank test.
StaircaseForm separate_regular_right(const Pencil& p, double tol = kDefaultTol,
                                     std::uint64_t seed = 0x5eed);

struct EigenBlock {
  Complex value;
  std::vector<Index> partial_multiplicities;  // nondecreasing
};

struct KroneckerReport {
  Index rows = 0;
  Index cols = 0;
  Index normal_rank = 0;
  std::vector<EigenBlock> finite_eigen;
  std::vector<Index> infinite_blocks;  // sorted
  std::vector<Index> right_minimal;    // sorted
  std::vector<Index> left_minimal;     // sorted
  bool tolerance_ambiguous = false;

  Index finite_degree() const;
  Index infinite_degree() const;
  bool has_eigenvalues() const { return !finite_eigen.empty() || !infinite_blocks.empty(); }
};

KroneckerReport kronecker_structure(const Pencil& p, double tol = kDefaultTol,
                                    std::uint64_t seed = 0x5eed);

/// {k - 1 : k in infinite_blocks, k >= 2}, sorted.
std::vector<Index> infinity_mcmillan_indices(const KroneckerReport& report);

/// Jordan block sizes of the regular pencil lambda*E - F at `alpha`
/// (nondecreasing); empty when alpha is not an eigenvalue at `tol`.
std::vector<Index> partial_multiplicities(const ComplexMatrix& e, const ComplexMatrix& f,
                                          Complex alpha, double tol = kDefaultTol);

}  // namespace sysmat
