#pragma once

// Diagonal two-sided balancing of rectangular pencils.

#include <cstdint>
#include <optional>
#include <vector>

#include "sysmat/linalg.hpp"
#include "sysmat/pencil.hpp"

namespace sysmat {

enum class Exec { serial, parallel };

namespace kernels {

/// M_ij = |A_ij|^2 + |B_ij|^2. Each output entry is produced by one thread in
/// the same order as the serial loop, so both policies agree bit for bit.
RealMatrix build_M(const ComplexMatrix& a, const ComplexMatrix& b, Exec exec);
/// M * y
RealVector mat_vec(const RealMatrix& m, const RealVector& y, Exec exec);
/// M^T * x
RealVector mat_tvec(const RealMatrix& m, const RealVector& x, Exec exec);

}  // namespace kernels

struct ScalingResult {
  int approach = 0;
  RealVector d_left;   // length m
  RealVector d_right;  // length n
  double d_lambda = 1.0;
  // approach 1
  double gamma_left = 0.0;
  double gamma_right = 0.0;
  // approach 2
  double alpha = 0.0;
  double gamma = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  /// Approach 1 cost sum_ij d_li^2 m_ij d_rj^2, initial value then one entry
  /// per half sweep.
  std::vector<double> objective;
};

struct ScalingOptions {
  double tol = 1e-10;
  /// 0 selects 10 * (m + n) * ceil(-log10 tol).
  int max_iter = 0;
  Exec exec = Exec::parallel;
  /// Starting squared diagonal: the column side (length n) for approach 1,
  /// the whole bordered diagonal (length m + n) for approach 2.
  std::optional<RealVector> initial;
};

int default_max_iter(Index m, Index n, double tol);

RealMatrix build_M(const ComplexMatrix& a, const ComplexMatrix& b, Exec exec = Exec::parallel);

/// [[alpha^2/m^2 * 1 1^T, M], [M^T, alpha^2/n^2 * 1 1^T]]
RealMatrix build_M_alpha(const RealMatrix& m, double alpha);

struct SinkhornResult {
  RealVector d_row;
  RealVector d_col;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Alternating row/column normalization of a square nonnegative matrix
/// towards a doubly stochastic one. Residual is the max deviation of a row or
/// column sum from 1.
SinkhornResult sinkhorn_knopp(const RealMatrix& s, double tol, int max_iter,
                              const std::optional<RealVector>& initial_col = std::nullopt,
                              Exec exec = Exec::parallel);

/// True when some positive D1 M D2 has all row sums equal and all column sums
/// equal. Decided on the sparsity pattern with a transportation flow.
bool exactly_scalable(const RealMatrix& m);

ScalingResult scale_approach1(const ComplexMatrix& a, const ComplexMatrix& b, double c_left,
                              double c_right, const ScalingOptions& opts = {});

ScalingResult scale_approach2(const ComplexMatrix& a, const ComplexMatrix& b, double alpha,
                              double c, const ScalingOptions& opts = {});

/// Residual of r measured on M (approach 1) or on M_alpha (approach 2).
double scaling_residual(const ScalingResult& r, const RealMatrix& m);

/// Rounds every scaling entry and d_lambda to the nearest power of two and
/// recomputes the residual on M.
ScalingResult quantize_pow2(const ScalingResult& r, const RealMatrix& m);

/// Divides both scalings by sqrt(rho), rho the largest row or column norm of
/// the scaled pair, so that all those norms end up at most 1.
ScalingResult normalize_unit_norm(const ScalingResult& r, const RealMatrix& m);

/// d_lambda * Dl L0 Dr and Dl L1 Dr.
Pencil apply_scaling(const Pencil& p, const ScalingResult& r);

struct RowColNorms {
  double row_min = 0.0, row_max = 0.0;
  double col_min = 0.0, col_max = 0.0;
};

/// Norms of the rows and columns of [L0 L1] and [L0; L1] respectively.
RowColNorms row_col_norms(const Pencil& p);

}  // namespace sysmat
