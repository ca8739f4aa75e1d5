#pragma once

// Dense complex kernels with explicit rank thresholds.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sysmat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-12;

/// A rank threshold: either relative (tol * max(rows, cols) * sigma_max of the
/// matrix being tested) or an absolute cut applied directly to singular values.
class RankTolerance {
 public:
  static RankTolerance relative(double tol) { return RankTolerance(tol, false); }
  static RankTolerance absolute(double threshold) { return RankTolerance(threshold, true); }

  double value() const { return value_; }
  bool is_absolute() const { return absolute_; }
  double threshold(const RealVector& singular_values, Index rows, Index cols) const;

 private:
  RankTolerance(double v, bool a) : value_(v), absolute_(a) {}
  double value_;
  bool absolute_;
};

struct RankDecision {
  Index rank = 0;
  double tolerance_used = 0.0;
  std::vector<double> singular_values;  // nonincreasing
  /// Some singular value sits within a factor 10 of the threshold.
  bool ambiguous = false;
};

RankDecision decide_rank(const RealVector& singular_values, double threshold);

struct RankRevealing {
  ComplexMatrix left;  // rows x rows unitary
  RealVector singular_values;
  ComplexMatrix right;  // cols x cols unitary
  RankDecision decision;
};

/// Full SVD M = left * diag(sv) * right^H together with the numerical rank.
RankRevealing rank_revealing(const ComplexMatrix& m, RankTolerance tol);
inline RankRevealing rank_revealing(const ComplexMatrix& m, double tol = kDefaultTol) {
  return rank_revealing(m, RankTolerance::relative(tol));
}

Index numerical_rank(const ComplexMatrix& m, RankTolerance tol);

struct Compression {
  ComplexMatrix transform;  // unitary
  Index rank = 0;
  RankDecision decision;
};

enum class RowPlacement { top, bottom };
enum class ZeroSide { left, right };

/// U such that U*M has its rank rows first (top) or last (bottom), the rest ~0.
Compression row_compress(const ComplexMatrix& m, RankTolerance tol,
                         RowPlacement placement = RowPlacement::top);
inline Compression row_compress(const ComplexMatrix& m, double tol = kDefaultTol) {
  return row_compress(m, RankTolerance::relative(tol));
}

/// V such that M*V = [M' 0] (ZeroSide::right) or [0 M'] (ZeroSide::left).
Compression col_compress(const ComplexMatrix& m, RankTolerance tol,
                         ZeroSide side = ZeroSide::right);
inline Compression col_compress(const ComplexMatrix& m, double tol = kDefaultTol,
                                ZeroSide side = ZeroSide::right) {
  return col_compress(m, RankTolerance::relative(tol), side);
}

/// Unitary completion: returns Q (k x k) whose first r rows are the
/// orthonormal rows of `rows` (r x k).
ComplexMatrix complete_rows_to_unitary(const ComplexMatrix& rows);

/// Eigenvalue of a regular pencil lambda*L1 - L0 in homogeneous form (alpha, beta).
struct GeneralizedEigenvalue {
  Complex alpha;
  Complex beta;
  bool infinite = false;
  Complex value;  // alpha / beta when finite
};

/// QZ on the square pencil lambda*L1 - L0. Values with
/// |beta| <= tol * (|alpha| + |beta|) are reported as infinite.
/// Throws Errc::singular_pencil when the pencil fails a seeded regularity test.
std::vector<GeneralizedEigenvalue> generalized_eigenvalues(const ComplexMatrix& l0,
                                                           const ComplexMatrix& l1,
                                                           double tol = kDefaultTol);

/// Full-rank test of lambda*L1 - L0 at three seeded random points.
bool is_regular(const ComplexMatrix& l0, const ComplexMatrix& l1, double tol = kDefaultTol,
                std::uint64_t seed = 0x5eed);

ComplexMatrix random_unitary(Index n, std::uint64_t seed);

double spectral_norm(const ComplexMatrix& m);
double unitarity_defect(const ComplexMatrix& u);

}  // namespace sysmat
