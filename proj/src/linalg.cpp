#include "sysmat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "sysmat/error.hpp"

namespace sysmat {

double RankTolerance::threshold(const RealVector& singular_values, Index rows, Index cols) const {
  if (absolute_) return value_;
  const double smax = singular_values.size() > 0 ? singular_values(0) : 0.0;
  return value_ * static_cast<double>(std::max(rows, cols)) * smax;
}

RankDecision decide_rank(const RealVector& singular_values, double threshold) {
  RankDecision d;
  d.tolerance_used = threshold;
  d.singular_values.assign(singular_values.data(), singular_values.data() + singular_values.size());
  for (double s : d.singular_values) {
    if (s > threshold) ++d.rank;
    if (threshold > 0.0 && s > threshold / 10.0 && s <= threshold * 10.0) d.ambiguous = true;
  }
  return d;
}

RankRevealing rank_revealing(const ComplexMatrix& m, RankTolerance tol) {
  if (m.rows() == 0 || m.cols() == 0) throw Error(Errc::empty_matrix, "empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RankRevealing out;
  out.left = svd.matrixU();
  out.right = svd.matrixV();
  out.singular_values = svd.singularValues();
  out.decision = decide_rank(out.singular_values,
                             tol.threshold(out.singular_values, m.rows(), m.cols()));
  return out;
}

Index numerical_rank(const ComplexMatrix& m, RankTolerance tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const RealVector& sv = svd.singularValues();
  return decide_rank(sv, tol.threshold(sv, m.rows(), m.cols())).rank;
}

Compression row_compress(const ComplexMatrix& m, RankTolerance tol, RowPlacement placement) {
  RankRevealing rr = rank_revealing(m, tol);
  Compression c;
  c.rank = rr.decision.rank;
  c.decision = std::move(rr.decision);
  c.transform = rr.left.adjoint();
  if (placement == RowPlacement::bottom) c.transform = c.transform.colwise().reverse().eval();
  return c;
}

Compression col_compress(const ComplexMatrix& m, RankTolerance tol, ZeroSide side) {
  RankRevealing rr = rank_revealing(m, tol);
  Compression c;
  c.rank = rr.decision.rank;
  c.decision = std::move(rr.decision);
  c.transform = std::move(rr.right);
  if (side == ZeroSide::left) c.transform = c.transform.rowwise().reverse().eval();
  return c;
}

ComplexMatrix complete_rows_to_unitary(const ComplexMatrix& rows) {
  const Index r = rows.rows();
  const Index k = rows.cols();
  ComplexMatrix q(k, k);
  q.topRows(r) = rows;
  if (r < k) {
    Eigen::HouseholderQR<ComplexMatrix> qr(rows.adjoint());
    ComplexMatrix full = qr.householderQ() * ComplexMatrix::Identity(k, k);
    q.bottomRows(k - r) = full.rightCols(k - r).adjoint();
  }
  return q;
}

ComplexMatrix random_unitary(Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  ComplexMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = Complex(dist(gen), dist(gen));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

bool is_regular(const ComplexMatrix& l0, const ComplexMatrix& l1, double tol, std::uint64_t seed) {
  if (l0.rows() != l0.cols() || l1.rows() != l0.rows() || l1.cols() != l0.cols()) return false;
  const Index n = l0.rows();
  if (n == 0) return true;
  const double n0 = l0.norm();
  const double n1 = l1.norm();
  const double radius = (n0 > 0.0 && n1 > 0.0) ? n0 / n1 : 1.0;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double s0 = spectral_norm(l0);
  const double s1 = spectral_norm(l1);
  for (int k = 0; k < 3; ++k) {
    const Complex lambda = std::polar(radius, angle(gen));
    const ComplexMatrix at = lambda * l1 - l0;
    const double threshold =
        tol * static_cast<double>(n) * (std::abs(lambda) * s1 + s0);
    if (numerical_rank(at, RankTolerance::absolute(threshold)) == n) return true;
  }
  return false;
}

std::vector<GeneralizedEigenvalue> generalized_eigenvalues(const ComplexMatrix& l0,
                                                           const ComplexMatrix& l1, double tol) {
  if (l0.rows() != l0.cols() || l1.rows() != l0.rows() || l1.cols() != l0.cols())
    throw Error(Errc::dimension_mismatch, "generalized eigenvalues need a square pencil");
  const Index n = l0.rows();
  if (n == 0) return {};
  if (!is_regular(l0, l1, tol)) throw Error(Errc::singular_pencil, "singular pencil");

  ComplexMatrix a = l0;
  ComplexMatrix b = l1;
  std::vector<Complex> alpha(static_cast<std::size_t>(n));
  std::vector<Complex> beta(static_cast<std::size_t>(n));
  Complex dummy;
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n),
                                        a.data(), static_cast<lapack_int>(n), b.data(),
                                        static_cast<lapack_int>(n), alpha.data(), beta.data(),
                                        &dummy, 1, &dummy, 1);
  if (info != 0) throw Error(Errc::singular_pencil, "QZ iteration failed to converge");

  std::vector<GeneralizedEigenvalue> out;
  out.reserve(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    GeneralizedEigenvalue e{alpha[i], beta[i], false, Complex{}};
    const double ab = std::abs(alpha[i]) + std::abs(beta[i]);
    e.infinite = std::abs(beta[i]) <= tol * ab;
    if (!e.infinite) e.value = alpha[i] / beta[i];
    out.push_back(e);
  }
  return out;
}

}  // namespace sysmat
