#include "sysmat/pencil.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "sysmat/error.hpp"

namespace sysmat {

Pencil::Pencil(ComplexMatrix l0, ComplexMatrix l1) : l0_(std::move(l0)), l1_(std::move(l1)) {
  if (l0_.rows() != l1_.rows() || l0_.cols() != l1_.cols())
    throw Error(Errc::dimension_mismatch, "pencil coefficients differ in shape");
}

Pencil Pencil::zero(Index rows, Index cols) {
  return {ComplexMatrix::Zero(rows, cols), ComplexMatrix::Zero(rows, cols)};
}

double Pencil::norm() const { return std::max(spectral_norm(l0_), spectral_norm(l1_)); }

Pencil hstack(const Pencil& a, const Pencil& b) {
  if (a.rows() != b.rows()) throw Error(Errc::dimension_mismatch, "hstack: row counts differ");
  ComplexMatrix l0(a.rows(), a.cols() + b.cols());
  ComplexMatrix l1(a.rows(), a.cols() + b.cols());
  l0 << a.l0(), b.l0();
  l1 << a.l1(), b.l1();
  return {std::move(l0), std::move(l1)};
}

Pencil vstack(const Pencil& a, const Pencil& b) {
  if (a.cols() != b.cols()) throw Error(Errc::dimension_mismatch, "vstack: column counts differ");
  ComplexMatrix l0(a.rows() + b.rows(), a.cols());
  ComplexMatrix l1(a.rows() + b.rows(), a.cols());
  l0 << a.l0(), b.l0();
  l1 << a.l1(), b.l1();
  return {std::move(l0), std::move(l1)};
}

SystemQuadruple::SystemQuadruple(Pencil a, Pencil b, Pencil c, Pencil d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.rows() != a_.cols()) throw Error(Errc::dimension_mismatch, "A must be square");
  if (b_.rows() != a_.rows()) throw Error(Errc::dimension_mismatch, "B must have d rows");
  if (c_.cols() != a_.cols()) throw Error(Errc::dimension_mismatch, "C must have d columns");
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols())
    throw Error(Errc::dimension_mismatch, "D must be m x n");
}

Pencil SystemQuadruple::controllability_pencil() const { return hstack(a_, -b_); }

Pencil SystemQuadruple::observability_pencil() const { return vstack(a_, c_); }

SystemQuadruple SystemQuadruple::transposed() const {
  return {a_.transpose(), c_.transpose(), b_.transpose(), d_.transpose()};
}

void require_regular_a(const SystemQuadruple& q, double tol, std::uint64_t seed) {
  if (!is_regular(q.a().l0(), q.a().l1(), tol, seed))
    throw Error(Errc::a_not_regular, "A not regular");
}

Rotation Rotation::from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

bool Rotation::valid() const {
  return std::isfinite(c) && std::isfinite(s) && std::abs(c * c + s * s - 1.0) <= 8.0 * 2.2e-16;
}

std::optional<Complex> Rotation::to_lambda(std::optional<Complex> mu) const {
  if (!mu) {
    if (s == 0.0) return std::nullopt;
    return Complex(c / s);
  }
  const Complex den = s * *mu + c;
  if (den == Complex(0.0)) return std::nullopt;
  return (c * *mu - s) / den;
}

std::optional<Complex> Rotation::to_mu(std::optional<Complex> lambda) const {
  if (!lambda) {
    if (s == 0.0) return std::nullopt;
    return Complex(-c / s);
  }
  const Complex den = c - s * *lambda;
  if (den == Complex(0.0)) return std::nullopt;
  return (c * *lambda + s) / den;
}

Pencil system_pencil(const SystemQuadruple& q) {
  return vstack(hstack(q.a(), -q.b()), hstack(q.c(), q.d()));
}

ComplexMatrix transfer_eval(const SystemQuadruple& q, Complex lambda, double tol) {
  const ComplexMatrix d = q.d().at(lambda);
  const Index n = q.state_dim();
  if (n == 0) return d;
  const ComplexMatrix a = q.a().at(lambda);
  const double scale =
      std::abs(lambda) * spectral_norm(q.a().l1()) + spectral_norm(q.a().l0());
  const double threshold = tol * static_cast<double>(n) * scale;
  if (numerical_rank(a, RankTolerance::absolute(threshold)) < n)
    throw Error(Errc::pole_evaluation, "evaluation at pole of A");
  const ComplexMatrix x = a.partialPivLu().solve(q.b().at(lambda));
  return d + q.c().at(lambda) * x;
}

Pencil mobius_rotate(const Pencil& p, const Rotation& rot) {
  if (!rot.valid()) throw Error(Errc::invalid_argument, "rotation must satisfy c^2 + s^2 = 1");
  return {rot.c * p.l0() + rot.s * p.l1(), -rot.s * p.l0() + rot.c * p.l1()};
}

namespace {

// Smallest of the first rows() singular values of L1; zero when L1 cannot
// have full row rank.
double row_rank_margin(const Pencil& p) {
  if (p.rows() == 0) return std::numeric_limits<double>::infinity();
  if (p.cols() < p.rows()) return 0.0;
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(p.l1()).singularValues();
  return sv[p.rows() - 1];
}

}  // namespace

Rotation choose_rotation(const Pencil& p, std::uint64_t seed, int max_tries, double tol) {
  const double threshold =
      tol * static_cast<double>(std::max(p.rows(), p.cols())) * p.norm();
  const double identity_margin = row_rank_margin(p);
  if (p.rows() == 0) return {};
  // Every staircase step amplifies errors by about 1 / margin, so a barely
  // admissible angle is as bad as an inadmissible one: keep the best angle.
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Rotation best;
  double best_margin = identity_margin;
  for (int k = 0; k < max_tries; ++k) {
    const Rotation rot = Rotation::from_angle(angle(gen));
    const double margin = row_rank_margin(mobius_rotate(p, rot));
    if (margin > best_margin) {
      best_margin = margin;
      best = rot;
    }
  }
  if (identity_margin > threshold && identity_margin >= 0.5 * best_margin) return {};
  if (best_margin > threshold) return best;
  throw Error(Errc::no_rotation, "no admissible rotation found");
}

Pencil lambda_scale(const Pencil& p, double d_lambda) {
  if (!(d_lambda > 0.0) || !std::isfinite(d_lambda))
    throw Error(Errc::invalid_argument, "d_lambda must be positive");
  return {d_lambda * p.l0(), p.l1()};
}

double default_lambda_scale(const Pencil& p) {
  const double n0 = p.l0().norm();
  const double n1 = p.l1().norm();
  if (n0 == 0.0 || n1 == 0.0) return 1.0;
  return std::exp2(std::round(std::log2(n1 / n0)));
}

std::vector<GeneralizedEigenvalue> generalized_eigenvalues(const Pencil& p, double tol) {
  return generalized_eigenvalues(p.l0(), p.l1(), tol);
}

}  // namespace sysmat
