#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sysmat/linalg.hpp"

namespace sysmat {

/// P(lambda) = lambda * L1 - L0.
class Pencil {
 public:
  Pencil() = default;
  Pencil(ComplexMatrix l0, ComplexMatrix l1);
  static Pencil zero(Index rows, Index cols);

  const ComplexMatrix& l0() const { return l0_; }
  const ComplexMatrix& l1() const { return l1_; }
  Index rows() const { return l0_.rows(); }
  Index cols() const { return l0_.cols(); }
  bool empty() const { return l0_.size() == 0; }

  ComplexMatrix at(Complex lambda) const { return lambda * l1_ - l0_; }
  /// max(||L0||_2, ||L1||_2)
  double norm() const;
  Pencil transpose() const { return {l0_.transpose(), l1_.transpose()}; }
  /// Constant left/right multiplication Q * P(lambda) * Z.
  Pencil transformed(const ComplexMatrix& left, const ComplexMatrix& right) const {
    return {left * l0_ * right, left * l1_ * right};
  }
  Pencil operator-() const { return {-l0_, -l1_}; }

  friend bool operator==(const Pencil& a, const Pencil& b) {
    return a.l0_.rows() == b.l0_.rows() && a.l0_.cols() == b.l0_.cols() && a.l0_ == b.l0_ &&
           a.l1_ == b.l1_;
  }

 private:
  ComplexMatrix l0_;
  ComplexMatrix l1_;
};

/// Block assembly of pencils; every block row must agree in height and every
/// block column in width.
Pencil hstack(const Pencil& a, const Pencil& b);
Pencil vstack(const Pencil& a, const Pencil& b);

/// Quadruple {A, B, C, D} with system matrix S = [[A, -B], [C, D]] and
/// transfer function R = D + C A^{-1} B.
class SystemQuadruple {
 public:
  SystemQuadruple() = default;
  SystemQuadruple(Pencil a, Pencil b, Pencil c, Pencil d);

  const Pencil& a() const { return a_; }
  const Pencil& b() const { return b_; }
  const Pencil& c() const { return c_; }
  const Pencil& d() const { return d_; }

  Index state_dim() const { return a_.rows(); }
  Index outputs() const { return c_.rows(); }
  Index inputs() const { return b_.cols(); }

  /// [A, -B]
  Pencil controllability_pencil() const;
  /// [A; C]
  Pencil observability_pencil() const;
  /// {A^T, C^T, B^T, D^T}, realizing R^T.
  SystemQuadruple transposed() const;

  friend bool operator==(const SystemQuadruple&, const SystemQuadruple&) = default;

 private:
  Pencil a_, b_, c_, d_;
};

/// Throws Errc::a_not_regular unless A passes the seeded regularity test.
void require_regular_a(const SystemQuadruple& q, double tol = kDefaultTol,
                       std::uint64_t seed = 0x5eed);

struct Rotation {
  double c = 1.0;
  double s = 0.0;

  static Rotation from_angle(double theta);
  Rotation inverse() const { return {c, -s}; }
  bool valid() const;
  /// lambda = (c*mu - s) / (s*mu + c); nullopt encodes infinity.
  std::optional<Complex> to_lambda(std::optional<Complex> mu) const;
  std::optional<Complex> to_mu(std::optional<Complex> lambda) const;
};

Pencil system_pencil(const SystemQuadruple& q);

ComplexMatrix transfer_eval(const SystemQuadruple& q, Complex lambda, double tol = kDefaultTol);

/// mu*A1 - A0 with [A0; A1] = [[c, s], [-s, c]] [L0; L1].
Pencil mobius_rotate(const Pencil& p, const Rotation& rot);

/// Among the identity and max_tries seeded uniform angles, the rotation whose
/// leading coefficient has the largest smallest singular value; the identity
/// wins whenever it is admissible and within a factor 2 of the best.
Rotation choose_rotation(const Pencil& p, std::uint64_t seed, int max_tries = 32,
                         double tol = kDefaultTol);

/// lambda_hat * L1 - d_lambda * L0; eigenvalues get multiplied by d_lambda.
Pencil lambda_scale(const Pencil& p, double d_lambda);

/// 2^round(log2(||L1||_F / ||L0||_F)), or 1 when either coefficient vanishes.
double default_lambda_scale(const Pencil& p);

std::vector<GeneralizedEigenvalue> generalized_eigenvalues(const Pencil& p,
                                                           double tol = kDefaultTol);

}  // namespace sysmat
