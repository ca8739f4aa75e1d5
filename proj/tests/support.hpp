#pragma once

// Shared fixtures for the test binaries.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sysmat/linalg.hpp"
#include "sysmat/pencil.hpp"

namespace sysmat::testing {

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Index>(rows.size()),
                  rows.size() ? static_cast<Index>(rows.begin()->size()) : 0);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline ComplexMatrix zeros(Index r, Index c) { return ComplexMatrix::Zero(r, c); }
inline ComplexMatrix eye(Index n) { return ComplexMatrix::Identity(n, n); }

/// Pencil lambda*l1 - l0 from real literal blocks.
inline Pencil pencil(const ComplexMatrix& l0, const ComplexMatrix& l1) { return {l0, l1}; }

/// Greedy minimum-distance matching; returns the largest matched relative error
/// |a - b| / max(1, |a|).
inline double match_relative(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  std::sort(a.begin(), a.end(), [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
  for (Complex x : a) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist / std::max(1.0, std::abs(x)));
  }
  return worst;
}

/// Roots of c0 + c1 x + ... + ck x^k (ck != 0) from the companion matrix.
inline std::vector<Complex> poly_roots(const std::vector<double>& coeffs) {
  const std::size_t k = coeffs.size() - 1;
  if (k == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Index>(k), static_cast<Index>(k));
  for (std::size_t i = 1; i < k; ++i) comp(static_cast<Index>(i), static_cast<Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < k; ++i)
    comp(static_cast<Index>(i), static_cast<Index>(k - 1)) = -coeffs[i] / coeffs[k];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<Complex> out;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

/// Coefficients (ascending) of lead * prod (x - r_i) for real roots.
inline std::vector<double> poly_from_roots(const std::vector<double>& roots, double lead = 1.0) {
  std::vector<double> c{lead};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

/// The chain realization of P(lambda) = diag(e5, e1):
/// A = I - lambda*N (8x8), B = -[P1; P2; P3; P4 + lambda*P5],
/// C = [-lambda*I 0 0 0], D = P0.
inline SystemQuadruple example1_quadruple(const std::vector<double>& e5,
                                          const std::vector<double>& e1) {
  auto p = [&](std::size_t k) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = k < e5.size() ? e5[k] : 0.0;
    m(1, 1) = k < e1.size() ? e1[k] : 0.0;
    return m;
  };
  ComplexMatrix a0 = -eye(8);
  ComplexMatrix a1 = zeros(8, 8);
  for (Index i = 0; i + 2 < 8; ++i) a1(i, i + 2) = -1.0;
  ComplexMatrix b0 = zeros(8, 2);
  ComplexMatrix b1 = zeros(8, 2);
  for (Index k = 0; k < 4; ++k) b0.block(2 * k, 0, 2, 2) = p(static_cast<std::size_t>(k) + 1);
  b1.block(6, 0, 2, 2) = -p(5);
  ComplexMatrix c1 = zeros(2, 8);
  c1.leftCols(2) = -eye(2);
  return {Pencil(a0, a1), Pencil(b0, b1), Pencil(zeros(2, 8), c1), Pencil(-p(0), zeros(2, 2))};
}

/// Example 1 with the leading 2x2 block lambda*I - Ar prepended to A, Br on
/// top of B and Cr in front of C; realizes diag(e5, e1) + [[0, 0], [1/lambda, 0]].
inline SystemQuadruple example2_quadruple(const std::vector<double>& e5,
                                          const std::vector<double>& e1) {
  const SystemQuadruple base = example1_quadruple(e5, e1);
  const ComplexMatrix ar = mat({{0, 0}, {1, 0}});
  const ComplexMatrix br = mat({{0, 0}, {1, 0}});
  const ComplexMatrix cr = mat({{0, 0}, {0, 1}});
  ComplexMatrix a0 = zeros(10, 10), a1 = zeros(10, 10);
  a0.topLeftCorner(2, 2) = ar;
  a1.topLeftCorner(2, 2) = eye(2);
  a0.bottomRightCorner(8, 8) = base.a().l0();
  a1.bottomRightCorner(8, 8) = base.a().l1();
  ComplexMatrix b0(10, 2), b1(10, 2);
  b0 << -br, base.b().l0();
  b1 << zeros(2, 2), base.b().l1();
  ComplexMatrix c0(2, 10), c1(2, 10);
  c0 << -cr, base.c().l0();
  c1 << zeros(2, 2), base.c().l1();
  return {Pencil(a0, a1), Pencil(b0, b1), Pencil(c0, c1), base.d()};
}

/// Random coefficient vector of the given degree with entries in [-2, 2] and
/// a leading coefficient bounded away from zero.
inline std::vector<double> random_poly(std::size_t degree, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(degree + 1);
  for (auto& x : c) x = u(gen);
  c[degree] = (c[degree] < 0 ? -1.0 : 1.0) * (0.5 + std::abs(c[degree]));
  return c;
}

inline std::vector<Complex> finite_values(const std::vector<GeneralizedEigenvalue>& ev) {
  std::vector<Complex> out;
  for (const auto& e : ev)
    if (!e.infinite) out.push_back(e.value);
  return out;
}

}  // namespace sysmat::testing

namespace sysmat::testing {

struct KroneckerSpec {
  std::vector<std::pair<Complex, Index>> jordan;  // (eigenvalue, block size)
  std::vector<Index> infinite;
  std::vector<Index> epsilon;
  std::vector<Index> eta;
};

/// Block-diagonal Kronecker canonical pencil for `spec`.
inline Pencil kronecker_canonical(const KroneckerSpec& spec) {
  Index rows = 0, cols = 0;
  for (auto [v, k] : spec.jordan) rows += k, cols += k;
  for (Index k : spec.infinite) rows += k, cols += k;
  for (Index e : spec.epsilon) rows += e, cols += e + 1;
  for (Index h : spec.eta) rows += h + 1, cols += h;
  ComplexMatrix l0 = zeros(rows, cols), l1 = zeros(rows, cols);
  Index r = 0, c = 0;
  for (auto [v, k] : spec.jordan) {
    for (Index i = 0; i < k; ++i) {
      l1(r + i, c + i) = 1.0;
      l0(r + i, c + i) = v;
      if (i + 1 < k) l0(r + i, c + i + 1) = 1.0;
    }
    r += k, c += k;
  }
  for (Index k : spec.infinite) {
    for (Index i = 0; i < k; ++i) {
      l0(r + i, c + i) = 1.0;
      if (i + 1 < k) l1(r + i, c + i + 1) = 1.0;
    }
    r += k, c += k;
  }
  for (Index e : spec.epsilon) {
    for (Index i = 0; i < e; ++i) {
      l1(r + i, c + i) = 1.0;
      l0(r + i, c + i + 1) = 1.0;
    }
    r += e, c += e + 1;
  }
  for (Index h : spec.eta) {
    for (Index i = 0; i < h; ++i) {
      l1(r + i, c + i) = 1.0;
      l0(r + i + 1, c + i) = 1.0;
    }
    r += h + 1, c += h;
  }
  return {l0, l1};
}

inline Pencil scramble(const Pencil& p, std::uint64_t seed) {
  return p.transformed(random_unitary(p.rows(), seed), random_unitary(p.cols(), seed + 1));
}

}  // namespace sysmat::testing
