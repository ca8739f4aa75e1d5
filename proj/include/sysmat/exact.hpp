#pragma once

// Exact arithmetic over Q(i): polynomials, rational functions, rational
// matrices and their Smith-McMillan structure. Meant for small test
// instances only.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sysmat/mcmillan.hpp"
#include "sysmat/pencil.hpp"

namespace sysmat::exact {

/// Gaussian rational re + i*im.
struct GaussRational {
  mpq_class re;
  mpq_class im;

  GaussRational() : re(0), im(0) {}
  GaussRational(long v) : re(v), im(0) {}  // NOLINT
  GaussRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  Complex to_complex() const { return {re.get_d(), im.get_d()}; }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator-(const GaussRational& a);
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Polynomial with ascending coefficients; the zero polynomial has no
/// coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<GaussRational> coeffs);
  static Poly constant(const GaussRational& c);
  static Poly x();
  /// x - root
  static Poly linear(const GaussRational& root);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<GaussRational>& coeffs() const { return c_; }
  const GaussRational& lead() const { return c_.back(); }
  GaussRational eval(const GaussRational& x) const;
  Complex eval(Complex x) const;

  Poly derivative() const;
  Poly monic() const;
  /// Number of times `factor` (nonconstant) divides this polynomial exactly.
  int multiplicity(const Poly& factor) const;
  /// Complex roots via a companion matrix; approximate.
  std::vector<Complex> roots() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<GaussRational> c_;
};

struct DivMod {
  Poly quotient;
  Poly remainder;
};
DivMod divmod(const Poly& a, const Poly& b);
Poly exact_div(const Poly& a, const Poly& b);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
/// f_1, f_2, ... with p = lc * f_1 * f_2^2 * ...; each f_i monic squarefree.
std::vector<Poly> squarefree_decomposition(const Poly& p);
/// Pairwise coprime, squarefree, monic polynomials such that each input is a
/// constant times a product of their powers and every root of one basis
/// element has the same multiplicity in each input.
std::vector<Poly> gcd_free_basis(const std::vector<Poly>& polys);

/// Reduced fraction num/den with monic den.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Poly::constant(1)) {}
  RatFunc(Poly num, Poly den);
  explicit RatFunc(Poly p) : RatFunc(std::move(p), Poly::constant(1)) {}

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  /// deg(den) - deg(num): the order of vanishing at infinity.
  int valuation_at_infinity() const;
  Complex eval(Complex x) const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a);
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  Poly num_;
  Poly den_;
};

struct RationalMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<RatFunc> entries;  // row-major

  RationalMatrix() = default;
  RationalMatrix(Index r, Index c) : rows(r), cols(c), entries(static_cast<std::size_t>(r * c)) {}
  RatFunc& operator()(Index i, Index j) { return entries[static_cast<std::size_t>(i * cols + j)]; }
  const RatFunc& operator()(Index i, Index j) const {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }
  RationalMatrix transpose() const;
  ComplexMatrix eval(Complex x) const;
};

/// Constant matrix over Q(i), row-major.
struct ExactMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<GaussRational> entries;

  ExactMatrix() = default;
  ExactMatrix(Index r, Index c) : rows(r), cols(c), entries(static_cast<std::size_t>(r * c)) {}
  static ExactMatrix from_integers(Index r, Index c, const std::vector<long>& row_major);
  GaussRational& operator()(Index i, Index j) {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }
  const GaussRational& operator()(Index i, Index j) const {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }
  ComplexMatrix to_complex() const;
};

/// Quadruple with exact coefficients: A = lambda*A1 - A0 and so on.
struct ExactQuadruple {
  ExactMatrix a0, a1, b0, b1, c0, c1, d0, d1;

  Index state_dim() const { return a0.rows; }
  Index outputs() const { return c0.rows; }
  Index inputs() const { return b0.cols; }
  SystemQuadruple to_numeric() const;
};

/// Exact rank of a constant matrix.
Index exact_rank(const ExactMatrix& m);

/// R = D + C A^{-1} B. Throws Errc::a_not_regular when det A vanishes identically.
RationalMatrix transfer_exact(const ExactQuadruple& q);

/// Largest size of a minor that is not identically zero.
Index normal_rank_exact(const RationalMatrix& r);

/// Local Smith-McMillan indices at x = root, via valuations of minors.
std::vector<Index> local_structure_exact(const RationalMatrix& r, const GaussRational& root);
std::vector<Index> infinity_structure_exact(const RationalMatrix& r);

struct MinimalIndices {
  std::vector<Index> right;
  std::vector<Index> left;
};
MinimalIndices minimal_indices_exact(const RationalMatrix& r);

/// Indices shared by all roots of the squarefree polynomial `factor`.
struct ExactPoint {
  Poly factor;
  std::vector<Complex> roots;
  std::vector<Index> indices;
};

struct ExactStructure {
  Index normal_rank = 0;
  std::vector<ExactPoint> finite;
  std::vector<Index> infinity_indices;
  MinimalIndices minimal;
  Index polar_degree = 0;
  Index zero_degree = 0;

  /// Expands every factor into its numerically located roots.
  McMillanStructure to_mcmillan(Index rows, Index cols) const;
};

/// Complete structure. The finite critical points are the roots of a
/// gcd-free basis of all minor numerators and denominators, so no exact
/// root finding is needed. Throws std::logic_error if the degree-sum
/// identity fails.
ExactStructure full_structure_exact(const RationalMatrix& r);

}  // namespace sysmat::exact
