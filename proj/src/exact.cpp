#include "sysmat/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sysmat/error.hpp"

namespace sysmat::exact {

GaussRational operator+(const GaussRational& a, const GaussRational& b) {
  return {a.re + b.re, a.im + b.im};
}
GaussRational operator-(const GaussRational& a, const GaussRational& b) {
  return {a.re - b.re, a.im - b.im};
}
GaussRational operator*(const GaussRational& a, const GaussRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussRational operator/(const GaussRational& a, const GaussRational& b) {
  const mpq_class n = b.re * b.re + b.im * b.im;
  if (sgn(n) == 0) throw std::domain_error("division by zero in Q(i)");
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<GaussRational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::constant(const GaussRational& c) { return Poly({c}); }
Poly Poly::x() { return Poly({GaussRational(0), GaussRational(1)}); }
Poly Poly::linear(const GaussRational& root) { return Poly({-root, GaussRational(1)}); }

GaussRational Poly::eval(const GaussRational& x) const {
  GaussRational v;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

Complex Poly::eval(Complex x) const {
  Complex v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + it->to_complex();
  return v;
}

Poly Poly::derivative() const {
  std::vector<GaussRational> d;
  for (std::size_t i = 1; i < c_.size(); ++i)
    d.push_back(c_[i] * GaussRational(static_cast<long>(i)));
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  const GaussRational l = lead();
  std::vector<GaussRational> d;
  for (const auto& c : c_) d.push_back(c / l);
  return Poly(std::move(d));
}

int Poly::multiplicity(const Poly& factor) const {
  if (factor.is_constant()) throw std::invalid_argument("multiplicity of a constant");
  if (is_zero()) throw std::invalid_argument("multiplicity in the zero polynomial");
  int k = 0;
  Poly p = *this;
  for (;;) {
    DivMod qr = divmod(p, factor);
    if (!qr.remainder.is_zero()) return k;
    p = std::move(qr.quotient);
    ++k;
  }
}

std::vector<Complex> Poly::roots() const {
  const int n = degree();
  if (n < 1) return {};
  const Poly m = monic();
  ComplexMatrix comp = ComplexMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -m.coeffs()[static_cast<std::size_t>(i)].to_complex();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(comp, false);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<GaussRational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a) {
  std::vector<GaussRational> c;
  for (const auto& x : a.c_) c.push_back(-x);
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussRational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
  return Poly(std::move(c));
}

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<GaussRational> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<GaussRational> quo(static_cast<std::size_t>(a.degree() - db + 1));
  const GaussRational lb = b.lead();
  for (int k = a.degree() - db; k >= 0; --k) {
    const GaussRational f = rem[static_cast<std::size_t>(k + db)] / lb;
    quo[static_cast<std::size_t>(k)] = f;
    if (f.is_zero()) continue;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<std::size_t>(k + j)] =
          rem[static_cast<std::size_t>(k + j)] - f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly exact_div(const Poly& a, const Poly& b) {
  DivMod qr = divmod(a, b);
  if (!qr.remainder.is_zero()) throw std::logic_error("inexact polynomial division");
  return qr.quotient;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).remainder;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

std::vector<Poly> squarefree_decomposition(const Poly& p) {
  std::vector<Poly> out;
  if (p.is_constant()) return out;
  const Poly a = p.monic();
  const Poly b = a.derivative();
  const Poly c = gcd(a, b);
  Poly w = exact_div(a, c);
  Poly y = exact_div(b, c);
  Poly z = y - w.derivative();
  while (!w.is_constant()) {
    const Poly g = gcd(w, z);
    out.push_back(g);
    w = exact_div(w, g);
    y = exact_div(z, g);
    z = y - w.derivative();
  }
  return out;
}

std::vector<Poly> gcd_free_basis(const std::vector<Poly>& polys) {
  std::vector<Poly> basis;
  for (const Poly& p : polys) {
    if (p.is_zero()) continue;
    for (const Poly& f : squarefree_decomposition(p))
      if (!f.is_constant()) basis.push_back(f);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < basis.size() && !changed; ++j) {
        const Poly g = gcd(basis[i], basis[j]);
        if (g.is_constant()) continue;
        const Poly a = exact_div(basis[i], g);
        const Poly b = exact_div(basis[j], g);
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(j));
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        for (const Poly& x : {a, b, g})
          if (!x.is_constant()) basis.push_back(x.monic());
        changed = true;
      }
    }
  }
  return basis;
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(Poly num, Poly den) {
  if (den.is_zero()) throw std::domain_error("zero denominator");
  if (num.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  const Poly g = gcd(num, den);
  num = exact_div(num, g);
  den = exact_div(den, g);
  const GaussRational l = den.lead();
  num_ = num * Poly::constant(GaussRational(1) / l);
  den_ = den.monic();
}

int RatFunc::valuation_at_infinity() const {
  if (is_zero()) throw std::logic_error("valuation of zero");
  return den_.degree() - num_.degree();
}

Complex RatFunc::eval(Complex x) const { return num_.eval(x) / den_.eval(x); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}
RatFunc operator-(const RatFunc& a) { return {-a.num_, a.den_}; }
RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("rational function division by zero");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

// ---------------------------------------------------------------- matrices

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols, rows);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix RationalMatrix::eval(Complex x) const {
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).eval(x);
  return m;
}

ExactMatrix ExactMatrix::from_integers(Index r, Index c, const std::vector<long>& row_major) {
  if (static_cast<Index>(row_major.size()) != r * c)
    throw Error(Errc::dimension_mismatch, "integer matrix size");
  ExactMatrix m(r, c);
  for (std::size_t k = 0; k < row_major.size(); ++k) m.entries[k] = GaussRational(row_major[k]);
  return m;
}

ComplexMatrix ExactMatrix::to_complex() const {
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).to_complex();
  return m;
}

SystemQuadruple ExactQuadruple::to_numeric() const {
  return {Pencil(a0.to_complex(), a1.to_complex()), Pencil(b0.to_complex(), b1.to_complex()),
          Pencil(c0.to_complex(), c1.to_complex()), Pencil(d0.to_complex(), d1.to_complex())};
}

Index exact_rank(const ExactMatrix& m) {
  ExactMatrix a = m;
  Index rank = 0;
  for (Index col = 0; col < a.cols && rank < a.rows; ++col) {
    Index piv = -1;
    for (Index i = rank; i < a.rows; ++i)
      if (!a(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (Index j = col; j < a.cols; ++j) std::swap(a(piv, j), a(rank, j));
    for (Index i = rank + 1; i < a.rows; ++i) {
      if (a(i, col).is_zero()) continue;
      const GaussRational f = a(i, col) / a(rank, col);
      for (Index j = col; j < a.cols; ++j) a(i, j) = a(i, j) - f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

namespace {

using RatGrid = std::vector<std::vector<RatFunc>>;

RatFunc pencil_entry(const ExactMatrix& l0, const ExactMatrix& l1, Index i, Index j) {
  return RatFunc(Poly({-l0(i, j), l1(i, j)}));
}

RatGrid pencil_grid(const ExactMatrix& l0, const ExactMatrix& l1) {
  RatGrid g(static_cast<std::size_t>(l0.rows), std::vector<RatFunc>(static_cast<std::size_t>(l0.cols)));
  for (Index i = 0; i < l0.rows; ++i)
    for (Index j = 0; j < l0.cols; ++j)
      g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pencil_entry(l0, l1, i, j);
  return g;
}

RatFunc determinant(RatGrid a) {
  const std::size_t n = a.size();
  RatFunc det(Poly::constant(1));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t i = col; i < n; ++i)
      if (!a[i][col].is_zero()) {
        piv = i;
        break;
      }
    if (piv == n) return RatFunc();
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det = det * a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col].is_zero()) continue;
      const RatFunc f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[col][j];
    }
  }
  return det;
}

void combinations(Index n, Index k, std::vector<std::vector<Index>>& out) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), Index{0});
  if (k > n) return;
  for (;;) {
    out.push_back(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Nonzero k x k minors for k = 1 .. normal rank.
struct MinorTable {
  Index rank = 0;
  std::vector<std::vector<RatFunc>> by_size;  // by_size[k-1]
};

MinorTable all_minors(const RationalMatrix& r) {
  MinorTable t;
  const Index kmax = std::min(r.rows, r.cols);
  for (Index k = 1; k <= kmax; ++k) {
    std::vector<std::vector<Index>> rows, cols;
    combinations(r.rows, k, rows);
    combinations(r.cols, k, cols);
    std::vector<RatFunc> nonzero;
    for (const auto& rs : rows)
      for (const auto& cs : cols) {
        RatGrid g(static_cast<std::size_t>(k), std::vector<RatFunc>(static_cast<std::size_t>(k)));
        for (Index i = 0; i < k; ++i)
          for (Index j = 0; j < k; ++j)
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                r(rs[static_cast<std::size_t>(i)], cs[static_cast<std::size_t>(j)]);
        RatFunc det = determinant(std::move(g));
        if (!det.is_zero()) nonzero.push_back(std::move(det));
      }
    if (nonzero.empty()) break;
    t.by_size.push_back(std::move(nonzero));
    t.rank = k;
  }
  return t;
}

template <typename Valuation>
std::vector<Index> indices_from_minors(const MinorTable& t, Valuation val) {
  std::vector<Index> out;
  Index prev = 0;
  for (const auto& minors : t.by_size) {
    Index nu = std::numeric_limits<Index>::max();
    for (const auto& m : minors) nu = std::min<Index>(nu, val(m));
    out.push_back(nu - prev);
    prev = nu;
  }
  return out;
}

// Exact nullity of the block Toeplitz matrix of N(lambda) for vectors of degree <= k.
Index toeplitz_nullity(const std::vector<ExactMatrix>& coeffs, Index k) {
  const Index q = static_cast<Index>(coeffs.size()) - 1;
  const Index m = coeffs[0].rows;
  const Index n = coeffs[0].cols;
  ExactMatrix t((q + k + 1) * m, (k + 1) * n);
  for (Index i = 0; i <= k; ++i)
    for (Index j = 0; j <= q; ++j)
      for (Index r = 0; r < m; ++r)
        for (Index c = 0; c < n; ++c) t((i + j) * m + r, i * n + c) = coeffs[static_cast<std::size_t>(j)](r, c);
  return (k + 1) * n - exact_rank(t);
}

std::vector<Index> right_minimal_indices(const RationalMatrix& r, Index rank) {
  const Index defect = r.cols - rank;
  if (defect == 0) return {};
  if (rank == 0) return std::vector<Index>(static_cast<std::size_t>(defect), 0);
  // clear denominators: N = lcm(den) * R is polynomial with the same kernel
  Poly l = Poly::constant(1);
  for (const auto& e : r.entries) l = exact_div(l * e.den(), gcd(l, e.den()));
  int q = 0;
  std::vector<Poly> polys;
  for (const auto& e : r.entries) {
    polys.push_back(e.num() * exact_div(l, e.den()));
    q = std::max(q, polys.back().degree());
  }
  std::vector<ExactMatrix> coeffs(static_cast<std::size_t>(q + 1), ExactMatrix(r.rows, r.cols));
  for (Index i = 0; i < r.rows; ++i)
    for (Index j = 0; j < r.cols; ++j) {
      const Poly& p = polys[static_cast<std::size_t>(i * r.cols + j)];
      for (int d = 0; d <= p.degree(); ++d)
        coeffs[static_cast<std::size_t>(d)](i, j) = p.coeffs()[static_cast<std::size_t>(d)];
    }
  std::vector<Index> out;
  Index prev_nullity = 0;
  Index prev_count = 0;
  const Index kmax = rank * q + 1;
  for (Index k = 0; k <= kmax; ++k) {
    const Index nullity = toeplitz_nullity(coeffs, k);
    const Index count = nullity - prev_nullity;  // #{eps <= k}
    for (Index c = prev_count; c < count; ++c) out.push_back(k);
    prev_nullity = nullity;
    prev_count = count;
    if (count == defect) return out;
  }
  throw std::logic_error("minimal index search did not terminate");
}

}  // namespace

RationalMatrix transfer_exact(const ExactQuadruple& q) {
  const Index d = q.state_dim();
  const Index m = q.outputs();
  const Index n = q.inputs();
  // solve A X = B by elimination on [A | B]
  RatGrid aug(static_cast<std::size_t>(d), std::vector<RatFunc>(static_cast<std::size_t>(d + n)));
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j)
      aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pencil_entry(q.a0, q.a1, i, j);
    for (Index j = 0; j < n; ++j)
      aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(d + j)] = pencil_entry(q.b0, q.b1, i, j);
  }
  const auto D = static_cast<std::size_t>(d);
  const auto W = static_cast<std::size_t>(d + n);
  for (std::size_t col = 0; col < D; ++col) {
    std::size_t piv = D;
    for (std::size_t i = col; i < D; ++i)
      if (!aug[i][col].is_zero()) {
        piv = i;
        break;
      }
    if (piv == D) throw Error(Errc::a_not_regular, "A singular as polynomial matrix");
    std::swap(aug[piv], aug[col]);
    const RatFunc p = aug[col][col];
    for (std::size_t j = col; j < W; ++j) aug[col][j] = aug[col][j] / p;
    for (std::size_t i = 0; i < D; ++i) {
      if (i == col || aug[i][col].is_zero()) continue;
      const RatFunc f = aug[i][col];
      for (std::size_t j = col; j < W; ++j) aug[i][j] = aug[i][j] - f * aug[col][j];
    }
  }
  RationalMatrix r(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      RatFunc v = pencil_entry(q.d0, q.d1, i, j);
      for (Index k = 0; k < d; ++k)
        v = v + pencil_entry(q.c0, q.c1, i, k) *
                    aug[static_cast<std::size_t>(k)][static_cast<std::size_t>(d + j)];
      r(i, j) = v;
    }
  return r;
}

Index normal_rank_exact(const RationalMatrix& r) { return all_minors(r).rank; }

std::vector<Index> local_structure_exact(const RationalMatrix& r, const GaussRational& root) {
  const Poly lin = Poly::linear(root);
  return indices_from_minors(all_minors(r), [&](const RatFunc& f) {
    return static_cast<Index>(f.num().multiplicity(lin) - f.den().multiplicity(lin));
  });
}

std::vector<Index> infinity_structure_exact(const RationalMatrix& r) {
  return indices_from_minors(all_minors(r), [](const RatFunc& f) {
    return static_cast<Index>(f.valuation_at_infinity());
  });
}

MinimalIndices minimal_indices_exact(const RationalMatrix& r) {
  const Index rank = normal_rank_exact(r);
  return {right_minimal_indices(r, rank), right_minimal_indices(r.transpose(), rank)};
}

McMillanStructure ExactStructure::to_mcmillan(Index rows, Index cols) const {
  McMillanStructure s;
  s.rows = rows;
  s.cols = cols;
  s.normal_rank = normal_rank;
  for (const auto& p : finite)
    for (Complex z : p.roots) s.finite_points.push_back({z, p.indices});
  std::sort(s.finite_points.begin(), s.finite_points.end(),
            [](const PointStructure& x, const PointStructure& y) {
              if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
              return x.value.imag() < y.value.imag();
            });
  s.infinity_indices = infinity_indices;
  s.right_minimal = minimal.right;
  s.left_minimal = minimal.left;
  s.update_degrees();
  return s;
}

ExactStructure full_structure_exact(const RationalMatrix& r) {
  const MinorTable t = all_minors(r);
  ExactStructure out;
  out.normal_rank = t.rank;

  std::vector<Poly> polys;
  for (const auto& minors : t.by_size)
    for (const auto& f : minors) {
      polys.push_back(f.num());
      polys.push_back(f.den());
    }
  for (const Poly& b : gcd_free_basis(polys)) {
    std::vector<Index> idx = indices_from_minors(t, [&](const RatFunc& f) {
      return static_cast<Index>(f.num().multiplicity(b) - f.den().multiplicity(b));
    });
    if (std::all_of(idx.begin(), idx.end(), [](Index v) { return v == 0; })) continue;
    out.finite.push_back({b, b.roots(), std::move(idx)});
  }
  out.infinity_indices = indices_from_minors(t, [](const RatFunc& f) {
    return static_cast<Index>(f.valuation_at_infinity());
  });
  out.minimal = {right_minimal_indices(r, t.rank), right_minimal_indices(r.transpose(), t.rank)};

  auto tally = [&](const std::vector<Index>& idx, Index weight) {
    for (Index v : idx) {
      if (v < 0) out.polar_degree -= v * weight;
      if (v > 0) out.zero_degree += v * weight;
    }
  };
  for (const auto& p : out.finite) tally(p.indices, p.factor.degree());
  tally(out.infinity_indices, 1);
  const Index eps = std::accumulate(out.minimal.right.begin(), out.minimal.right.end(), Index{0});
  const Index eta = std::accumulate(out.minimal.left.begin(), out.minimal.left.end(), Index{0});
  if (out.polar_degree != out.zero_degree + eps + eta)
    throw std::logic_error("exact structure violates the degree-sum identity");
  return out;
}

}  // namespace sysmat::exact
