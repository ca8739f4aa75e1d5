#include "sysmat/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "sysmat/error.hpp"

namespace sysmat {

namespace {

constexpr double kBand = 1e16;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(Errc::invalid_argument, std::string(name) + " must be positive and finite");
}

void require_nonempty(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "A and B differ in size");
  if (a.rows() == 0 || a.cols() == 0) throw Error(Errc::empty_matrix, "nothing to scale");
}

/// Scalar rescaling so that prod(v) = c, done in logs.
void renormalize(RealVector& v, double c) {
  double log_sum = 0.0;
  for (double e : v) log_sum += std::log(e);
  v *= std::exp((std::log(c) - log_sum) / static_cast<double>(v.size()));
}

void require_no_zero_line(const RealMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    if (m.row(i).maxCoeff() == 0.0)
      throw Error(Errc::zero_row_col, "zero row " + std::to_string(i) + " in M");
  for (Index j = 0; j < m.cols(); ++j)
    if (m.col(j).maxCoeff() == 0.0)
      throw Error(Errc::zero_row_col, "zero column " + std::to_string(j) + " in M");
}

double max_rel_dev(const RealVector& sums, double target) {
  double dev = 0.0;
  for (double s : sums) dev = std::max(dev, std::abs(s / target - 1.0));
  return dev;
}

struct Balance1 {
  double gamma_left, gamma_right, residual;
};

Balance1 balance1(const RealMatrix& m, const RealVector& x, const RealVector& y, Exec exec) {
  const RealVector rows = x.cwiseProduct(kernels::mat_vec(m, y, exec));
  const RealVector cols = y.cwiseProduct(kernels::mat_tvec(m, x, exec));
  const double gl = rows.mean();
  const double gr = cols.mean();
  return {gl, gr, std::max(max_rel_dev(rows, gl), max_rel_dev(cols, gr))};
}

std::pair<double, double> balance2(const RealMatrix& s, const RealVector& z, Exec exec) {
  const RealVector rows = z.cwiseProduct(kernels::mat_vec(s, z, exec));
  const double g = rows.mean();
  return {g, max_rel_dev(rows, g)};
}

RealVector squared(const RealVector& d) { return d.cwiseProduct(d); }

bool outside_band(const RealVector& x, double scale) {
  for (double e : x) {
    const double r = std::sqrt(e) / scale;
    if (!(r >= 1.0 / kBand && r <= kBand)) return true;
  }
  return false;
}

}  // namespace

int default_max_iter(Index m, Index n, double tol) {
  const double digits = std::max(1.0, std::ceil(-std::log10(tol)));
  return static_cast<int>(10 * (m + n) * digits);
}

RealMatrix build_M(const ComplexMatrix& a, const ComplexMatrix& b, Exec exec) {
  return kernels::build_M(a, b, exec);
}

RealMatrix build_M_alpha(const RealMatrix& m, double alpha) {
  require_positive(alpha, "alpha");
  const Index r = m.rows();
  const Index c = m.cols();
  const double a2 = alpha * alpha;
  RealMatrix s(r + c, r + c);
  s.topLeftCorner(r, r).setConstant(a2 / static_cast<double>(r * r));
  s.topRightCorner(r, c) = m;
  s.bottomLeftCorner(c, r) = m.transpose();
  s.bottomRightCorner(c, c).setConstant(a2 / static_cast<double>(c * c));
  return s;
}

SinkhornResult sinkhorn_knopp(const RealMatrix& s, double tol, int max_iter,
                              const std::optional<RealVector>& initial_col, Exec exec) {
  if (s.rows() != s.cols()) throw Error(Errc::dimension_mismatch, "sinkhorn_knopp: not square");
  if (s.rows() == 0) throw Error(Errc::empty_matrix, "sinkhorn_knopp: empty");
  if (s.minCoeff() < 0.0) throw Error(Errc::invalid_argument, "sinkhorn_knopp: negative entry");
  require_no_zero_line(s);
  SinkhornResult r;
  r.d_col = initial_col ? *initial_col : RealVector::Ones(s.cols());
  if (r.d_col.size() != s.cols() || r.d_col.minCoeff() <= 0.0)
    throw Error(Errc::invalid_argument, "sinkhorn_knopp: bad initial scaling");
  r.d_row = RealVector::Ones(s.rows());
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    r.d_row = kernels::mat_vec(s, r.d_col, exec).cwiseInverse();
    r.d_col = kernels::mat_tvec(s, r.d_row, exec).cwiseInverse();
    // column sums are exactly one now
    const RealVector rows = r.d_row.cwiseProduct(kernels::mat_vec(s, r.d_col, exec));
    r.residual = (rows.array() - 1.0).abs().maxCoeff();
    if (r.residual <= tol) {
      r.converged = true;
      return r;
    }
  }
  r.iterations = max_iter;
  return r;
}

bool exactly_scalable(const RealMatrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows == 0 || cols == 0) return false;
  // Row i ships cols/g units, column j receives rows/g units; an exact
  // scaling exists iff some flow uses every nonzero position.
  const long g = std::gcd(static_cast<long>(rows), static_cast<long>(cols));
  const long supply = cols / g;
  const long demand = rows / g;
  const long total = supply * rows;
  RealMatrix flow = RealMatrix::Zero(rows, cols);
  std::vector<long> left(rows, supply), need(cols, demand);
  long shipped = 0;
  while (shipped < total) {
    // BFS from rows with supply left; row->col along the pattern, col->row
    // along positive flow.
    std::vector<Index> from_col(cols, -1), from_row(rows, -2);
    std::queue<Index> queue;
    for (Index i = 0; i < rows; ++i)
      if (left[i] > 0) {
        from_row[i] = -1;
        queue.push(i);
      }
    Index sink_col = -1;
    while (!queue.empty() && sink_col < 0) {
      const Index i = queue.front();
      queue.pop();
      for (Index j = 0; j < cols && sink_col < 0; ++j) {
        if (m(i, j) == 0.0 || from_col[j] >= 0) continue;
        from_col[j] = i;
        if (need[j] > 0) {
          sink_col = j;
          break;
        }
        for (Index k = 0; k < rows; ++k)
          if (from_row[k] == -2 && flow(k, j) > 0.0) {
            from_row[k] = j;
            queue.push(k);
          }
      }
    }
    if (sink_col < 0) return false;
    long amount = need[sink_col];
    for (Index j = sink_col;;) {
      const Index i = from_col[j];
      if (from_row[i] == -1) {
        amount = std::min(amount, left[i]);
        break;
      }
      j = from_row[i];
      amount = std::min(amount, static_cast<long>(flow(i, j)));
    }
    for (Index j = sink_col;;) {
      const Index i = from_col[j];
      flow(i, j) += static_cast<double>(amount);
      if (from_row[i] == -1) {
        left[i] -= amount;
        break;
      }
      j = from_row[i];
      flow(i, j) -= static_cast<double>(amount);
    }
    need[sink_col] -= amount;
    shipped += amount;
  }
  // An unused nonzero (i, j) can carry flow iff the residual graph leads from
  // column j back to row i.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      if (m(i, j) == 0.0 || flow(i, j) > 0.0) continue;
      std::vector<bool> seen_row(rows, false), seen_col(cols, false);
      std::vector<Index> stack{j};
      seen_col[j] = true;
      bool found = false;
      while (!stack.empty() && !found) {
        const Index c = stack.back();
        stack.pop_back();
        for (Index k = 0; k < rows && !found; ++k) {
          if (seen_row[k] || flow(k, c) <= 0.0) continue;
          seen_row[k] = true;
          if (k == i) {
            found = true;
            break;
          }
          for (Index l = 0; l < cols; ++l)
            if (!seen_col[l] && m(k, l) != 0.0) {
              seen_col[l] = true;
              stack.push_back(l);
            }
        }
      }
      if (!found) return false;
    }
  return true;
}

ScalingResult scale_approach1(const ComplexMatrix& a, const ComplexMatrix& b, double c_left,
                              double c_right, const ScalingOptions& opts) {
  require_nonempty(a, b);
  require_positive(c_left, "c_left");
  require_positive(c_right, "c_right");
  const RealMatrix m = build_M(a, b, opts.exec);
  require_no_zero_line(m);
  if (!exactly_scalable(m))
    throw Error(Errc::diverging_scaling,
                "diverging scalings: the pattern of M admits no balanced scaling; use approach 2");
  const Index rows = m.rows();
  const Index cols = m.cols();
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : default_max_iter(rows, cols, opts.tol);

  RealVector x = RealVector::Ones(rows);
  renormalize(x, c_left);
  RealVector y = RealVector::Ones(cols);
  if (opts.initial) {
    if (opts.initial->size() != cols || opts.initial->minCoeff() <= 0.0)
      throw Error(Errc::invalid_argument, "approach 1: bad initial scaling");
    y = *opts.initial;
  }
  renormalize(y, c_right);
  const double scale_left = std::sqrt(x[0]);
  const double scale_right = std::pow(c_right, 0.5 / static_cast<double>(cols));

  ScalingResult r;
  r.approach = 1;
  r.objective.push_back(x.dot(kernels::mat_vec(m, y, opts.exec)));
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    x = kernels::mat_vec(m, y, opts.exec).cwiseInverse();
    renormalize(x, c_left);
    r.objective.push_back(y.dot(kernels::mat_tvec(m, x, opts.exec)));
    y = kernels::mat_tvec(m, x, opts.exec).cwiseInverse();
    renormalize(y, c_right);
    r.objective.push_back(x.dot(kernels::mat_vec(m, y, opts.exec)));
    if (outside_band(x, scale_left) || outside_band(y, scale_right))
      throw Error(Errc::diverging_scaling,
                  "diverging scalings after " + std::to_string(r.iterations) +
                      " sweeps; use approach 2");
    const Balance1 bal = balance1(m, x, y, opts.exec);
    r.residual = bal.residual;
    r.gamma_left = bal.gamma_left;
    r.gamma_right = bal.gamma_right;
    if (bal.residual <= opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, max_iter);
  r.d_left = x.cwiseSqrt();
  r.d_right = y.cwiseSqrt();
  return r;
}

ScalingResult scale_approach2(const ComplexMatrix& a, const ComplexMatrix& b, double alpha,
                              double c, const ScalingOptions& opts) {
  require_nonempty(a, b);
  require_positive(c, "c");
  const RealMatrix m = build_M(a, b, opts.exec);
  const RealMatrix s = build_M_alpha(m, alpha);
  const Index rows = m.rows();
  const Index cols = m.cols();
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : default_max_iter(rows, cols, opts.tol);

  // A tighter inner tolerance leaves room for the symmetrization below.
  const SinkhornResult sk = sinkhorn_knopp(s, 0.1 * opts.tol, max_iter, opts.initial, opts.exec);
  // For symmetric S the two sides agree up to a scalar at the fixed point.
  RealVector z = sk.d_row.cwiseProduct(sk.d_col).cwiseSqrt();
  renormalize(z, c);

  ScalingResult r;
  r.approach = 2;
  r.alpha = alpha;
  r.iterations = sk.iterations;
  const auto [gamma, residual] = balance2(s, z, opts.exec);
  r.gamma = gamma;
  r.residual = residual;
  r.converged = sk.converged && residual <= opts.tol;
  r.d_left = z.head(rows).cwiseSqrt();
  r.d_right = z.tail(cols).cwiseSqrt();
  return r;
}

double scaling_residual(const ScalingResult& r, const RealMatrix& m) {
  if (r.approach == 2) {
    RealVector z(r.d_left.size() + r.d_right.size());
    z << squared(r.d_left), squared(r.d_right);
    return balance2(build_M_alpha(m, r.alpha), z, Exec::serial).second;
  }
  return balance1(m, squared(r.d_left), squared(r.d_right), Exec::serial).residual;
}

namespace {

double pow2(double v) { return std::exp2(std::round(std::log2(v))); }

void refresh_gammas(ScalingResult& r, const RealMatrix& m) {
  if (r.approach == 2) {
    RealVector z(r.d_left.size() + r.d_right.size());
    z << squared(r.d_left), squared(r.d_right);
    const auto [gamma, residual] = balance2(build_M_alpha(m, r.alpha), z, Exec::serial);
    r.gamma = gamma;
    r.residual = residual;
  } else {
    const Balance1 bal = balance1(m, squared(r.d_left), squared(r.d_right), Exec::serial);
    r.gamma_left = bal.gamma_left;
    r.gamma_right = bal.gamma_right;
    r.residual = bal.residual;
  }
}

}  // namespace

ScalingResult quantize_pow2(const ScalingResult& r, const RealMatrix& m) {
  ScalingResult q = r;
  q.d_left = r.d_left.unaryExpr(&pow2);
  q.d_right = r.d_right.unaryExpr(&pow2);
  q.d_lambda = pow2(r.d_lambda);
  refresh_gammas(q, m);
  return q;
}

ScalingResult normalize_unit_norm(const ScalingResult& r, const RealMatrix& m) {
  const RealVector x = squared(r.d_left);
  const RealVector y = squared(r.d_right);
  const RealVector rows = x.cwiseProduct(kernels::mat_vec(m, y, Exec::serial));
  const RealVector cols = y.cwiseProduct(kernels::mat_tvec(m, x, Exec::serial));
  const double rho = std::sqrt(std::max(rows.maxCoeff(), cols.maxCoeff()));
  ScalingResult out = r;
  if (!(rho > 0.0)) return out;
  out.d_left /= std::sqrt(rho);
  out.d_right /= std::sqrt(rho);
  refresh_gammas(out, m);
  return out;
}

Pencil apply_scaling(const Pencil& p, const ScalingResult& r) {
  if (p.rows() != r.d_left.size() || p.cols() != r.d_right.size())
    throw Error(Errc::dimension_mismatch, "apply_scaling: scaling does not fit the pencil");
  const ComplexMatrix dl = r.d_left.cast<Complex>().asDiagonal();
  const ComplexMatrix dr = r.d_right.cast<Complex>().asDiagonal();
  return {r.d_lambda * (dl * p.l0() * dr), dl * p.l1() * dr};
}

RowColNorms row_col_norms(const Pencil& p) {
  RowColNorms n;
  if (p.empty()) return n;
  const RealMatrix m = kernels::build_M(p.l0(), p.l1(), Exec::serial);
  const RealVector rows = m.rowwise().sum().cwiseSqrt();
  const RealVector cols = m.colwise().sum().transpose().cwiseSqrt();
  n.row_min = rows.minCoeff();
  n.row_max = rows.maxCoeff();
  n.col_min = cols.minCoeff();
  n.col_max = cols.maxCoeff();
  return n;
}

}  // namespace sysmat
