#include "sysmat/staircase.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

#include "sysmat/error.hpp"

namespace sysmat {

std::vector<Index> StaircaseRun::epsilon_counts() const {
  std::vector<Index> out;
  for (const auto& s : steps) out.push_back(s.null_cols - s.rank_rows);
  return out;
}

std::vector<Index> StaircaseRun::infinite_counts() const {
  std::vector<Index> out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Index next = k + 1 < steps.size() ? steps[k + 1].null_cols : 0;
    out.push_back(steps[k].rank_rows - next);
  }
  return out;
}

StaircaseRun column_staircase(const ComplexMatrix& e, const ComplexMatrix& f, double threshold) {
  if (e.rows() != f.rows() || e.cols() != f.cols())
    throw Error(Errc::dimension_mismatch, "staircase: coefficient shapes differ");
  StaircaseRun run;
  run.u = ComplexMatrix::Identity(e.rows(), e.rows());
  run.v = ComplexMatrix::Identity(e.cols(), e.cols());
  run.e = e;
  run.f = f;
  Index wr = e.rows();
  Index wc = e.cols();

  while (wc > 0) {
    Index rank_e = 0;
    ComplexMatrix vwin = ComplexMatrix::Identity(wc, wc);
    if (wr > 0) {
      Eigen::JacobiSVD<ComplexMatrix> svd(run.e.topLeftCorner(wr, wc), Eigen::ComputeFullV);
      const RankDecision d = decide_rank(svd.singularValues(), threshold);
      rank_e = d.rank;
      run.ambiguous |= d.ambiguous;
      vwin = svd.matrixV();
    }
    const Index nk = wc - rank_e;
    if (nk == 0) break;

    run.e.leftCols(wc) = run.e.leftCols(wc) * vwin;
    run.f.leftCols(wc) = run.f.leftCols(wc) * vwin;
    run.v.leftCols(wc) = run.v.leftCols(wc) * vwin;
    run.e.block(0, wc - nk, wr, nk).setZero();

    Index rho = 0;
    if (wr > 0) {
      Eigen::JacobiSVD<ComplexMatrix> svd(run.f.block(0, wc - nk, wr, nk), Eigen::ComputeFullU);
      const RankDecision d = decide_rank(svd.singularValues(), threshold);
      rho = d.rank;
      run.ambiguous |= d.ambiguous;
      // rank rows go to the bottom of the window
      const ComplexMatrix uwin = svd.matrixU().adjoint().colwise().reverse();
      run.e.topRows(wr) = uwin * run.e.topRows(wr);
      run.f.topRows(wr) = uwin * run.f.topRows(wr);
      run.u.topRows(wr) = uwin * run.u.topRows(wr);
      run.f.block(0, wc - nk, wr - rho, nk).setZero();
      run.e.block(0, wc - nk, wr, nk).setZero();
    }
    run.steps.push_back({nk, rho});
    wr -= rho;
    wc -= nk;
  }
  run.window_rows = wr;
  run.window_cols = wc;
  return run;
}

Pencil StaircaseForm::regular_part() const {
  return {transformed.l0().topLeftCorner(d_reg, d_reg), transformed.l1().topLeftCorner(d_reg, d_reg)};
}

Pencil StaircaseForm::trailing_part() const {
  const Index r = transformed.rows() - d_reg;
  const Index c = transformed.cols() - d_reg;
  return {transformed.l0().bottomRightCorner(r, c), transformed.l1().bottomRightCorner(r, c)};
}

namespace {

double staircase_threshold(const Pencil& p, double tol) {
  return tol * static_cast<double>(std::max<Index>({p.rows(), p.cols(), 1})) * p.norm();
}

bool full_row_normal_rank(const Pencil& p, double tol, std::uint64_t seed) {
  if (p.rows() == 0) return true;
  if (p.cols() < p.rows()) return false;
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double n0 = p.l0().norm();
  const double n1 = p.l1().norm();
  const double radius = (n0 > 0.0 && n1 > 0.0) ? n0 / n1 : 1.0;
  for (int k = 0; k < 3; ++k) {
    const Complex lambda = std::polar(radius, angle(gen));
    const double threshold = tol * static_cast<double>(p.cols()) *
                             (std::abs(lambda) * spectral_norm(p.l1()) + spectral_norm(p.l0()));
    if (numerical_rank(p.at(lambda), RankTolerance::absolute(threshold)) == p.rows()) return true;
  }
  return false;
}

constexpr double kClusterRadius = 1e-2;

template <typename T>
std::vector<T> expand_counts(const std::vector<Index>& counts, T first) {
  std::vector<T> out;
  for (std::size_t k = 0; k < counts.size(); ++k)
    for (Index c = 0; c < counts[k]; ++c) out.push_back(first + static_cast<T>(k));
  return out;
}

void require_nonnegative(const std::vector<Index>& counts, const char* what) {
  for (Index c : counts)
    if (c < 0)
      throw Error(Errc::structural_inconsistency,
                  std::string("staircase produced a negative ") + what + " count");
}

}  // namespace

StaircaseForm separate_regular_right(const Pencil& p, double tol, std::uint64_t seed) {
  if (!full_row_normal_rank(p, tol, seed))
    throw Error(Errc::rank_deficient_rows, "normal rank deficient rows");
  const double threshold = staircase_threshold(p, tol);
  // First pass: right singular and infinite blocks leave the window, the
  // finite regular part stays in it.
  const StaircaseRun first = column_staircase(p.l1(), p.l0(), threshold);
  if (first.window_rows != first.window_cols)
    throw Error(Errc::rank_deficient_rows, "normal rank deficient rows");
  require_nonnegative(first.epsilon_counts(), "minimal index");
  require_nonnegative(first.infinite_counts(), "infinite block");
  const Index r1 = first.window_rows;
  const Index tr = p.rows() - r1;
  const Index tc = p.cols() - r1;

  // Second pass on the transposed trailing block T: its infinite blocks are
  // extracted, its right singular blocks become the (left singular) window.
  const StaircaseRun second =
      column_staircase(first.e.bottomRightCorner(tr, tc).transpose(),
                       first.f.bottomRightCorner(tr, tc).transpose(), threshold);
  const auto eps = second.epsilon_counts();
  if (std::any_of(eps.begin(), eps.end(), [](Index c) { return c != 0; }))
    throw Error(Errc::structural_inconsistency, "trailing block has left minimal indices");
  const Index n_inf = tr - second.window_cols;
  const auto inf = first.infinite_counts();
  Index expected_inf = 0;
  for (std::size_t k = 0; k < inf.size(); ++k) expected_inf += inf[k] * static_cast<Index>(k + 1);
  if (n_inf != tc - second.window_rows || n_inf != expected_inf)
    throw Error(Errc::structural_inconsistency, "infinite blocks disagree between passes");

  // T_new = V2^T T U2^T = [[eps, *], [0, inf]]; move the infinite rows and
  // columns in front.
  auto front_last = [](Index n, Index last) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) m(i, (i + n - last) % n) = 1.0;
    return m;
  };
  const ComplexMatrix left_t = front_last(tr, n_inf) * second.v.transpose();
  const ComplexMatrix right_t = second.u.transpose() * front_last(tc, n_inf).transpose();
  ComplexMatrix left = ComplexMatrix::Identity(p.rows(), p.rows());
  ComplexMatrix right = ComplexMatrix::Identity(p.cols(), p.cols());
  left.bottomRightCorner(tr, tr) = left_t;
  right.bottomRightCorner(tc, tc) = right_t;
  left = left * first.u;
  right = first.v * right;

  StaircaseForm form;
  form.u = left;
  form.w = right.adjoint();
  form.d_reg = r1 + n_inf;
  form.block_sizes = first.steps;
  form.ambiguous = first.ambiguous || second.ambiguous;
  ComplexMatrix l0 = left * p.l0() * right;
  ComplexMatrix l1 = left * p.l1() * right;
  const Index r = form.d_reg;
  l0.block(0, r, r, p.cols() - r).setZero();
  l1.block(0, r, r, p.cols() - r).setZero();
  form.transformed = Pencil(std::move(l0), std::move(l1));
  return form;
}

std::vector<Index> partial_multiplicities(const ComplexMatrix& e, const ComplexMatrix& f,
                                          Complex alpha, double tol) {
  const Index n = e.rows();
  if (n == 0) return {};
  const ComplexMatrix shifted = f - alpha * e;
  const double scale = spectral_norm(f) + std::abs(alpha) * spectral_norm(e);
  const double threshold = tol * static_cast<double>(n) * scale;
  // Jordan blocks at alpha are the infinite blocks of lambda*(F - alpha E) - E.
  const StaircaseRun run = column_staircase(shifted, e, threshold);
  std::vector<Index> out = expand_counts<Index>(run.infinite_counts(), 1);
  std::sort(out.begin(), out.end());
  return out;
}

Index KroneckerReport::finite_degree() const {
  Index s = 0;
  for (const auto& b : finite_eigen)
    s += std::accumulate(b.partial_multiplicities.begin(), b.partial_multiplicities.end(), Index{0});
  return s;
}

Index KroneckerReport::infinite_degree() const {
  return std::accumulate(infinite_blocks.begin(), infinite_blocks.end(), Index{0});
}

KroneckerReport kronecker_structure(const Pencil& p, double tol, std::uint64_t /*seed*/) {
  KroneckerReport rep;
  rep.rows = p.rows();
  rep.cols = p.cols();
  const double threshold = staircase_threshold(p, tol);

  // right singular + infinite structure
  const StaircaseRun right = column_staircase(p.l1(), p.l0(), threshold);
  const auto eps = right.epsilon_counts();
  const auto inf = right.infinite_counts();
  require_nonnegative(eps, "right minimal index");
  require_nonnegative(inf, "infinite block");
  rep.right_minimal = expand_counts<Index>(eps, 0);
  rep.infinite_blocks = expand_counts<Index>(inf, 1);
  rep.tolerance_ambiguous = right.ambiguous;

  // left singular structure on the transposed remainder
  const Index wr = right.window_rows;
  const Index wc = right.window_cols;
  const ComplexMatrix e_rest = right.e.topLeftCorner(wr, wc).transpose();
  const ComplexMatrix f_rest = right.f.topLeftCorner(wr, wc).transpose();
  const StaircaseRun left = column_staircase(e_rest, f_rest, threshold);
  const auto eta = left.epsilon_counts();
  const auto inf_left = left.infinite_counts();
  require_nonnegative(eta, "left minimal index");
  if (std::any_of(inf_left.begin(), inf_left.end(), [](Index c) { return c != 0; }))
    throw Error(Errc::structural_inconsistency, "infinite blocks left after right staircase");
  rep.left_minimal = expand_counts<Index>(eta, 0);
  rep.tolerance_ambiguous |= left.ambiguous;

  rep.normal_rank = rep.rows - static_cast<Index>(rep.left_minimal.size());
  if (rep.normal_rank != rep.cols - static_cast<Index>(rep.right_minimal.size()) ||
      rep.normal_rank < 0)
    throw Error(Errc::structural_inconsistency, "row and column normal ranks disagree");
  if (left.window_rows != left.window_cols)
    throw Error(Errc::structural_inconsistency, "regular remainder is not square");

  const Index nr = left.window_rows;
  if (nr == 0) return rep;
  const ComplexMatrix er = left.e.topLeftCorner(nr, nr);
  const ComplexMatrix fr = left.f.topLeftCorner(nr, nr);
  const auto eig = generalized_eigenvalues(fr, er, 0.0);
  std::vector<Complex> values;
  for (const auto& g : eig) {
    if (g.beta == Complex(0.0))
      throw Error(Errc::structural_inconsistency, "regular remainder has an infinite eigenvalue");
    values.push_back(g.alpha / g.beta);
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) < std::abs(values[b]);
  });
  // Perturbed Jordan chains split into nearby values; grow a cluster around
  // each value and keep the largest one whose mean shows a matching total
  // multiplicity in the staircase.
  std::vector<bool> assigned(values.size(), false);
  Index accounted = 0;
  for (std::size_t idx : order) {
    if (assigned[idx]) continue;
    const Complex seed_value = values[idx];
    const double radius = kClusterRadius * std::max(1.0, std::abs(seed_value));
    std::vector<std::size_t> near;
    for (std::size_t j = 0; j < values.size(); ++j)
      if (!assigned[j] && std::abs(values[j] - seed_value) <= radius) near.push_back(j);
    std::stable_sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(values[a] - seed_value) < std::abs(values[b] - seed_value);
    });

    std::size_t best = 0;
    Complex best_mean = seed_value;
    std::vector<Index> best_pm;
    Complex sum(0.0);
    for (std::size_t k = 1; k <= near.size(); ++k) {
      sum += values[near[k - 1]];
      const Complex mean = sum / static_cast<double>(k);
      std::vector<Index> pm = partial_multiplicities(er, fr, mean, tol);
      if (std::accumulate(pm.begin(), pm.end(), Index{0}) == static_cast<Index>(k)) {
        best = k;
        best_mean = mean;
        best_pm = std::move(pm);
      }
    }
    if (best == 0) {
      rep.tolerance_ambiguous = true;
      best = 1;
      best_pm = {1};
    }
    for (std::size_t k = 0; k < best; ++k) assigned[near[k]] = true;
    accounted += static_cast<Index>(best);
    rep.finite_eigen.push_back({best_mean, std::move(best_pm)});
  }
  if (accounted != nr) rep.tolerance_ambiguous = true;
  return rep;
}

std::vector<Index> infinity_mcmillan_indices(const KroneckerReport& report) {
  std::vector<Index> out;
  for (Index k : report.infinite_blocks)
    if (k >= 2) out.push_back(k - 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sysmat
