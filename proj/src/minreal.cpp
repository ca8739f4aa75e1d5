#include "sysmat/minreal.hpp"

#include "sysmat/error.hpp"

namespace sysmat {

namespace {

void collect_offending(const KroneckerReport& r, Side side, std::vector<OffendingEigenvalue>& out) {
  for (const auto& b : r.finite_eigen) out.push_back({b.value, side});
  for (std::size_t k = 0; k < r.infinite_blocks.size(); ++k) out.push_back({std::nullopt, side});
}

bool zero_free(const Pencil& p, double tol, std::uint64_t seed) {
  if (p.rows() == 0 || p.cols() == 0) return true;
  const KroneckerReport r = kronecker_structure(p, tol, seed);
  return r.finite_eigen.empty() && infinity_mcmillan_indices(r).empty();
}

ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Step 1: staircase of [A, -B] and the column compression of the leading
// block row of W.
struct StepOne {
  StaircaseForm form;
  ComplexMatrix v;
  ComplexMatrix w_rows;  // first r rows of W * diag(V, I): [W11_hat, 0, W13]
  Index r = 0;
};

StepOne step_one(const SystemQuadruple& q, double tol, std::uint64_t seed) {
  const Index d = q.state_dim();
  StepOne s;
  s.form = separate_regular_right(q.controllability_pencil(), tol, seed);
  s.r = s.form.d_reg;
  s.v = ComplexMatrix::Identity(d, d);
  if (s.r == 0) return s;
  const ComplexMatrix w1 = s.form.w.topRows(s.r);
  const Compression c = col_compress(w1.leftCols(d), tol, ZeroSide::right);
  if (c.rank != s.r)
    throw Error(Errc::inconsistent_deflation, "inconsistent deflation count");
  s.v = c.transform;
  s.w_rows = w1 * block_diag(s.v, ComplexMatrix::Identity(q.inputs(), q.inputs()));
  s.w_rows.block(0, s.r, s.r, d - s.r).setZero();
  return s;
}

Pencil apply(const Pencil& p, const ComplexMatrix& left, const ComplexMatrix& right) {
  return p.transformed(left, right);
}

Pencil sub(const Pencil& p, Index r, Index c, Index nr, Index nc) {
  return {p.l0().block(r, c, nr, nc), p.l1().block(r, c, nr, nc)};
}

}  // namespace

MinimalityReport is_strongly_minimal(const SystemQuadruple& q, double tol, std::uint64_t seed) {
  require_regular_a(q, tol, seed);
  MinimalityReport rep;
  if (q.state_dim() == 0) {
    rep.e_controllable = rep.e_observable = rep.strongly_minimal = true;
    return rep;
  }
  const KroneckerReport c = kronecker_structure(q.controllability_pencil(), tol, seed);
  const KroneckerReport o = kronecker_structure(q.observability_pencil(), tol, seed);
  rep.e_controllable = !c.has_eigenvalues();
  rep.e_observable = !o.has_eigenvalues();
  rep.strongly_minimal = rep.e_controllable && rep.e_observable;
  collect_offending(c, Side::controllable, rep.offending);
  collect_offending(o, Side::observable, rep.offending);
  return rep;
}

bool is_strongly_irreducible(const SystemQuadruple& q, double tol, std::uint64_t seed) {
  require_regular_a(q, tol, seed);
  const Index m = q.outputs();
  const Index n = q.inputs();
  const Pencil s = system_pencil(q);
  const Pencil minus_i(ComplexMatrix::Identity(m, m), ComplexMatrix::Zero(m, m));
  const Pencil right_border =
      vstack(Pencil::zero(q.state_dim(), m), minus_i);  // [0; -I]
  const Pencil row_bordered = hstack(s, right_border);
  const Pencil bottom_border = hstack(
      Pencil::zero(n, q.state_dim()),
      Pencil(-ComplexMatrix::Identity(n, n), ComplexMatrix::Zero(n, n)));  // [0, I]
  const Pencil col_bordered = vstack(s, bottom_border);
  return zero_free(row_bordered, tol, seed) && zero_free(col_bordered, tol, seed);
}

Reduction reduce_controllable(const SystemQuadruple& q, double tol, std::uint64_t seed) {
  require_regular_a(q, tol, seed);
  const Index d = q.state_dim();
  const Index m = q.outputs();
  const Index n = q.inputs();
  const StepOne s1 = step_one(q, tol, seed);
  const Index r = s1.r;

  // Step 2: unitary W_tilde with [W11_hat, W13] * W_tilde_small = [I, 0].
  ComplexMatrix wt = ComplexMatrix::Identity(d + n, d + n);
  if (r > 0) {
    ComplexMatrix g(r, r + n);
    g << s1.w_rows.leftCols(r), s1.w_rows.rightCols(n);
    const ComplexMatrix small = complete_rows_to_unitary(g).adjoint();
    wt.topLeftCorner(r, r) = small.topLeftCorner(r, r);
    wt.topRightCorner(r, n) = small.topRightCorner(r, n);
    wt.bottomLeftCorner(n, r) = small.bottomLeftCorner(n, r);
    wt.bottomRightCorner(n, n) = small.bottomRightCorner(n, n);
  }

  // Step 3: display the deflated block and read off the reduced quadruple.
  const ComplexMatrix left = block_diag(s1.form.u, ComplexMatrix::Identity(m, m));
  const ComplexMatrix right = block_diag(s1.v, ComplexMatrix::Identity(n, n)) * wt;
  const Pencil t = apply(system_pencil(q), left, right);
  const Index dc = d - r;

  Reduction out;
  out.q = SystemQuadruple(sub(t, r, r, dc, dc), -sub(t, r, d, dc, n), sub(t, d, r, m, dc),
                          sub(t, d, d, m, n));
  ReductionRecord& rec = out.record;
  rec.side = Side::controllable;
  rec.u = s1.form.u;
  rec.v = s1.v;
  rec.w_tilde = wt;
  rec.w33 = wt.bottomRightCorner(n, n);
  rec.d_deflated = r;
  rec.x_deflated = sub(t, 0, 0, r, r);
  rec.rotation = s1.form.rotation;
  rec.ambiguous = s1.form.ambiguous;
  return out;
}

Reduction reduce_observable(const SystemQuadruple& q, double tol, std::uint64_t seed) {
  Reduction dual = reduce_controllable(q.transposed(), tol, seed);
  Reduction out;
  out.q = dual.q.transposed();
  out.record = std::move(dual.record);
  out.record.side = Side::observable;
  out.record.w33.transposeInPlace();
  out.record.w_tilde.transposeInPlace();
  out.record.x_deflated = out.record.x_deflated.transpose();
  return out;
}

NonUnitaryReduction reduce_controllable_nonunitary(const SystemQuadruple& q, double tol,
                                                   std::uint64_t seed) {
  require_regular_a(q, tol, seed);
  const Index d = q.state_dim();
  const Index m = q.outputs();
  const Index n = q.inputs();
  const StepOne s1 = step_one(q, tol, seed);
  const Index r = s1.r;
  const Index dc = d - r;
  NonUnitaryReduction out;
  out.d_deflated = r;
  out.e = ComplexMatrix::Zero(r, n);
  if (r > 0) out.e = -s1.w_rows.leftCols(r).partialPivLu().solve(s1.w_rows.rightCols(n));

  const ComplexMatrix left = block_diag(s1.form.u, ComplexMatrix::Identity(m, m));
  const ComplexMatrix right = block_diag(s1.v, ComplexMatrix::Identity(n, n));
  const Pencil t = apply(system_pencil(q), left, right);
  const Pencil y = sub(t, r, 0, dc, r);
  const Pencil z = sub(t, d, 0, m, r);
  const Pencil minus_b = sub(t, r, d, dc, n);
  const Pencil dd = sub(t, d, d, m, n);
  const Pencil ye = y.transformed(ComplexMatrix::Identity(dc, dc), out.e);
  const Pencil ze = z.transformed(ComplexMatrix::Identity(m, m), out.e);
  const Pencil new_minus_b(ye.l0() + minus_b.l0(), ye.l1() + minus_b.l1());
  const Pencil new_d(ze.l0() + dd.l0(), ze.l1() + dd.l1());
  out.q = SystemQuadruple(sub(t, r, r, dc, dc), -new_minus_b, sub(t, d, r, m, dc), new_d);
  return out;
}

MinimalReduction strongly_minimal_reduce(const SystemQuadruple& q, double tol, std::uint64_t seed,
                                         ReductionOrder order) {
  MinimalReduction out;
  out.wl = ComplexMatrix::Identity(q.outputs(), q.outputs());
  out.wr = ComplexMatrix::Identity(q.inputs(), q.inputs());
  SystemQuadruple cur = q;
  const Side sides[2] = {
      order == ReductionOrder::controllable_first ? Side::controllable : Side::observable,
      order == ReductionOrder::controllable_first ? Side::observable : Side::controllable};
  for (Side side : sides) {
    Reduction red = side == Side::controllable ? reduce_controllable(cur, tol, seed)
                                               : reduce_observable(cur, tol, seed);
    if (side == Side::controllable)
      out.wr = out.wr * red.record.w33;
    else
      out.wl = red.record.w33 * out.wl;
    cur = std::move(red.q);
    out.records.push_back(std::move(red.record));
  }
  out.q = std::move(cur);
  return out;
}

}  // namespace sysmat
