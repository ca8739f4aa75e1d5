#include <cstddef>

#include "sysmat/error.hpp"
#include "sysmat/scaling.hpp"

namespace sysmat::kernels {

namespace {

// Below this many entries the thread start-up costs more than the loop.
constexpr Index kParallelThreshold = 1 << 12;

bool go_parallel(Exec exec, Index work) { return exec == Exec::parallel && work >= kParallelThreshold; }

}  // namespace

RealMatrix build_M(const ComplexMatrix& a, const ComplexMatrix& b, Exec exec) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "build_M: A and B differ in size");
  RealMatrix m(a.rows(), a.cols());
  const Index cols = a.cols();
  const Index rows = a.rows();
#pragma omp parallel for schedule(static) if (go_parallel(exec, rows * cols))
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = std::norm(a(i, j)) + std::norm(b(i, j));
  return m;
}

RealVector mat_vec(const RealMatrix& m, const RealVector& y, Exec exec) {
  RealVector out(m.rows());
  const Index rows = m.rows();
  const Index cols = m.cols();
#pragma omp parallel for schedule(static) if (go_parallel(exec, rows * cols))
  for (Index i = 0; i < rows; ++i) {
    double s = 0.0;
    for (Index j = 0; j < cols; ++j) s += m(i, j) * y[j];
    out[i] = s;
  }
  return out;
}

RealVector mat_tvec(const RealMatrix& m, const RealVector& x, Exec exec) {
  RealVector out(m.cols());
  const Index rows = m.rows();
  const Index cols = m.cols();
#pragma omp parallel for schedule(static) if (go_parallel(exec, rows * cols))
  for (Index j = 0; j < cols; ++j) {
    double s = 0.0;
    for (Index i = 0; i < rows; ++i) s += m(i, j) * x[i];
    out[j] = s;
  }
  return out;
}

}  // namespace sysmat::kernels
