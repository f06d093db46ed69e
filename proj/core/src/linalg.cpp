#include "subqaoa/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "subqaoa/errors.hpp"

namespace subqaoa {

namespace {
lapack_complex_double* lapack_cast(cxd* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}
}  // namespace

bool is_hermitian(const Mat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

Eigensystem eigh(const Mat& h) {
  if (h.rows() != h.cols()) {
    throw StructuralError("eigh: matrix is not square");
  }
  Eigensystem es;
  es.vectors = h;
  es.values.resize(h.rows());
  const auto n = static_cast<lapack_int>(h.rows());
  if (n == 0) return es;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                     lapack_cast(es.vectors.data()), n, es.values.data());
  if (info != 0) {
    throw NumericalIntegrityError("zheevd failed with info=" +
                                  std::to_string(info));
  }
  return es;
}

Mat evolve_columns(const Eigensystem& es, double angle, const Mat& columns) {
  if (columns.rows() != es.vectors.rows()) {
    throw StructuralError("evolve_columns: dimension mismatch");
  }
  Mat coords = es.vectors.adjoint() * columns;
  const cxd minus_i(0.0, -1.0);
  for (Eigen::Index k = 0; k < coords.rows(); ++k) {
    coords.row(k) *= std::exp(minus_i * angle * es.values[k]);
  }
  return es.vectors * coords;
}

Mat svd_nullspace(const Mat& a, double rel_tol) {
  const auto rows = static_cast<lapack_int>(a.rows());
  const auto cols = static_cast<lapack_int>(a.cols());
  if (rows == 0 || cols == 0) {
    throw StructuralError("svd_nullspace: empty matrix");
  }
  Mat work = a;
  Mat vt(cols, cols);
  RVec sigma(std::min(rows, cols));
  RVec superb(std::max<lapack_int>(1, std::min(rows, cols) - 1));
  const lapack_int info = LAPACKE_zgesvd(
      LAPACK_COL_MAJOR, 'N', 'A', rows, cols, lapack_cast(work.data()), rows,
      sigma.data(), nullptr, 1, lapack_cast(vt.data()), cols, superb.data());
  if (info != 0) {
    throw NumericalIntegrityError("zgesvd failed with info=" +
                                  std::to_string(info));
  }
  const double cutoff = rel_tol * (sigma.size() > 0 ? sigma[0] : 0.0);
  lapack_int rank = 0;
  while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
  // Null vectors are the conjugated trailing rows of V^T, plus all columns
  // beyond the row count (sigma lists at most min(rows, cols) values).
  const lapack_int nullity = cols - rank;
  Mat null_basis(cols, nullity);
  for (lapack_int j = 0; j < nullity; ++j) {
    null_basis.col(j) = vt.row(rank + j).conjugate().transpose();
  }
  return null_basis;
}

}  // namespace subqaoa
