#pragma once

#include <Eigen/Dense>
#include <complex>

namespace subqaoa {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline double frobenius(const Mat& a) { return a.norm(); }

/// ||A - A^dagger||_F <= rel_tol * ||A||_F (zero matrix counts as Hermitian).
bool is_hermitian(const Mat& a, double rel_tol = 1e-12);

struct Eigensystem {
  RVec values;   // ascending
  Mat vectors;   // columns
};

/// Dense Hermitian eigendecomposition (LAPACK zheevd).
Eigensystem eigh(const Mat& h);

/// exp(-i * angle * H) applied to columns, H given by its eigendecomposition.
Mat evolve_columns(const Eigensystem& es, double angle, const Mat& columns);

/// Orthonormal basis (columns) of the right null space of a, with singular
/// values below rel_tol * sigma_max counted as zero.  LAPACK zgesvd.
Mat svd_nullspace(const Mat& a, double rel_tol = 1e-9);

}  // namespace subqaoa
