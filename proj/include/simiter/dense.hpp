#pragma once

#include <cstdint>
#include <vector>

#include "simiter/matrix.hpp"

namespace simiter {

/// Thin factorization a = u * diag(sigma) * v^T.
///
/// u is n x r and v is m x r with r = min(n, m); sigma is non-increasing and
/// non-negative. Columns of u paired with zero singular values are completed
/// to an orthonormal set.
struct SvdFactorization {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;

  /// u * diag(sigma) * v^T
  Matrix reconstruct() const;
};

struct QrFactorization {
  Matrix q; ///< n x k, orthonormal columns
  Matrix r; ///< k x k, upper triangular with non-negative diagonal
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T * b without materializing the transpose.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// Thin Householder QR of a tall matrix (rows >= cols), no pivoting.
///
/// Signs are normalized so that diag(r) >= 0. A column that is already zero
/// below the diagonal yields r(j, j) == 0 and an arbitrary unit column in q;
/// callers that care about rank inspect diag(r).
QrFactorization householder_qr(const Matrix& a);

inline constexpr int kJacobiMaxSweeps = 60;
inline constexpr double kJacobiTolerance = 1e-12;

/// One-sided (Hestenes) Jacobi SVD with cyclic sweeps. Throws ConvergenceError
/// if a pair is still above tolerance after kJacobiMaxSweeps sweeps.
SvdFactorization jacobi_svd(const Matrix& a);

/// Largest singular value by power iteration on a^T a.
///
/// The start vector is drawn from a stream keyed by (rows, cols, seed); a start
/// vector that the matrix annihilates triggers a fresh draw. Stops once the
/// relative change of the estimate drops below `tol`; throws ConvergenceError
/// after `max_iters` iterations.
double spectral_norm(const Matrix& a, double tol = 1e-13, int max_iters = 50000,
                     std::uint64_t seed = 0);

/// Smallest singular value of a square matrix, from the Jacobi oracle.
double min_singular_value(const Matrix& a);

} // namespace simiter
