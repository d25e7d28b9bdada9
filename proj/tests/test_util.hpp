#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "simiter/dense.hpp"
#include "simiter/matrix.hpp"
#include "simiter/sketch.hpp"

namespace simiter::test_util {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  RngStream rng(seed, 0x7e57);
  return gaussian_matrix(rows, cols, rng);
}

// Independent reference product: plain triple loop, dot-product order.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  return c;
}

/// max |Q^T Q - I|
inline double orthonormality_error(const Matrix& q) {
  const Matrix g = naive_matmul(transpose(q), q);
  return max_abs_diff(g, Matrix::identity(q.cols()));
}

inline Matrix projector(const Matrix& z) { return naive_matmul(z, transpose(z)); }

} // namespace simiter::test_util
