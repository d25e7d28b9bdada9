#include "simiter/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstddef>

namespace simiter::kernels {

namespace {

// out_row = a_row * b, accumulated in order p = 0..inner-1.
inline void matmul_row(const Matrix& a, const Matrix& b, std::size_t i, std::span<double> out_row) {
  std::fill(out_row.begin(), out_row.end(), 0.0);
  const auto a_row = a.row(i);
  const std::size_t n = b.cols();
  for (std::size_t p = 0; p < a_row.size(); ++p) {
    const double s = a_row[p];
    if (s == 0.0) continue;
    const double* b_row = b.row(p).data();
    double* o = out_row.data();
    for (std::size_t j = 0; j < n; ++j) o[j] += s * b_row[j];
  }
}

// out_row = (column i of a)^T * b, accumulated in order p = 0..a.rows()-1.
inline void matmul_at_b_row(const Matrix& a, const Matrix& b, std::size_t i,
                            std::span<double> out_row) {
  std::fill(out_row.begin(), out_row.end(), 0.0);
  const std::size_t n = b.cols();
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double s = a(p, i);
    if (s == 0.0) continue;
    const double* b_row = b.row(p).data();
    double* o = out_row.data();
    for (std::size_t j = 0; j < n; ++j) o[j] += s * b_row[j];
  }
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

} // namespace

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, i, out.row(i));
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
  for (std::size_t i = 0; i < a.cols(); ++i) matmul_at_b_row(a, b, i, out.row(i));
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
}

void matvec_t(const Matrix& a, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double s = x[p];
    const auto row = a.row(p);
    for (std::size_t j = 0; j < row.size(); ++j) y[j] += s * row[j];
  }
}

} // namespace serial

namespace parallel {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    matmul_row(a, b, static_cast<std::size_t>(i), out.row(static_cast<std::size_t>(i)));
  }
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
  const auto rows = static_cast<std::ptrdiff_t>(a.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    matmul_at_b_row(a, b, static_cast<std::size_t>(i), out.row(static_cast<std::size_t>(i)));
  }
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    y[static_cast<std::size_t>(i)] = dot(a.row(static_cast<std::size_t>(i)), x);
  }
}

// Column-parallel: each thread owns a slice of y and sweeps all rows of a in
// the same order as the serial kernel, so every y[j] sees identical additions.
void matvec_t(const Matrix& a, std::span<const double> x, std::span<double> y) {
  const auto cols = static_cast<std::ptrdiff_t>(a.cols());
#pragma omp parallel
  {
    const auto nthreads = static_cast<std::ptrdiff_t>(omp_get_num_threads());
    const auto tid = static_cast<std::ptrdiff_t>(omp_get_thread_num());
    const std::ptrdiff_t chunk = (cols + nthreads - 1) / nthreads;
    const std::ptrdiff_t lo = std::min(cols, tid * chunk);
    const std::ptrdiff_t hi = std::min(cols, lo + chunk);
    for (std::ptrdiff_t j = lo; j < hi; ++j) y[static_cast<std::size_t>(j)] = 0.0;
    for (std::size_t p = 0; p < a.rows(); ++p) {
      const double s = x[p];
      const auto row = a.row(p);
      for (std::ptrdiff_t j = lo; j < hi; ++j)
        y[static_cast<std::size_t>(j)] += s * row[static_cast<std::size_t>(j)];
    }
  }
}

} // namespace parallel

bool in_parallel_region() noexcept { return omp_in_parallel() != 0; }

int max_threads() noexcept { return omp_get_max_threads(); }

} // namespace simiter::kernels
