#pragma once

#include <span>

#include "simiter/matrix.hpp"

// Inner-loop kernels in two flavours: a serial reference and an OpenMP
// version that splits output rows across threads. Both evaluate every output
// entry with the same sequence of floating-point operations, so their results
// are bit-identical for a fixed input.
namespace simiter::kernels {

namespace serial {
/// out = a * b. `out` must already be a.rows() x b.cols().
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
/// out = a^T * b. `out` must already be a.cols() x b.cols().
void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out);
/// y = a * x
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
/// y = a^T * x
void matvec_t(const Matrix& a, std::span<const double> x, std::span<double> y);
} // namespace serial

namespace parallel {
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out);
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
void matvec_t(const Matrix& a, std::span<const double> x, std::span<double> y);
} // namespace parallel

/// Work size (multiply-adds) below which the dispatching front-ends stay serial.
inline constexpr double kParallelThreshold = 1 << 16;

/// True when called from inside an active OpenMP parallel region.
bool in_parallel_region() noexcept;

/// Number of threads a parallel kernel would use.
int max_threads() noexcept;

} // namespace simiter::kernels
