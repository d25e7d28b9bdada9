#include "simiter/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "simiter/errors.hpp"

namespace simiter {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ContractError("Matrix: data length " + std::to_string(data_.size()) +
                        " does not match shape " + shape_string());
  }
  if (!all_finite()) {
    throw ContractError("Matrix: non-finite entry in " + shape_string() + " input");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ContractError("Matrix: ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) throw ContractError("Matrix: non-finite entry in initializer list");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  return diagonal(d, d.size(), d.size());
}

Matrix Matrix::diagonal(std::span<const double> d, std::size_t rows, std::size_t cols) {
  if (d.size() > std::min(rows, cols)) {
    throw ContractError("Matrix::diagonal: " + std::to_string(d.size()) +
                        " entries do not fit a " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " matrix");
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  if (!m.all_finite()) throw ContractError("Matrix::diagonal: non-finite entry");
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) {
    throw ContractError("row_block: rows [" + std::to_string(first) + ", " +
                        std::to_string(first + count) + ") out of range for " + shape_string());
  }
  Matrix out(count, cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_), count * cols_,
              out.data_.begin());
  return out;
}

Matrix Matrix::col_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) {
    throw ContractError("col_block: cols [" + std::to_string(first) + ", " +
                        std::to_string(first + count) + ") out of range for " + shape_string());
  }
  Matrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

double Matrix::frobenius_norm() const noexcept {
  // scaled accumulation so that huge iterates do not overflow the sum of squares
  double scale = 0.0;
  for (double x : data_) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double ss = 0.0;
  for (double x : data_) {
    const double y = x / scale;
    ss += y * y;
  }
  return scale * std::sqrt(ss);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                        b.shape_string());
  }
}

} // namespace

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator-");
  Matrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator+");
  Matrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
  return out;
}

Matrix operator*(double alpha, const Matrix& a) {
  Matrix out = a;
  for (double& x : out.data()) x *= alpha;
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) worst = std::max(worst, std::abs(ad[i] - bd[i]));
  return worst;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) {
    throw ContractError("vstack: column mismatch " + top.shape_string() + " over " +
                        bottom.shape_string());
  }
  Matrix out(top.rows() + bottom.rows(), top.cols());
  std::copy(top.data().begin(), top.data().end(), out.data().begin());
  std::copy(bottom.data().begin(), bottom.data().end(),
            out.data().begin() + static_cast<std::ptrdiff_t>(top.size()));
  return out;
}

} // namespace simiter
