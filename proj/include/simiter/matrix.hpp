#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace simiter {

/// Dense row-major matrix of doubles.
///
/// Zero-sized dimensions are allowed so that an empty basis (n x 0) or an
/// empty trailing block (0 x k) is representable. Entries supplied through
/// the checked constructors must be finite.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// n x m matrix with d on its leading diagonal.
  static Matrix diagonal(std::span<const double> d, std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const;

  /// Rows [first, first + count) as a new matrix.
  Matrix row_block(std::size_t first, std::size_t count) const;
  /// Columns [first, first + count) as a new matrix.
  Matrix col_block(std::size_t first, std::size_t count) const;

  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;
  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double alpha, const Matrix& a);

/// Largest absolute entrywise difference; shapes must match.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Stacks `top` over `bottom` (equal column counts).
Matrix vstack(const Matrix& top, const Matrix& bottom);

} // namespace simiter
