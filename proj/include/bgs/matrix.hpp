#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bgs {

/// Dense real matrix, column-major. Every kernel in this library consumes
/// column panels, so a column is always a contiguous span.
class Matrix {
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0)
  {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("Matrix: dimensions must be positive, got " + shape_string(rows, cols));
    }
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
      : rows_(rows), cols_(cols), data_(std::move(column_major))
  {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("Matrix: dimensions must be positive, got " + shape_string(rows, cols));
    }
    if (data_.size() != rows * cols) {
      throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) + " does not match " +
                                  shape_string(rows, cols));
    }
  }

  /// Row-major literal, for tests and small examples.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows)
  {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.begin()->size();
    Matrix a(m, n);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != n) throw std::invalid_argument("Matrix::from_rows: ragged rows");
      std::size_t j = 0;
      for (double v : row) a(i, j++) = v;
      ++i;
    }
    return a;
  }

  static Matrix identity(std::size_t n) { return identity(n, n); }

  /// First `cols` columns of I_rows.
  static Matrix identity(std::size_t rows, std::size_t cols)
  {
    Matrix a(rows, cols);
    for (std::size_t j = 0; j < std::min(rows, cols); ++j) a(j, j) = 1.0;
    return a;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Copy of columns [first, first + count).
  Matrix cols_range(std::size_t first, std::size_t count) const
  {
    if (first + count > cols_ || count == 0) {
      throw std::out_of_range("Matrix::cols_range: columns [" + std::to_string(first) + ", " +
                              std::to_string(first + count) + ") of " + shape_string(rows_, cols_));
    }
    Matrix out(rows_, count);
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * rows_),
              data_.begin() + static_cast<std::ptrdiff_t>((first + count) * rows_), out.data_.begin());
    return out;
  }

  /// Copy of the leading rows x cols submatrix.
  Matrix leading(std::size_t rows, std::size_t cols) const
  {
    if (rows > rows_ || cols > cols_) {
      throw std::out_of_range("Matrix::leading: " + shape_string(rows, cols) + " exceeds " + shape_string(rows_, cols_));
    }
    Matrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) out(i, j) = (*this)(i, j);
    return out;
  }

  /// Writes `block` with its top-left corner at (row, col).
  void assign_block(std::size_t row, std::size_t col, const Matrix& block)
  {
    if (row + block.rows_ > rows_ || col + block.cols_ > cols_) {
      throw std::out_of_range("Matrix::assign_block: " + shape_string(block.rows_, block.cols_) + " at (" +
                              std::to_string(row) + ", " + std::to_string(col) + ") overflows " +
                              shape_string(rows_, cols_));
    }
    for (std::size_t j = 0; j < block.cols_; ++j)
      for (std::size_t i = 0; i < block.rows_; ++i) (*this)(row + i, col + j) = block(i, j);
  }

  bool all_finite() const noexcept
  {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  static std::string shape_string(std::size_t rows, std::size_t cols)
  {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }
  std::string shape() const { return shape_string(rows_, cols_); }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Compact scientific rendering for error messages.
inline std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

/// Throws if any entry is NaN or Inf. Applied at the ingestion boundary
/// (generators, file readers).
inline void require_finite(const Matrix& a, const std::string& origin)
{
  if (!a.all_finite()) throw std::invalid_argument(origin + ": matrix contains non-finite entries");
}

/// Column widths (p_1, ..., p_s) of a block partition.
class BlockPartition {
public:
  explicit BlockPartition(std::vector<std::size_t> widths) : widths_(std::move(widths))
  {
    if (widths_.empty()) throw std::invalid_argument("BlockPartition: at least one block is required");
    for (std::size_t w : widths_)
      if (w == 0) throw std::invalid_argument("BlockPartition: block widths must be positive");
  }

  /// Blocks of width p, the last one possibly narrower.
  static BlockPartition uniform(std::size_t n, std::size_t p)
  {
    if (n == 0 || p == 0) throw std::invalid_argument("BlockPartition::uniform: n and p must be positive");
    std::vector<std::size_t> widths;
    for (std::size_t done = 0; done < n; done += p) widths.push_back(std::min(p, n - done));
    return BlockPartition(std::move(widths));
  }

  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::size_t blocks() const noexcept { return widths_.size(); }
  std::size_t width(std::size_t k) const { return widths_.at(k); }
  std::size_t total() const noexcept { return std::accumulate(widths_.begin(), widths_.end(), std::size_t{0}); }
  std::size_t max_width() const noexcept
  {
    std::size_t p = 0;
    for (std::size_t w : widths_) p = std::max(p, w);
    return p;
  }

  /// Column offset of block k (the sum of the widths before it).
  std::size_t offset(std::size_t k) const
  {
    std::size_t t = 0;
    for (std::size_t i = 0; i < k; ++i) t += widths_.at(i);
    return t;
  }

  void require_sums_to(std::size_t n) const
  {
    if (total() != n) {
      throw std::invalid_argument("BlockPartition: widths sum to " + std::to_string(total()) + " but the matrix has " +
                                  std::to_string(n) + " columns");
    }
  }

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

private:
  std::vector<std::size_t> widths_;
};

/// A = Q R with Q m x n and R n x n upper triangular. Entries below the
/// diagonal of R are zeroed on construction.
class QRFactorization {
public:
  QRFactorization(Matrix q, Matrix r) : q_(std::move(q)), r_(std::move(r))
  {
    if (r_.rows() != r_.cols()) throw std::invalid_argument("QRFactorization: R must be square, got " + r_.shape());
    if (q_.cols() != r_.cols()) {
      throw std::invalid_argument("QRFactorization: Q is " + q_.shape() + " but R is " + r_.shape());
    }
    for (std::size_t j = 0; j < r_.cols(); ++j)
      for (std::size_t i = j + 1; i < r_.rows(); ++i) r_(i, j) = 0.0;
  }

  const Matrix& q() const noexcept { return q_; }
  const Matrix& r() const noexcept { return r_; }

private:
  Matrix q_;
  Matrix r_;
};

namespace detail {

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what)
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.shape() + " vs " + b.shape());
  }
}

} // namespace detail

/// c = a b. Each entry accumulates its products in ascending inner index,
/// so the result is reproducible bit for bit.
inline Matrix matmul(const Matrix& a, const Matrix& b)
{
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch " + a.shape() + " * " + b.shape());
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      const auto ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

/// Ascending-order dot product.
inline double dot(std::span<const double> x, std::span<const double> y) noexcept
{
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) noexcept { return std::sqrt(dot(x, x)); }

/// c = a^T b, entry (i, j) being the ascending dot of columns a_i and b_j.
inline Matrix matmul_tn(const Matrix& a, const Matrix& b)
{
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("matmul_tn: dimension mismatch " + a.shape() + "^T * " + b.shape());
  }
  Matrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

inline Matrix transpose(const Matrix& a)
{
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

inline Matrix operator-(const Matrix& a, const Matrix& b)
{
  detail::require_same_shape(a, b, "operator-");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

inline Matrix operator+(const Matrix& a, const Matrix& b)
{
  detail::require_same_shape(a, b, "operator+");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
  return c;
}

inline Matrix operator*(double s, const Matrix& a)
{
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

/// Horizontal concatenation [a, b].
inline Matrix hcat(const Matrix& a, const Matrix& b)
{
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch " + a.shape() + " vs " + b.shape());
  Matrix c(a.rows(), a.cols() + b.cols());
  c.assign_block(0, 0, a);
  c.assign_block(0, a.cols(), b);
  return c;
}

inline bool is_upper_triangular(const Matrix& r) noexcept
{
  for (std::size_t j = 0; j < r.cols(); ++j)
    for (std::size_t i = j + 1; i < r.rows(); ++i)
      if (r(i, j) != 0.0) return false;
  return true;
}

/// Inverse of a square upper-triangular matrix by back substitution against
/// the identity. A zero diagonal yields infinities, not an exception.
inline Matrix invert_upper_triangular(const Matrix& r)
{
  if (r.rows() != r.cols()) throw std::invalid_argument("invert_upper_triangular: R is " + r.shape());
  const std::size_t n = r.rows();
  Matrix x(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto xj = x.col(j);
    xj[j] = 1.0 / r(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = 0.0;
      for (std::size_t k = ii + 1; k <= j; ++k) s += r(ii, k) * xj[k];
      xj[ii] = -s / r(ii, ii);
    }
  }
  return x;
}

} // namespace bgs
