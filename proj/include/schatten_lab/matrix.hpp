#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schatten_lab/error.hpp"

namespace schatten_lab {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Every entry is finite.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1, 1) {}

  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
      throw LabError(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    }
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
      throw LabError(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
      throw LabError(ErrorCode::DimensionMismatch,
                     "entry count " + std::to_string(data_.size()) + " != rows*cols");
    }
    for (const Complex& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw LabError(ErrorCode::NotFinite, "matrix entry is NaN or Inf");
      }
    }
  }

  /// Nested-list literal, e.g. ComplexMatrix{{0, 1}, {1, 0}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) {
      throw LabError(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw LabError(ErrorCode::DimensionMismatch, "ragged matrix literal");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  Complex trace() const {
    require_square("trace");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  /// Diagonal part, off-diagonal entries zeroed.
  ComplexMatrix diagonal_part() const {
    require_square("diagonal_part");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out(i, i) = (*this)(i, i);
    return out;
  }

  ComplexMatrix block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const {
    if (row0 + rows > rows_ || col0 + cols > cols_) {
      throw LabError(ErrorCode::DimensionMismatch, "block out of range");
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) out(r, c) = (*this)(row0 + r, col0 + c);
    return out;
  }

  void set_block(std::size_t row0, std::size_t col0, const ComplexMatrix& b) {
    if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) {
      throw LabError(ErrorCode::DimensionMismatch, "block out of range");
    }
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) (*this)(row0 + r, col0 + c) = b(r, c);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex(s); }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s); }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= Complex(-1.0); }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw LabError(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0)) continue;
        const Complex* brow = &b.data_[k * b.cols_];
        Complex* orow = &out.data_[i * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
      }
    }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_square(const char* what) const {
    if (!is_square()) throw LabError(ErrorCode::DimensionMismatch, std::string(what) + " needs a square matrix");
  }
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw LabError(ErrorCode::DimensionMismatch, std::string("shape mismatch in ") + op);
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

/// A* A without forming the adjoint.
inline ComplexMatrix gram(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += std::conj(a(k, i)) * a(k, j);
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
  return out;
}

/// Tr(AB) without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw LabError(ErrorCode::DimensionMismatch, "trace_of_product shape mismatch");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw LabError(ErrorCode::DimensionMismatch, "max_abs_diff shape mismatch");
  }
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

}  // namespace schatten_lab
