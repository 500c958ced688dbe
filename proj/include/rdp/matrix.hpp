#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdp/integer.hpp"
#include "rdp/rational.hpp"

namespace rdp {

// Dense row-major matrix. Vectors are rows; an isometry g acts by x -> x * g.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t r, size_t c) : rows_(r), cols_(c), data_(r * c, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void set_row(size_t i, const std::vector<T>& v) {
    assert(v.size() == cols_);
    for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }
  void append_row(const std::vector<T>& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }
  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix submatrix(const std::vector<size_t>& rs, const std::vector<size_t>& cs) const {
    Matrix m(rs.size(), cs.size());
    for (size_t i = 0; i < rs.size(); ++i)
      for (size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
    return m;
  }

  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          const T& bkj = b(k, j);
          if (bkj == T(0)) continue;
          c(i, j) += aik * bkj;
        }
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape");
    for (size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix diff: shape");
    for (size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  Matrix scaled(const T& s) const {
    Matrix m = *this;
    for (auto& v : m.data_) v *= s;
    return m;
  }

  size_t hash() const {
    size_t h = rows_ * 131 + cols_;
    for (const auto& v : data_) h = h * 1000003u ^ std::hash<T>()(v);
    return h;
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

template <class T>
std::vector<T> operator*(const std::vector<T>& x, const Matrix<T>& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("vector-matrix product: shape mismatch");
  std::vector<T> y(m.cols(), T(0));
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == T(0)) continue;
    for (size_t j = 0; j < m.cols(); ++j) y[j] += x[i] * m(i, j);
  }
  return y;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatMatrix to_rational(const IntMatrix& m);
RatVector to_rational(const IntVector& v);
// Throws unless every entry is integral.
IntMatrix to_integer(const RatMatrix& m);
IntVector to_integer(const RatVector& v);
bool is_integral(const RatMatrix& m);
bool is_integral(const RatVector& v);

// Inverse over Q by Gauss-Jordan elimination; throws if singular.
RatMatrix inverse(const RatMatrix& m);
Rational determinant(const RatMatrix& m);
Integer determinant(const IntMatrix& m);
size_t rank(const RatMatrix& m);
// Inverse of a unimodular integer matrix.
IntMatrix inverse_unimodular(const IntMatrix& m);

IntMatrix int_matrix(const std::vector<std::vector<long long>>& rows);
IntVector int_vector(const std::vector<long long>& v);
std::string to_string(const IntMatrix& m);
std::string to_string(const IntVector& v);
std::string to_string(const RatVector& v);

}  // namespace rdp

template <class T>
struct std::hash<rdp::Matrix<T>> {
  size_t operator()(const rdp::Matrix<T>& m) const { return m.hash(); }
};
