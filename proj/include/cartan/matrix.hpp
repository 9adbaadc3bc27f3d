#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

/// Dense row-major matrix over Scalar.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw PreconditionError("negative matrix dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }
  static Matrix scalar(int n, const Scalar& s) {
    Matrix m(n, n);
    if (!s.is_zero())
      for (int i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }
  /// Elementary matrix unit with a single 1 at (i, j).
  static Matrix unit(int n, int i, int j) {
    Matrix m(n, n);
    m(i, j) = Scalar(1);
    return m;
  }

  int rows() const noexcept { return r_; }
  int cols() const noexcept { return c_; }

  const Scalar& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  Scalar& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  bool is_zero() const {
    for (const auto& s : a_)
      if (!s.is_zero()) return false;
    return true;
  }

  /// True when the matrix is s·I for some s; the scalar is written to *s.
  bool is_scalar_identity(Scalar* s = nullptr) const {
    if (r_ != c_) return false;
    Scalar d = r_ > 0 ? (*this)(0, 0) : Scalar();
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) {
        const Scalar& x = (*this)(i, j);
        if (i == j ? !(x == d) : !x.is_zero()) return false;
      }
    if (s) *s = d;
    return true;
  }

  Scalar trace() const {
    Scalar t;
    for (int i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    same_shape(a, b);
    Matrix m(a.r_, a.c_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = a.a_[k] + b.a_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    same_shape(a, b);
    Matrix m(a.r_, a.c_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = a.a_[k] - b.a_[k];
    return m;
  }
  friend Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix m(a.r_, a.c_);
    if (s.is_zero()) return m;
    for (std::size_t k = 0; k < a.a_.size(); ++k)
      if (!a.a_[k].is_zero()) m.a_[k] = s * a.a_[k];
    return m;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw LengthMismatch("matrix product shape mismatch");
    Matrix m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const Scalar& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.c_; ++j)
          if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
      }
    return m;
  }
  Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
  Matrix& operator-=(const Matrix& o) { return *this = *this - o; }

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
    if (static_cast<int>(v.size()) != c_) throw LengthMismatch("matrix-vector shape mismatch");
    std::vector<Scalar> out(static_cast<std::size_t>(r_));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  /// Exact rank by Gaussian elimination.
  int rank() const {
    Matrix m = *this;
    int rank = 0;
    for (int col = 0; col < c_ && rank < r_; ++col) {
      int piv = -1;
      for (int i = rank; i < r_; ++i)
        if (!m(i, col).is_zero()) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      if (piv != rank)
        for (int j = 0; j < c_; ++j) std::swap(m(piv, j), m(rank, j));
      Scalar inv = Scalar(1) / m(rank, col);
      for (int i = rank + 1; i < r_; ++i) {
        if (m(i, col).is_zero()) continue;
        Scalar f = m(i, col) * inv;
        for (int j = col; j < c_; ++j)
          if (!m(rank, j).is_zero()) m(i, j) -= f * m(rank, j);
      }
      ++rank;
    }
    return rank;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < r_; ++i) {
      if (i) s += ",";
      s += "[";
      for (int j = 0; j < c_; ++j) {
        if (j) s += ",";
        s += (*this)(i, j).to_string();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  static void same_shape(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw LengthMismatch("matrix shape mismatch");
  }

  int r_ = 0;
  int c_ = 0;
  std::vector<Scalar> a_;
};

}  // namespace cartan
