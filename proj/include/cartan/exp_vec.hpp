#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

/// Largest torus rank supported by the fixed-capacity exponent vector.
inline constexpr int kMaxN = 8;

/// Integer exponent vector r ∈ ℤ^N, stored inline.
class ExpVec {
 public:
  ExpVec() = default;
  explicit ExpVec(int n) : n_(check_n(n)) {}
  ExpVec(std::initializer_list<int> v) : n_(check_n(static_cast<int>(v.size()))) {
    std::copy(v.begin(), v.end(), e_.begin());
  }
  explicit ExpVec(const std::vector<int>& v) : n_(check_n(static_cast<int>(v.size()))) {
    std::copy(v.begin(), v.end(), e_.begin());
  }

  static ExpVec zero(int n) { return ExpVec(n); }
  static ExpVec unit(int n, int i) {
    ExpVec r(n);
    r[i] = 1;
    return r;
  }

  int size() const noexcept { return n_; }
  std::int32_t operator[](int i) const noexcept { return e_[i]; }
  std::int32_t& operator[](int i) noexcept { return e_[i]; }

  bool is_zero() const noexcept {
    for (int i = 0; i < n_; ++i)
      if (e_[i] != 0) return false;
    return true;
  }

  /// max_i |r_i|
  int norm_inf() const noexcept {
    int m = 0;
    for (int i = 0; i < n_; ++i) m = std::max(m, e_[i] < 0 ? -e_[i] : e_[i]);
    return m;
  }

  friend ExpVec operator+(const ExpVec& a, const ExpVec& b) {
    same_length(a, b);
    ExpVec r(a.n_);
    for (int i = 0; i < a.n_; ++i) r.e_[i] = a.e_[i] + b.e_[i];
    return r;
  }
  friend ExpVec operator-(const ExpVec& a, const ExpVec& b) {
    same_length(a, b);
    ExpVec r(a.n_);
    for (int i = 0; i < a.n_; ++i) r.e_[i] = a.e_[i] - b.e_[i];
    return r;
  }
  ExpVec operator-() const {
    ExpVec r(n_);
    for (int i = 0; i < n_; ++i) r.e_[i] = -e_[i];
    return r;
  }

  friend bool operator==(const ExpVec& a, const ExpVec& b) noexcept {
    if (a.n_ != b.n_) return false;
    for (int i = 0; i < a.n_; ++i)
      if (a.e_[i] != b.e_[i]) return false;
    return true;
  }
  /// Lexicographic on entries (shorter vectors first).
  friend std::strong_ordering operator<=>(const ExpVec& a, const ExpVec& b) noexcept {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    for (int i = 0; i < a.n_; ++i)
      if (a.e_[i] != b.e_[i]) return a.e_[i] <=> b.e_[i];
    return std::strong_ordering::equal;
  }

  std::vector<int> to_vector() const { return {e_.begin(), e_.begin() + n_}; }

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < n_; ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }

  static void same_length(const ExpVec& a, const ExpVec& b) {
    if (a.n_ != b.n_)
      throw LengthMismatch("exponent vectors of length " + std::to_string(a.n_) + " and " +
                           std::to_string(b.n_));
  }

 private:
  static std::uint8_t check_n(int n) {
    if (n < 0 || n > kMaxN)
      throw PreconditionError("exponent vector length " + std::to_string(n) +
                              " outside [0," + std::to_string(kMaxN) + "]");
    return static_cast<std::uint8_t>(n);
  }

  std::array<std::int32_t, kMaxN> e_{};
  std::uint8_t n_ = 0;
};

/// Complex coefficient vector u ∈ ℂ^N.
class CoefVec {
 public:
  CoefVec() = default;
  explicit CoefVec(int n) : v_(static_cast<std::size_t>(n)) {}
  CoefVec(std::initializer_list<Scalar> v) : v_(v) {}
  explicit CoefVec(std::vector<Scalar> v) : v_(std::move(v)) {}
  explicit CoefVec(const ExpVec& r) : v_(static_cast<std::size_t>(r.size())) {
    for (int i = 0; i < r.size(); ++i) v_[i] = Scalar(r[i]);
  }

  static CoefVec unit(int n, int i) {
    CoefVec u(n);
    u[i] = Scalar(1);
    return u;
  }

  int size() const noexcept { return static_cast<int>(v_.size()); }
  const Scalar& operator[](int i) const { return v_[i]; }
  Scalar& operator[](int i) { return v_[i]; }
  const std::vector<Scalar>& entries() const noexcept { return v_; }

  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](const Scalar& s) { return s.is_zero(); });
  }

  friend CoefVec operator+(const CoefVec& a, const CoefVec& b) {
    check(a, b);
    CoefVec r(a.size());
    for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
  }
  friend CoefVec operator-(const CoefVec& a, const CoefVec& b) {
    check(a, b);
    CoefVec r(a.size());
    for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
  }
  friend CoefVec operator*(const Scalar& k, const CoefVec& a) {
    CoefVec r(a.size());
    for (int i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
  }

  friend bool operator==(const CoefVec&, const CoefVec&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += v_[i].to_string();
    }
    return s + ")";
  }

 private:
  static void check(const CoefVec& a, const CoefVec& b) {
    if (a.size() != b.size()) throw LengthMismatch("coefficient vectors differ in length");
  }

  std::vector<Scalar> v_;
};

/// (u|r) = Σ u_i r_i
inline Scalar pair(const CoefVec& u, const ExpVec& r) {
  if (u.size() != r.size())
    throw LengthMismatch("pair: lengths " + std::to_string(u.size()) + " and " +
                         std::to_string(r.size()));
  Scalar s;
  for (int i = 0; i < r.size(); ++i)
    if (r[i] != 0 && !u[i].is_zero()) s += u[i] * Scalar(r[i]);
  return s;
}

/// Integer dot product, used where both sides are exponent vectors.
inline std::int64_t pair(const ExpVec& u, const ExpVec& r) {
  ExpVec::same_length(u, r);
  std::int64_t s = 0;
  for (int i = 0; i < r.size(); ++i) s += std::int64_t(u[i]) * r[i];
  return s;
}

/// r̄ = (r_{m+1},…,r_{2m}, −r_1,…,−r_m) for N = 2m.
inline ExpVec bar(const ExpVec& r) {
  if (r.size() % 2 != 0)
    throw PreconditionError("bar requires even N, got " + std::to_string(r.size()));
  int m = r.size() / 2;
  ExpVec out(r.size());
  for (int i = 0; i < m; ++i) {
    out[i] = r[m + i];
    out[m + i] = -r[i];
  }
  return out;
}

/// Degree box [−K,K]^N.
class Window {
 public:
  Window(int n, int k) : n_(n), k_(k) {
    if (k < 1) throw PreconditionError("window K must be >= 1");
    if (n < 1 || n > kMaxN) throw PreconditionError("window N out of range");
  }

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

  bool contains(const ExpVec& r) const noexcept {
    return r.size() == n_ && r.norm_inf() <= k_;
  }

  /// (2K+1)^N
  std::size_t size() const noexcept {
    std::size_t s = 1;
    for (int i = 0; i < n_; ++i) s *= static_cast<std::size_t>(2 * k_ + 1);
    return s;
  }

  /// All degrees in lexicographic order.
  std::vector<ExpVec> degrees() const { return box(n_, k_); }

  /// Every r with |r_i| <= k, lexicographic.
  static std::vector<ExpVec> box(int n, int k) {
    std::vector<ExpVec> out;
    ExpVec r(n);
    for (int i = 0; i < n; ++i) r[i] = -k;
    while (true) {
      out.push_back(r);
      int i = n - 1;
      while (i >= 0 && r[i] == k) {
        r[i] = -k;
        --i;
      }
      if (i < 0) break;
      ++r[i];
    }
    return out;
  }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  int n_;
  int k_;
};

}  // namespace cartan
