#pragma once

#include <string>

#include "cartan/rational.hpp"

namespace cartan {

/// Gaussian rational re + im·i. This is the coefficient field of every
/// computation in the library; there is no floating point anywhere.
class Scalar {
 public:
  constexpr Scalar() = default;
  constexpr Scalar(std::int64_t n) : re_(n) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re) : re_(re) {}              // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im) : re_(re), im_(im) {}

  static Scalar frac(std::int64_t p, std::int64_t q) { return Scalar(Rational(p, q)); }
  static Scalar i() { return Scalar(Rational(0), Rational(1)); }

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }
  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const noexcept { return im_.is_zero(); }
  bool is_one() const noexcept { return im_.is_zero() && re_.num() == 1 && re_.den() == 1; }

  Scalar conj() const { return Scalar(re_, -im_); }

  Scalar operator-() const { return Scalar(-re_, -im_); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.im_.is_zero() && b.im_.is_zero()) return Scalar(a.re_ + b.re_);
    return Scalar(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.im_.is_zero() && b.im_.is_zero()) return Scalar(a.re_ - b.re_);
    return Scalar(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.im_.is_zero() && b.im_.is_zero()) return Scalar(a.re_ * b.re_);
    return Scalar(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw PreconditionError("division by zero");
    if (b.im_.is_zero()) return Scalar(a.re_ / b.re_, a.im_ / b.re_);
    Rational norm = b.re_ * b.re_ + b.im_ * b.im_;
    Scalar num = a * b.conj();
    return Scalar(num.re_ / norm, num.im_ / norm);
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend bool operator==(const Scalar&, const Scalar&) = default;

  /// Human-readable form: "3", "1/2", "1/2+3i", "-i".
  std::string to_string() const {
    if (im_.is_zero()) return re_.to_string();
    std::string im_part;
    if (im_ == Rational(1))
      im_part = "i";
    else if (im_ == Rational(-1))
      im_part = "-i";
    else
      im_part = im_.to_string() + "i";
    if (re_.is_zero()) return im_part;
    if (im_part.front() == '-') return re_.to_string() + im_part;
    return re_.to_string() + "+" + im_part;
  }

 private:
  Rational re_;
  Rational im_;
};

}  // namespace cartan
