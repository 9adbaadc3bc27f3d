#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

#include "cartan/errors.hpp"

namespace cartan {

namespace detail {

using i128 = __int128;

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw ArithmeticOverflow("rational component exceeds int64 range");
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// Exact rational number p/q, always stored in lowest terms with q > 0.
///
/// Components are int64; every operation either returns the exact result or
/// throws ArithmeticOverflow. Integer operands (q == 1) take a fast path.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  Rational operator-() const {
    if (num_ == std::numeric_limits<std::int64_t>::min())
      throw ArithmeticOverflow("negation overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (__builtin_add_overflow(a.num_, b.num_, &s))
        throw ArithmeticOverflow("addition overflow");
      return Rational(s);
    }
    using detail::i128;
    i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    return from128(n, d);
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (__builtin_sub_overflow(a.num_, b.num_, &s))
        throw ArithmeticOverflow("subtraction overflow");
      return Rational(s);
    }
    using detail::i128;
    i128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    return from128(n, d);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t p;
      if (__builtin_mul_overflow(a.num_, b.num_, &p))
        throw ArithmeticOverflow("multiplication overflow");
      return Rational(p);
    }
    using detail::i128;
    return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw PreconditionError("division by zero");
    using detail::i128;
    return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    using detail::i128;
    i128 l = i128(a.num_) * b.den_;
    i128 r = i128(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    auto parse_int = [](std::string_view s) -> std::int64_t {
      if (s.empty()) throw ParseError("empty integer in rational");
      std::size_t i = 0;
      bool neg = false;
      if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
      }
      if (i == s.size()) throw ParseError("malformed integer '" + std::string(s) + "'");
      detail::i128 v = 0;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
          throw ParseError("malformed integer '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > detail::i128(std::numeric_limits<std::int64_t>::max()) + 1)
          throw ParseError("integer out of range '" + std::string(s) + "'");
      }
      if (neg) v = -v;
      try {
        return detail::narrow(v);
      } catch (const ArithmeticOverflow&) {
        throw ParseError("integer out of range '" + std::string(s) + "'");
      }
    };
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    std::int64_t d = parse_int(trim(text.substr(slash + 1)));
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(trim(text.substr(0, slash))), d);
  }

 private:
  static Rational from128(detail::i128 n, detail::i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return Rational();
    detail::i128 g = detail::gcd128(n, d);
    Rational r;
    r.num_ = detail::narrow(n / g);
    r.den_ = detail::narrow(d / g);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw PreconditionError("zero denominator");
    *this = from128(n, d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace cartan
