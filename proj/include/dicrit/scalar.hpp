#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace dicrit {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Exact square root of a nonnegative rational, if it is one.
std::optional<Rational> rational_sqrt(const Rational& q);

double to_double(const Rational& q);
std::string rational_str(const Rational& q);

/// A coefficient: either an exact complex rational or a complex double.
/// Exact arithmetic is closed; mixing exact and float yields float.
class Scalar {
 public:
  Scalar() : exact_(true), re_(0), im_(0) {}
  Scalar(int v) : exact_(true), re_(v), im_(0) {}
  Scalar(const Rational& re) : exact_(true), re_(re), im_(0) {}
  Scalar(const Rational& re, const Rational& im) : exact_(true), re_(re), im_(im) {}
  explicit Scalar(std::complex<double> v) : exact_(false), f_(v) {}
  explicit Scalar(double v) : exact_(false), f_(v) {}

  static Scalar imaginary() { return Scalar(Rational(0), Rational(1)); }

  bool is_exact() const { return exact_; }
  bool is_zero() const {
    return exact_ ? (re_ == 0 && im_ == 0) : (f_ == std::complex<double>(0.0, 0.0));
  }
  bool is_one() const { return exact_ ? (re_ == 1 && im_ == 0) : (f_ == std::complex<double>(1.0, 0.0)); }

  const Rational& re() const { require_exact(); return re_; }
  const Rational& im() const { require_exact(); return im_; }

  /// True when exact with zero imaginary part.
  bool is_rational() const { return exact_ && im_ == 0; }
  const Rational& rational() const {
    if (!is_rational()) throw Error("scalar is not a real rational");
    return re_;
  }

  std::complex<double> to_complex() const {
    return exact_ ? std::complex<double>(to_double(re_), to_double(im_)) : f_;
  }
  Scalar to_float() const { return Scalar(to_complex()); }

  Scalar operator-() const;
  Scalar conj() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  Scalar pow(long e) const;
  /// Square root; exact when the value is a rational square (or i * square).
  Scalar sqrt() const;

  /// Exact equality for exact pairs, bitwise double equality otherwise.
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  double abs() const { return std::abs(to_complex()); }

  std::string str() const;

 private:
  void require_exact() const {
    if (!exact_) throw Error("scalar is not exact");
  }
  bool exact_;
  Rational re_, im_;
  std::complex<double> f_{};
};

inline Scalar operator*(int a, const Scalar& b) { return Scalar(a) * b; }

}  // namespace dicrit
