#include "dicrit/scalar.hpp"

#include <sstream>

namespace dicrit {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return Rational(0);
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  Integer sn = boost::multiprecision::sqrt(num);
  Integer sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

Scalar Scalar::operator-() const {
  if (exact_) return Scalar(-re_, -im_);
  return Scalar(-f_);
}

Scalar Scalar::conj() const {
  if (exact_) return Scalar(re_, -im_);
  return Scalar(std::conj(f_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar(a.re_ + b.re_, a.im_ + b.im_);
  return Scalar(a.to_complex() + b.to_complex());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar(a.re_ - b.re_, a.im_ - b.im_);
  return Scalar(a.to_complex() - b.to_complex());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_)
    return Scalar(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  return Scalar(a.to_complex() * b.to_complex());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    Rational n = b.re_ * b.re_ + b.im_ * b.im_;
    if (n == 0) throw Error("division by exact zero");
    return Scalar((a.re_ * b.re_ + a.im_ * b.im_) / n,
                  (a.im_ * b.re_ - a.re_ * b.im_) / n);
  }
  std::complex<double> bv = b.to_complex();
  if (bv == std::complex<double>(0.0, 0.0)) throw Error("division by zero");
  return Scalar(a.to_complex() / bv);
}

Scalar Scalar::pow(long e) const {
  if (e == 0) return Scalar(1);
  if (e < 0) return Scalar(1) / pow(-e);
  Scalar acc(1);
  Scalar base = *this;
  long k = e;
  while (k > 0) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

Scalar Scalar::sqrt() const {
  if (exact_) {
    if (im_ == 0) {
      if (re_ >= 0) {
        if (auto r = rational_sqrt(re_)) return Scalar(*r);
      } else {
        if (auto r = rational_sqrt(-re_)) return Scalar(Rational(0), *r);
      }
    }
    return Scalar(std::sqrt(to_complex()));
  }
  return Scalar(std::sqrt(f_));
}

bool Scalar::operator==(const Scalar& o) const {
  if (exact_ && o.exact_) return re_ == o.re_ && im_ == o.im_;
  return to_complex() == o.to_complex();
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (exact_) {
    if (im_ == 0) {
      os << re_;
    } else if (re_ == 0) {
      if (im_ == 1) os << "i";
      else if (im_ == -1) os << "-i";
      else os << im_ << "*i";
    } else {
      os << "(" << re_;
      if (im_ > 0) os << "+";
      if (im_ == 1) os << "i";
      else if (im_ == -1) os << "-i";
      else os << im_ << "*i";
      os << ")";
    }
  } else {
    char buf[64];
    if (f_.imag() == 0.0) {
      snprintf(buf, sizeof buf, "%.17g", f_.real());
      os << buf;
    } else {
      snprintf(buf, sizeof buf, "(%.17g%+.17g*i)", f_.real(), f_.imag());
      os << buf;
    }
  }
  return os.str();
}

}  // namespace dicrit
