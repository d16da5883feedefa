#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dicrit/scalar.hpp"

namespace dicrit {

constexpr int kMaxVars = 4;
constexpr int kInfOrder = 1 << 28;  // exact polynomial, no truncation

/// Ordered set of variable names.
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<std::string> names) : names_(names) { check(); }
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) { check(); }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[static_cast<size_t>(i)]; }
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& v) const;      // -1 when absent
  int index_checked(const std::string& v) const;
  bool contains(const std::string& v) const { return index(v) >= 0; }

  bool operator==(const VarSet& o) const { return names_ == o.names_; }
  bool operator!=(const VarSet& o) const { return !(*this == o); }

 private:
  void check() const;
  std::vector<std::string> names_;
};

/// Exponent tuple; entries beyond the var count stay zero.
struct Expo {
  std::array<int16_t, kMaxVars> e{0, 0, 0, 0};

  int16_t operator[](int i) const { return e[static_cast<size_t>(i)]; }
  int16_t& operator[](int i) { return e[static_cast<size_t>(i)]; }
  int total() const { return e[0] + e[1] + e[2] + e[3]; }
  bool operator<(const Expo& o) const { return e < o.e; }
  bool operator==(const Expo& o) const { return e == o.e; }
};

Expo unit_expo(int i, int power = 1);

/// Sparse multivariate power series truncated at total degree `order`.
/// Terms of degree > order are unknown; order == kInfOrder marks an exact
/// polynomial. No stored coefficient is zero.
class TruncSeries {
 public:
  TruncSeries() = default;
  TruncSeries(VarSet vars, int order) : vars_(std::move(vars)), order_(order) {}

  static TruncSeries zero(const VarSet& vars, int order = kInfOrder);
  static TruncSeries constant(const VarSet& vars, const Scalar& c, int order = kInfOrder);
  static TruncSeries monomial(const VarSet& vars, const Expo& e, const Scalar& c,
                              int order = kInfOrder);
  static TruncSeries variable(const VarSet& vars, int i, int order = kInfOrder);

  const VarSet& vars() const { return vars_; }
  int order() const { return order_; }
  void set_order(int n) { order_ = n; truncate_to_order(); }
  const std::map<Expo, Scalar>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  bool is_unit() const { return !constant_term().is_zero(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_exact() const;

  /// Minimal total degree of a stored term; kInfOrder for the zero series.
  int valuation() const;
  int max_degree() const;
  int max_exponent(int var) const;
  Expo min_exponents() const;

  void add_term(const Expo& e, const Scalar& c);

  TruncSeries operator-() const;
  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  TruncSeries& operator+=(const TruncSeries& b) { return *this = *this + b; }
  TruncSeries& operator-=(const TruncSeries& b) { return *this = *this - b; }
  TruncSeries& operator*=(const TruncSeries& b) { return *this = *this * b; }

  TruncSeries scaled(const Scalar& c) const;
  TruncSeries pow(int k) const;

  TruncSeries derivative(int var) const;
  /// Antiderivative in `var` with zero constant slice.
  TruncSeries antiderivative(int var) const;

  bool divisible_by(const Expo& m) const;
  TruncSeries divided_by_monomial(const Expo& m) const;

  TruncSeries truncated(int order) const;
  TruncSeries restricted_var_zero(int var) const;

  /// Substitute images[i] for variable i; images share a common var set.
  TruncSeries substituted(const std::vector<TruncSeries>& images) const;

  /// Reciprocal of a unit series, to this series' order (or `order` if given).
  TruncSeries inverse(int order = -1) const;
  /// (unit series)^(num/den) via binomial expansion; exact when the constant
  /// term is 1, float otherwise.
  TruncSeries pow_rational(long num, long den, int order = -1) const;
  /// exp of a series with positive valuation.
  TruncSeries exp(int order = -1) const;

  std::complex<double> eval(std::span<const std::complex<double>> point) const;
  Scalar eval_scalar(std::span<const Scalar> point) const;

  TruncSeries to_float() const;

  /// Same variables and identical term maps (orders not compared).
  bool operator==(const TruncSeries& o) const {
    return vars_ == o.vars_ && terms_ == o.terms_;
  }
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  double max_coeff_abs() const;

  std::string str() const;  // canonical grammar text

 private:
  void truncate_to_order();
  VarSet vars_;
  int order_ = kInfOrder;
  std::map<Expo, Scalar> terms_;
};

TruncSeries operator*(const Scalar& c, const TruncSeries& s);

}  // namespace dicrit
