#include "dicrit/series.hpp"

#include <algorithm>
#include <sstream>

namespace dicrit {

int VarSet::index(const std::string& v) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == v) return static_cast<int>(i);
  return -1;
}

int VarSet::index_checked(const std::string& v) const {
  int i = index(v);
  if (i < 0) throw Error("unknown variable: " + v);
  return i;
}

void VarSet::check() const {
  if (names_.empty() || names_.size() > kMaxVars)
    throw Error("variable set must hold 1.." + std::to_string(kMaxVars) + " names");
  for (size_t i = 0; i < names_.size(); ++i)
    for (size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw Error("duplicate variable: " + names_[i]);
}

Expo unit_expo(int i, int power) {
  Expo e;
  e[i] = static_cast<int16_t>(power);
  return e;
}

TruncSeries TruncSeries::zero(const VarSet& vars, int order) {
  return TruncSeries(vars, order);
}

TruncSeries TruncSeries::constant(const VarSet& vars, const Scalar& c, int order) {
  TruncSeries s(vars, order);
  s.add_term(Expo{}, c);
  return s;
}

TruncSeries TruncSeries::monomial(const VarSet& vars, const Expo& e, const Scalar& c,
                                  int order) {
  TruncSeries s(vars, order);
  s.add_term(e, c);
  return s;
}

TruncSeries TruncSeries::variable(const VarSet& vars, int i, int order) {
  return monomial(vars, unit_expo(i), Scalar(1), order);
}

bool TruncSeries::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Expo{});
}

Scalar TruncSeries::constant_term() const {
  auto it = terms_.find(Expo{});
  return it == terms_.end() ? Scalar(0) : it->second;
}

bool TruncSeries::is_exact() const {
  for (const auto& [e, c] : terms_)
    if (!c.is_exact()) return false;
  return true;
}

int TruncSeries::valuation() const {
  int v = kInfOrder;
  for (const auto& [e, c] : terms_) v = std::min(v, e.total());
  return v;
}

int TruncSeries::max_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total());
  return d;
}

int TruncSeries::max_exponent(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

Expo TruncSeries::min_exponents() const {
  Expo m;
  if (terms_.empty()) return m;
  for (int i = 0; i < kMaxVars; ++i) m[i] = INT16_MAX;
  for (const auto& [e, c] : terms_)
    for (int i = 0; i < kMaxVars; ++i) m[i] = std::min(m[i], e[i]);
  return m;
}

void TruncSeries::add_term(const Expo& e, const Scalar& c) {
  if (c.is_zero()) return;
  if (e.total() > order_) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void TruncSeries::truncate_to_order() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.total() > order_) it = terms_.erase(it);
    else ++it;
  }
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r(vars_, order_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  if (a.vars_ != b.vars_) throw Error("variable sets differ");
  TruncSeries r(a.vars_, std::min(a.order_, b.order_));
  r.terms_ = a.terms_;
  r.truncate_to_order();
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  if (a.vars_ != b.vars_) throw Error("variable sets differ");
  TruncSeries r(a.vars_, std::min(a.order_, b.order_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Expo e;
      bool overflow = false;
      for (int i = 0; i < kMaxVars; ++i) {
        int s = ea[i] + eb[i];
        if (s > INT16_MAX) overflow = true;
        e[i] = static_cast<int16_t>(s);
      }
      if (overflow) throw Error("exponent overflow");
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

TruncSeries TruncSeries::scaled(const Scalar& c) const {
  TruncSeries r(vars_, order_);
  if (c.is_zero()) return r;
  for (const auto& [e, k] : terms_) r.add_term(e, k * c);
  return r;
}

TruncSeries operator*(const Scalar& c, const TruncSeries& s) { return s.scaled(c); }

TruncSeries TruncSeries::pow(int k) const {
  if (k < 0) throw Error("negative power of a series");
  TruncSeries acc = constant(vars_, Scalar(1), order_);
  TruncSeries base = *this;
  while (k > 0) {
    if (k & 1) acc *= base;
    base = (k >>= 1) ? base * base : base;
  }
  return acc;
}

TruncSeries TruncSeries::derivative(int var) const {
  int out_order = order_ == kInfOrder ? kInfOrder : std::max(0, order_ - 1);
  TruncSeries r(vars_, out_order);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Expo d = e;
    d[var] = static_cast<int16_t>(d[var] - 1);
    r.add_term(d, c * Scalar(Rational(e[var])));
  }
  return r;
}

TruncSeries TruncSeries::antiderivative(int var) const {
  TruncSeries r(vars_, order_ == kInfOrder ? kInfOrder : order_ + 1);
  for (const auto& [e, c] : terms_) {
    Expo d = e;
    d[var] = static_cast<int16_t>(d[var] + 1);
    r.add_term(d, c / Scalar(Rational(d[var])));
  }
  return r;
}

bool TruncSeries::divisible_by(const Expo& m) const {
  for (const auto& [e, c] : terms_)
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] < m[i]) return false;
  return true;
}

TruncSeries TruncSeries::divided_by_monomial(const Expo& m) const {
  if (!divisible_by(m)) throw Error("series not divisible by monomial");
  int g = m.total();
  TruncSeries r(vars_, order_ == kInfOrder ? kInfOrder : order_ - g);
  for (const auto& [e, c] : terms_) {
    Expo d = e;
    for (int i = 0; i < kMaxVars; ++i) d[i] = static_cast<int16_t>(d[i] - m[i]);
    r.add_term(d, c);
  }
  return r;
}

TruncSeries TruncSeries::truncated(int order) const {
  TruncSeries r = *this;
  r.order_ = std::min(order_, order);
  r.truncate_to_order();
  return r;
}

TruncSeries TruncSeries::restricted_var_zero(int var) const {
  TruncSeries r(vars_, order_);
  for (const auto& [e, c] : terms_)
    if (e[var] == 0) r.add_term(e, c);
  return r;
}

TruncSeries TruncSeries::substituted(const std::vector<TruncSeries>& images) const {
  if (static_cast<int>(images.size()) != vars_.size())
    throw Error("substitution image count mismatch");
  const VarSet& tv = images.front().vars();
  for (const auto& im : images)
    if (im.vars() != tv) throw Error("substitution images over differing variables");

  // Order bookkeeping: dropped input terms (degree > order_) map to terms of
  // valuation >= order_ when every used image has positive valuation. A used
  // image with a constant part (translation) spills unknown high-order terms
  // downward by at most its maximal exponent in this series.
  int img_part = kInfOrder;
  int spill = 0;
  for (int i = 0; i < vars_.size(); ++i) {
    if (max_exponent(i) == 0) continue;
    img_part = std::min(img_part, images[static_cast<size_t>(i)].order());
    if (!images[static_cast<size_t>(i)].constant_term().is_zero())
      spill += max_exponent(i);
  }
  int in_part = order_ == kInfOrder ? kInfOrder : std::max(0, order_ - spill);
  int out_order = std::min(in_part, img_part);

  TruncSeries r(tv, out_order);
  // Cache image powers per variable.
  std::vector<std::vector<TruncSeries>> pows(static_cast<size_t>(vars_.size()));
  for (int i = 0; i < vars_.size(); ++i)
    pows[static_cast<size_t>(i)].push_back(
        TruncSeries::constant(tv, Scalar(1), out_order));
  auto power = [&](int var, int k) -> const TruncSeries& {
    auto& p = pows[static_cast<size_t>(var)];
    while (static_cast<int>(p.size()) <= k)
      p.push_back((p.back() * images[static_cast<size_t>(var)]).truncated(out_order));
    return p[static_cast<size_t>(k)];
  };

  for (const auto& [e, c] : terms_) {
    TruncSeries term = TruncSeries::constant(tv, c, out_order);
    for (int i = 0; i < vars_.size(); ++i)
      if (e[i] > 0) term = (term * power(i, e[i])).truncated(out_order);
    r += term;
  }
  return r;
}

TruncSeries TruncSeries::inverse(int order) const {
  Scalar c0 = constant_term();
  if (c0.is_zero()) throw Error("inverse of a non-unit series");
  int n = order >= 0 ? order : order_;
  if (n == kInfOrder) n = std::max(1, max_degree()) * 8;  // heuristic cap for exact input
  Scalar ic0 = Scalar(1) / c0;
  TruncSeries w = scaled(ic0).truncated(n);
  w.add_term(Expo{}, Scalar(-1));  // w has positive valuation
  TruncSeries acc = TruncSeries::constant(vars_, Scalar(1), n);
  TruncSeries pw = TruncSeries::constant(vars_, Scalar(1), n);
  int vw = w.is_zero() ? kInfOrder : w.valuation();
  for (int k = 1; vw < kInfOrder && k * vw <= n; ++k) {
    pw = (pw * (-w)).truncated(n);
    acc += pw;
  }
  return acc.scaled(ic0);
}

TruncSeries TruncSeries::pow_rational(long num, long den, int order) const {
  if (den <= 0) throw Error("power denominator must be positive");
  int n = order >= 0 ? order : order_;
  if (n == kInfOrder) n = std::max(1, max_degree()) * 8;
  Scalar c0 = constant_term();
  if (c0.is_zero()) throw Error("fractional power of a non-unit series");

  Scalar root;
  bool exact_root = false;
  if (c0.is_one()) {
    root = Scalar(1);
    exact_root = true;
  } else {
    std::complex<double> v = c0.to_complex();
    root = Scalar(std::pow(v, static_cast<double>(num) / static_cast<double>(den)));
  }
  TruncSeries w = scaled(Scalar(1) / c0).truncated(n);
  w.add_term(Expo{}, Scalar(-1));
  Rational alpha(num, den);
  TruncSeries acc = TruncSeries::constant(vars_, Scalar(1), n);
  TruncSeries pw = TruncSeries::constant(vars_, Scalar(1), n);
  Scalar binom(1);
  int vw = w.is_zero() ? kInfOrder : w.valuation();
  for (int k = 1; vw < kInfOrder && k * vw <= n; ++k) {
    binom *= Scalar(Rational(alpha - (k - 1)) / Rational(k));
    pw = (pw * w).truncated(n);
    acc += pw.scaled(binom);
  }
  if (!exact_root) acc = acc.to_float();
  return acc.scaled(root);
}

TruncSeries TruncSeries::exp(int order) const {
  if (!constant_term().is_zero()) throw Error("exp needs positive valuation");
  int n = order >= 0 ? order : order_;
  if (n == kInfOrder) n = std::max(1, max_degree()) * 8;
  TruncSeries acc = TruncSeries::constant(vars_, Scalar(1), n);
  TruncSeries pw = TruncSeries::constant(vars_, Scalar(1), n);
  Scalar fact(1);
  int vw = is_zero() ? kInfOrder : valuation();
  for (int k = 1; vw < kInfOrder && k * vw <= n; ++k) {
    fact /= Scalar(Rational(k));
    pw = (pw * *this).truncated(n);
    acc += pw.scaled(fact);
  }
  return acc;
}

std::complex<double> TruncSeries::eval(std::span<const std::complex<double>> point) const {
  if (static_cast<int>(point.size()) != vars_.size())
    throw Error("evaluation point dimension mismatch");
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [e, c] : terms_) {
    std::complex<double> t = c.to_complex();
    for (int i = 0; i < vars_.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[static_cast<size_t>(i)];
    acc += t;
  }
  return acc;
}

Scalar TruncSeries::eval_scalar(std::span<const Scalar> point) const {
  if (static_cast<int>(point.size()) != vars_.size())
    throw Error("evaluation point dimension mismatch");
  Scalar acc(0);
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (int i = 0; i < vars_.size(); ++i)
      if (e[i] > 0) t *= point[static_cast<size_t>(i)].pow(e[i]);
    acc += t;
  }
  return acc;
}

TruncSeries TruncSeries::to_float() const {
  TruncSeries r(vars_, order_);
  for (const auto& [e, c] : terms_) r.add_term(e, c.to_float());
  return r;
}

double TruncSeries::max_coeff_abs() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, c.abs());
  return m;
}

std::string TruncSeries::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // descending exponent-lexicographic order
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string cs = c.str();
    bool negative = !cs.empty() && cs[0] == '-';
    if (!first) os << (negative ? "" : "+");
    first = false;
    bool has_vars = e.total() > 0;
    if (!has_vars) {
      os << cs;
      continue;
    }
    if (c.is_one()) {
    } else if ((-c).is_one() && c.is_exact()) {
      os << "-";
    } else {
      os << cs << "*";
    }
    bool fv = true;
    for (int i = 0; i < vars_.size(); ++i) {
      if (e[i] == 0) continue;
      if (!fv) os << "*";
      fv = false;
      os << vars_.name(i);
      if (e[i] > 1) os << "^" << static_cast<int>(e[i]);
    }
  }
  return os.str();
}

}  // namespace dicrit
