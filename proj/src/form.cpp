#include "dicrit/form.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dicrit {

const std::vector<std::vector<int>>& wedge_basis(int nvars, int deg) {
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  auto key = std::make_pair(nvars, deg);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> basis;
  if (deg == 0) {
    basis.push_back({});
  } else {
    std::vector<int> idx(static_cast<size_t>(deg));
    // enumerate strictly increasing tuples in lexicographic order
    std::function<void(int, int)> rec = [&](int pos, int start) {
      if (pos == deg) {
        basis.push_back(idx);
        return;
      }
      for (int v = start; v < nvars; ++v) {
        idx[static_cast<size_t>(pos)] = v;
        rec(pos + 1, v + 1);
      }
    };
    rec(0, 0);
  }
  return cache.emplace(key, std::move(basis)).first->second;
}

static int basis_index(int nvars, int deg, const std::vector<int>& sorted_idx) {
  const auto& b = wedge_basis(nvars, deg);
  for (size_t k = 0; k < b.size(); ++k)
    if (b[k] == sorted_idx) return static_cast<int>(k);
  throw Error("invalid wedge basis tuple");
}

DiffForm::DiffForm(VarSet vars, int degree, int order)
    : vars_(std::move(vars)), degree_(degree) {
  if (degree < 0 || degree > vars_.size())
    throw Error("form degree out of range");
  coeffs_.assign(wedge_basis(vars_.size(), degree).size(),
                 TruncSeries::zero(vars_, order));
}

DiffForm DiffForm::from_series(const TruncSeries& s) {
  DiffForm f(s.vars(), 0, s.order());
  f.coeffs_[0] = s;
  return f;
}

DiffForm DiffForm::differential(const VarSet& vars, int var, int order) {
  DiffForm f(vars, 1, order);
  f.coeffs_[static_cast<size_t>(var)] = TruncSeries::constant(vars, Scalar(1), order);
  return f;
}

int DiffForm::order() const {
  int n = kInfOrder;
  for (const auto& c : coeffs_) n = std::min(n, c.order());
  return n;
}

const TruncSeries& DiffForm::coeff_d(int var) const {
  if (degree_ != 1) throw Error("coeff_d needs a 1-form");
  return coeffs_[static_cast<size_t>(var)];
}

bool DiffForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const TruncSeries& c) { return c.is_zero(); });
}

bool DiffForm::is_exact_data() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const TruncSeries& c) { return c.is_exact(); });
}

DiffForm DiffForm::operator-() const {
  DiffForm r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

DiffForm operator+(const DiffForm& a, const DiffForm& b) {
  if (a.vars_ != b.vars_ || a.degree_ != b.degree_ || a.pole_ != b.pole_)
    throw Error("form shapes differ");
  DiffForm r = a;
  for (size_t k = 0; k < r.coeffs_.size(); ++k) r.coeffs_[k] += b.coeffs_[k];
  return r;
}

DiffForm operator-(const DiffForm& a, const DiffForm& b) { return a + (-b); }

DiffForm DiffForm::scaled(const Scalar& c) const {
  DiffForm r = *this;
  for (auto& k : r.coeffs_) k = k.scaled(c);
  return r;
}

DiffForm DiffForm::multiplied(const TruncSeries& s) const {
  DiffForm r = *this;
  for (auto& k : r.coeffs_) k = k * s;
  return r;
}

DiffForm DiffForm::truncated(int order) const {
  DiffForm r = *this;
  for (auto& k : r.coeffs_) k = k.truncated(order);
  return r;
}

DiffForm DiffForm::to_float() const {
  DiffForm r = *this;
  for (auto& k : r.coeffs_) k = k.to_float();
  return r;
}

DiffForm DiffForm::logarithmic_1form(const VarSet& vars, std::vector<TruncSeries> a,
                                     std::vector<bool> pole) {
  if (static_cast<int>(a.size()) != vars.size() || a.size() != pole.size())
    throw Error("logarithmic data size mismatch");
  DiffForm f(vars, 1);
  f.coeffs_ = std::move(a);
  f.pole_ = std::move(pole);
  return f;
}

DiffForm DiffForm::cleared_poles() const {
  if (!logarithmic()) return *this;
  DiffForm r(vars_, 1, order());
  for (int i = 0; i < vars_.size(); ++i) {
    TruncSeries c = coeffs_[static_cast<size_t>(i)];
    for (int j = 0; j < vars_.size(); ++j) {
      if (j == i || !pole_[static_cast<size_t>(j)]) continue;
      c = c * TruncSeries::variable(vars_, j);
    }
    r.coeffs_[static_cast<size_t>(i)] = c;
  }
  return r;
}

DiffForm DiffForm::with_log_presentation(const std::vector<bool>& pole) const {
  if (degree_ != 1 || logarithmic()) throw Error("need a holomorphic 1-form");
  DiffForm r = *this;
  r.pole_ = pole;
  for (int i = 0; i < vars_.size(); ++i)
    if (pole[static_cast<size_t>(i)])
      r.coeffs_[static_cast<size_t>(i)] =
          coeffs_[static_cast<size_t>(i)] * TruncSeries::variable(vars_, i);
  return r;
}

DiffForm DiffForm::with_holomorphic_presentation() const {
  if (!logarithmic()) return *this;
  DiffForm r = *this;
  for (int i = 0; i < vars_.size(); ++i)
    if (pole_[static_cast<size_t>(i)])
      r.coeffs_[static_cast<size_t>(i)] =
          coeffs_[static_cast<size_t>(i)].divided_by_monomial(unit_expo(i));
  r.pole_.clear();
  return r;
}

std::string DiffForm::str() const {
  const auto& basis = wedge_basis(vars_.size(), degree_);
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    const TruncSeries& c = coeffs_[k];
    if (c.is_zero()) continue;
    if (!first) os << "+";
    first = false;
    if (degree_ == 0) {
      os << c.str();
      continue;
    }
    bool trivial = c.is_constant() && c.constant_term().is_one();
    if (!trivial) {
      // factor out the common monomial of the coefficient
      Expo m = c.min_exponents();
      TruncSeries rest = m.total() > 0 ? c.divided_by_monomial(m) : c;
      if (m.total() > 0) {
        bool fm = true;
        for (int i = 0; i < vars_.size(); ++i) {
          if (m[i] == 0) continue;
          if (!fm) os << "*";
          fm = false;
          os << vars_.name(i);
          if (m[i] > 1) os << "^" << static_cast<int>(m[i]);
        }
        if (!(rest.is_constant() && rest.constant_term().is_one())) {
          os << "*";
          if (rest.terms().size() > 1) os << "(" << rest.str() << ")";
          else os << rest.str();
        }
      } else {
        if (rest.terms().size() > 1) os << "(" << rest.str() << ")";
        else os << rest.str();
      }
      os << "*";
    }
    bool fv = true;
    for (int v : basis[k]) {
      if (!fv) os << "*";
      fv = false;
      os << "d" << vars_.name(v);
      if (logarithmic() && pole_[static_cast<size_t>(v)]) os << "/" << vars_.name(v);
    }
  }
  if (first) return "0";
  return os.str();
}

VectorField::VectorField(VarSet v, std::vector<TruncSeries> comps)
    : vars(std::move(v)), components(std::move(comps)) {
  if (static_cast<int>(components.size()) != vars.size())
    throw Error("vector field component count mismatch");
}

DiffForm exterior_derivative(const DiffForm& w) {
  if (w.logarithmic()) return exterior_derivative(w.cleared_poles());
  int n = w.vars().size();
  if (w.degree() >= n) throw Error("top degree");
  if (w.order() < 1 && w.order() != kInfOrder) throw Error("truncation order too low");
  DiffForm r(w.vars(), w.degree() + 1,
             w.order() == kInfOrder ? kInfOrder : w.order() - 1);
  const auto& src = wedge_basis(n, w.degree());
  for (size_t k = 0; k < src.size(); ++k) {
    const auto& I = src[k];
    for (int j = 0; j < n; ++j) {
      if (std::find(I.begin(), I.end(), j) != I.end()) continue;
      TruncSeries dj = w.coeff(static_cast<int>(k)).derivative(j);
      if (dj.is_zero()) continue;
      std::vector<int> J = I;
      J.push_back(j);
      std::sort(J.begin(), J.end());
      int below = static_cast<int>(std::count_if(I.begin(), I.end(),
                                                 [&](int i) { return i < j; }));
      Scalar sign((below % 2 == 0) ? 1 : -1);
      r.coeff(basis_index(n, w.degree() + 1, J)) += dj.scaled(sign);
    }
  }
  return r;
}

DiffForm exterior_derivative(const TruncSeries& f) {
  return exterior_derivative(DiffForm::from_series(f));
}

DiffForm wedge(const DiffForm& a0, const DiffForm& b0) {
  const DiffForm& a = a0.logarithmic() ? a0.cleared_poles() : a0;
  const DiffForm& b = b0.logarithmic() ? b0.cleared_poles() : b0;
  if (a.vars() != b.vars()) throw Error("variable sets differ");
  int n = a.vars().size();
  int deg = a.degree() + b.degree();
  if (deg > n) throw Error("degree overflow");
  DiffForm r(a.vars(), deg, std::min(a.order(), b.order()));
  const auto& ba = wedge_basis(n, a.degree());
  const auto& bb = wedge_basis(n, b.degree());
  for (size_t ka = 0; ka < ba.size(); ++ka) {
    if (a.coeff(static_cast<int>(ka)).is_zero()) continue;
    for (size_t kb = 0; kb < bb.size(); ++kb) {
      if (b.coeff(static_cast<int>(kb)).is_zero()) continue;
      std::vector<int> J = ba[ka];
      J.insert(J.end(), bb[kb].begin(), bb[kb].end());
      // parity of the sort permutation; zero when an index repeats
      bool dup = false;
      int sign = 1;
      for (size_t i = 0; i < J.size() && !dup; ++i)
        for (size_t j = i + 1; j < J.size(); ++j) {
          if (J[i] == J[j]) { dup = true; break; }
          if (J[i] > J[j]) sign = -sign;
        }
      if (dup) continue;
      std::sort(J.begin(), J.end());
      r.coeff(basis_index(n, deg, J)) +=
          (a.coeff(static_cast<int>(ka)) * b.coeff(static_cast<int>(kb)))
              .scaled(Scalar(sign));
    }
  }
  return r;
}

DiffForm interior_product(const VectorField& X, const DiffForm& w0) {
  const DiffForm& w = w0.logarithmic() ? w0.cleared_poles() : w0;
  if (X.vars != w.vars()) throw Error("variable mismatch");
  if (w.degree() < 1) throw Error("interior product needs degree >= 1");
  int n = w.vars().size();
  DiffForm r(w.vars(), w.degree() - 1, w.order());
  const auto& src = wedge_basis(n, w.degree());
  for (size_t k = 0; k < src.size(); ++k) {
    if (w.coeff(static_cast<int>(k)).is_zero()) continue;
    const auto& I = src[k];
    for (size_t pos = 0; pos < I.size(); ++pos) {
      std::vector<int> J;
      for (size_t q = 0; q < I.size(); ++q)
        if (q != pos) J.push_back(I[q]);
      Scalar sign((pos % 2 == 0) ? 1 : -1);
      r.coeff(basis_index(n, w.degree() - 1, J)) +=
          (w.coeff(static_cast<int>(k)) * X.component(I[pos])).scaled(sign);
    }
  }
  return r;
}

Saturation saturate(const DiffForm& w0) {
  const DiffForm& w = w0.logarithmic() ? w0.cleared_poles() : w0;
  if (w.is_zero()) throw Error("zero form");
  Expo m;
  for (int i = 0; i < kMaxVars; ++i) m[i] = INT16_MAX;
  for (const auto& c : w.coeffs()) {
    if (c.is_zero()) continue;
    Expo cm = c.min_exponents();
    for (int i = 0; i < kMaxVars; ++i) m[i] = std::min(m[i], cm[i]);
  }
  DiffForm r = w;
  for (auto idx = 0; idx < r.basis_size(); ++idx)
    if (!r.coeff(idx).is_zero())
      r.coeff(idx) = r.coeff(idx).divided_by_monomial(m);
  Saturation s{std::move(r), TruncSeries::monomial(w.vars(), m, Scalar(1))};
  return s;
}

DiffForm integrability_residual(const DiffForm& w0) {
  const DiffForm& w = w0.logarithmic() ? w0.cleared_poles() : w0;
  if (w.degree() != 1) throw Error("integrability check needs a 1-form");
  return wedge(w, exterior_derivative(w));
}

VectorField dual_field_2d(const DiffForm& w0) {
  const DiffForm& w = w0.logarithmic() ? w0.cleared_poles() : w0;
  if (w.degree() != 1 || w.vars().size() != 2)
    throw Error("dual field needs a 2-variable 1-form");
  return VectorField(w.vars(), {-w.coeff_d(1), w.coeff_d(0)});
}

}  // namespace dicrit
