#include "dicrit/germ.hpp"

namespace dicrit {

bool divisor_invariant(const DiffForm& form0, int var) {
  const DiffForm form = form0.logarithmic() ? form0.cleared_poles() : form0;
  if (form.degree() != 1) throw Error("divisor test needs a 1-form");
  if (var < 0 || var >= form.vars().size()) throw Error("variable not in form's set");
  for (int j = 0; j < form.vars().size(); ++j) {
    if (j == var) continue;
    if (!form.coeff_d(j).restricted_var_zero(var).is_zero()) return false;
  }
  return true;
}

bool divisor_invariant(const DiffForm& form, const std::string& var) {
  return divisor_invariant(form, form.vars().index_checked(var));
}

std::vector<bool> FoliationGerm::divisor_flags() const {
  std::vector<bool> f(static_cast<size_t>(vars().size()), false);
  for (const auto& d : divisor) f[static_cast<size_t>(d.var)] = true;
  return f;
}

bool FoliationGerm::on_divisor(int var) const {
  for (const auto& d : divisor)
    if (d.var == var) return true;
  return false;
}

bool FoliationGerm::singular_at_origin() const {
  for (int k = 0; k < form.basis_size(); ++k)
    if (!form.coeff(k).constant_term().is_zero()) return false;
  return true;
}

FoliationGerm make_germ(const DiffForm& form, const std::vector<int>& divisor_vars,
                        const std::vector<int>& multiplicities) {
  FoliationGerm g;
  DiffForm h = form.logarithmic() ? form.cleared_poles() : form;
  if (h.is_zero()) throw Error("zero form");
  g.form = saturate(h).form;
  for (size_t k = 0; k < divisor_vars.size(); ++k) {
    DivisorComponent d;
    d.var = divisor_vars[k];
    d.invariant = divisor_invariant(g.form, d.var);
    d.multiplicity = k < multiplicities.size() ? multiplicities[k] : 0;
    g.divisor.push_back(d);
  }
  return g;
}

FoliationGerm germ_at_point(const FoliationGerm& g, const std::vector<Scalar>& point) {
  if (static_cast<int>(point.size()) != g.vars().size())
    throw Error("point dimension mismatch");
  SubstitutionMap tr = SubstitutionMap::translation(g.vars(), point);
  DiffForm moved = tr.pullback(g.form);
  std::vector<int> dv, mult;
  for (const auto& d : g.divisor) {
    if (point[static_cast<size_t>(d.var)].is_zero()) {
      dv.push_back(d.var);
      mult.push_back(d.multiplicity);
    }
  }
  return make_germ(moved, dv, mult);
}

AdaptedCoefficients adapted_coefficients(const DiffForm& form0,
                                         const std::vector<bool>& log_vars) {
  const DiffForm form = form0.logarithmic() ? form0.cleared_poles() : form0;
  if (form.degree() != 1) throw Error("adapted coefficients need a 1-form");
  AdaptedCoefficients out;
  for (int i = 0; i < form.vars().size(); ++i) {
    TruncSeries a = form.coeff_d(i);
    if (log_vars[static_cast<size_t>(i)] && !a.is_zero())
      a = a * TruncSeries::variable(form.vars(), i);
    out.a.push_back(std::move(a));
  }
  Expo m;
  for (int i = 0; i < kMaxVars; ++i) m[i] = INT16_MAX;
  bool any = false;
  for (const auto& a : out.a) {
    if (a.is_zero()) continue;
    any = true;
    Expo am = a.min_exponents();
    for (int i = 0; i < kMaxVars; ++i) m[i] = std::min(m[i], am[i]);
  }
  if (!any) throw Error("zero form");
  for (auto& a : out.a)
    if (!a.is_zero()) a = a.divided_by_monomial(m);
  out.removed = m;
  return out;
}

}  // namespace dicrit
