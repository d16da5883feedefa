#include "dicrit/subst.hpp"

#include <sstream>

namespace dicrit {

SubstitutionMap::SubstitutionMap(VarSet domain, VarSet codomain,
                                 std::vector<TruncSeries> components)
    : domain_(std::move(domain)), codomain_(std::move(codomain)),
      comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != codomain_.size())
    throw Error("substitution needs one component per codomain variable");
  for (const auto& c : comps_)
    if (c.vars() != domain_) throw Error("substitution component over wrong variables");
}

SubstitutionMap SubstitutionMap::identity(const VarSet& vars) {
  std::vector<TruncSeries> comps;
  for (int i = 0; i < vars.size(); ++i) comps.push_back(TruncSeries::variable(vars, i));
  return SubstitutionMap(vars, vars, std::move(comps));
}

SubstitutionMap SubstitutionMap::monomial(const VarSet& domain, const VarSet& codomain,
                                          const std::vector<Expo>& expos) {
  if (static_cast<int>(expos.size()) != codomain.size())
    throw Error("monomial map needs one exponent tuple per codomain variable");
  std::vector<TruncSeries> comps;
  for (const auto& e : expos)
    comps.push_back(TruncSeries::monomial(domain, e, Scalar(1)));
  return SubstitutionMap(domain, codomain, std::move(comps));
}

SubstitutionMap SubstitutionMap::translation(const VarSet& vars,
                                             const std::vector<Scalar>& shift) {
  if (static_cast<int>(shift.size()) != vars.size())
    throw Error("translation needs one shift per variable");
  std::vector<TruncSeries> comps;
  for (int i = 0; i < vars.size(); ++i) {
    TruncSeries c = TruncSeries::variable(vars, i);
    c.add_term(Expo{}, shift[static_cast<size_t>(i)]);
    comps.push_back(c);
  }
  return SubstitutionMap(vars, vars, std::move(comps));
}

bool SubstitutionMap::is_monomial() const {
  for (const auto& c : comps_)
    if (!c.is_monomial()) return false;
  return true;
}

int SubstitutionMap::exponent(int i, int j) const {
  const TruncSeries& c = comps_[static_cast<size_t>(i)];
  if (!c.is_monomial()) throw Error("map is not monomial");
  return c.terms().begin()->first[j];
}

TruncSeries SubstitutionMap::pullback(const TruncSeries& s) const {
  if (s.vars() != codomain_) throw Error("series is not over the codomain");
  return s.substituted(comps_);
}

DiffForm SubstitutionMap::pullback(const DiffForm& w0) const {
  const DiffForm& w = w0.logarithmic() ? w0.cleared_poles() : w0;
  if (w.vars() != codomain_) throw Error("form is not over the codomain");
  if (w.degree() == 0) return DiffForm::from_series(pullback(w.coeff(0)));

  // Differentials of the components, as 1-forms over the domain.
  std::vector<DiffForm> dphi;
  for (int i = 0; i < codomain_.size(); ++i)
    dphi.push_back(exterior_derivative(comps_[static_cast<size_t>(i)]));

  const auto& basis = wedge_basis(codomain_.size(), w.degree());
  std::optional<DiffForm> acc;
  for (size_t k = 0; k < basis.size(); ++k) {
    if (w.coeff(static_cast<int>(k)).is_zero()) continue;
    DiffForm part = DiffForm::from_series(pullback(w.coeff(static_cast<int>(k))));
    for (int v : basis[k]) part = wedge(part, dphi[static_cast<size_t>(v)]);
    acc = acc ? *acc + part : part;
  }
  if (!acc) {
    int deg = std::min(w.degree(), domain_.size());
    return DiffForm(domain_, deg, w.order());
  }
  return *acc;
}

std::string SubstitutionMap::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < codomain_.size(); ++i) {
    if (i) os << ", ";
    os << codomain_.name(i) << " = " << comps_[static_cast<size_t>(i)].str();
  }
  os << ")";
  return os.str();
}

SubstitutionMap compose(const SubstitutionMap& phi, const SubstitutionMap& psi) {
  if (psi.codomain() != phi.domain())
    throw Error("maps do not chain");
  std::vector<TruncSeries> comps;
  for (int i = 0; i < phi.codomain().size(); ++i)
    comps.push_back(psi.pullback(phi.component(i)));
  return SubstitutionMap(psi.domain(), phi.codomain(), std::move(comps));
}

}  // namespace dicrit
