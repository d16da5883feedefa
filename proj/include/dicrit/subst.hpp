#pragma once

#include <optional>

#include "dicrit/form.hpp"

namespace dicrit {

/// A substitution phi: domain space -> codomain space, stored as one series
/// over the domain variables per codomain variable.  Pullback carries objects
/// on the codomain back to the domain.
class SubstitutionMap {
 public:
  SubstitutionMap() = default;
  SubstitutionMap(VarSet domain, VarSet codomain, std::vector<TruncSeries> components);

  static SubstitutionMap identity(const VarSet& vars);
  /// Monomial map: codomain var i -> prod_j domain_j^{expo[i][j]}.
  static SubstitutionMap monomial(const VarSet& domain, const VarSet& codomain,
                                  const std::vector<Expo>& expos);
  /// Translation x_i -> x_i + c_i on a common variable set.
  static SubstitutionMap translation(const VarSet& vars, const std::vector<Scalar>& shift);

  const VarSet& domain() const { return domain_; }
  const VarSet& codomain() const { return codomain_; }
  const TruncSeries& component(int i) const { return comps_[static_cast<size_t>(i)]; }
  const std::vector<TruncSeries>& components() const { return comps_; }

  bool is_monomial() const;
  /// Exponent of domain var j in the (monomial) image of codomain var i.
  int exponent(int i, int j) const;

  TruncSeries pullback(const TruncSeries& s) const;
  DiffForm pullback(const DiffForm& w) const;

  std::string str() const;

 private:
  VarSet domain_, codomain_;
  std::vector<TruncSeries> comps_;
};

/// Composition phi o psi (apply psi first): pullback((phi o psi), w) ==
/// pullback(psi, pullback(phi, w)) up to truncation.
SubstitutionMap compose(const SubstitutionMap& phi, const SubstitutionMap& psi);

}  // namespace dicrit
