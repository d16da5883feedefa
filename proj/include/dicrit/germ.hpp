#pragma once

#include "dicrit/subst.hpp"

namespace dicrit {

/// A coordinate hyperplane of the normal-crossings divisor.
struct DivisorComponent {
  int var = -1;          // defining variable index
  bool invariant = true; // false = dicritical
  int multiplicity = 0;  // multiplicity in the total transform
};

/// True when the component {x_var = 0} is invariant for the (saturated)
/// 1-form: every other coefficient vanishes identically on it.
bool divisor_invariant(const DiffForm& form, int var);
bool divisor_invariant(const DiffForm& form, const std::string& var);

/// A generating 1-form together with an adapted normal-crossings divisor.
struct FoliationGerm {
  DiffForm form;  // saturated, holomorphic presentation
  std::vector<DivisorComponent> divisor;

  const VarSet& vars() const { return form.vars(); }
  std::vector<bool> divisor_flags() const;
  bool on_divisor(int var) const;
  bool singular_at_origin() const;
};

/// Build a germ: saturates the form and fills in invariance flags for the
/// named divisor variables.
FoliationGerm make_germ(const DiffForm& form, const std::vector<int>& divisor_vars = {},
                        const std::vector<int>& multiplicities = {});

/// Re-center the germ at a point (divisor components through the point are
/// kept).  The point is given in the germ's coordinates.
FoliationGerm germ_at_point(const FoliationGerm& g, const std::vector<Scalar>& point);

/// Meromorphic (adapted) coefficient tuple: a_i = x_i c_i on divisor
/// variables, a_i = c_i otherwise, with the common monomial factor removed.
struct AdaptedCoefficients {
  std::vector<TruncSeries> a;
  Expo removed;  // common monomial divided out
};
AdaptedCoefficients adapted_coefficients(const DiffForm& form,
                                         const std::vector<bool>& log_vars);

}  // namespace dicrit
