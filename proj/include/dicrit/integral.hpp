#pragma once

#include "dicrit/criteria.hpp"

namespace dicrit {

/// A meromorphic function num/den with series data.
struct MeroFunction {
  TruncSeries num, den;

  bool is_constant() const;
  MeroFunction cleared() const;  // common monomial factor removed
};

MeroFunction parse_mero(const std::string& text, const VarSet& vars, int order);

/// dF ^ Omega == 0, denominators cleared.
Verdict verify_first_integral(const MeroFunction& f, const DiffForm& omega,
                              int min_certify_order = 4);

/// F -> F o Phi with truncation bookkeeping.
MeroFunction pullback_integral(const MeroFunction& f, const SubstitutionMap& phi);

/// A parameterized curve with rational exponents: the components are series
/// in the ramified parameter u, where the geometric parameter is u^denominator.
struct PuiseuxCurve {
  std::string param = "u";
  int denominator = 1;
  VarSet target;                      // variables of the ambient space
  std::vector<TruncSeries> components;  // one per ambient variable, over {param}
  int order = 0;

  std::string str() const;  // rational-exponent display
};

/// Substitute the curve into a 1-form; holds when the pullback vanishes to
/// the stated order.
Verdict verify_separatrix(const PuiseuxCurve& curve, const DiffForm& omega);

/// The separatrix through the dicritical point P1 with leaf constant C,
/// pushed back to the original 2D coordinates (t, z).
PuiseuxCurve separatrix_family(const FamilyParams& fp, const Scalar& c, int order = 12);
/// Composition with f = x^p y^q: the 3D separatrix as a surface map
/// (x, y) -> (x, y, z(x, y)); its diagonal section is a PuiseuxCurve.
SubstitutionMap separatrix_surface(const FamilyParams& fp, const Scalar& c, int order = 12);
PuiseuxCurve separatrix_diagonal_3d(const FamilyParams& fp, const Scalar& c, int order = 12);

/// Rectifying factor S1 for a regular foliation dt + B(t, z) dz with t | B:
/// S(t, z) = (t S1(t, z), z) satisfies S^*(dt + B dz) ^ dt = 0.
TruncSeries rectify(const DiffForm& omega, int order = 12);

struct SectionMap {
  SubstitutionMap sigma;  // (t, z) -> ambient 3D space
  // provenance
  int n1 = 1, m1 = 1, n2 = 0, m2 = 1;
  int p = 1;
  Scalar alpha1;
  TruncSeries S1;
  int certificate_order = 0;   // sigma^* Omega ^ dt vanishes to this order
  bool axis_image_trivial = false;  // sigma({z = 0}) is the origin
  std::string note;
};

/// The dicriticalness section for the family (monomial f = x^p y^q): a map
/// sigma with sigma^*Omega ^ dt = 0 to the working order and sigma^*Omega != 0.
SectionMap dicriticalness_section(const FamilyParams& fp, int order = 12);

/// General f via user-supplied monomialization f(rho(x,y)) = x^a y^b V(x,y):
/// the section for the monomialized pull-back, with the implicit-function
/// solve for the second ramification component.
SectionMap dicriticalness_section_monomialized(const FamilyParams& fp, int a, int b,
                                               const TruncSeries& V, int order = 12);

/// The monomialized 3D family form d(z^2 + g^k) + alpha g^n U(g) dz for
/// g = x^a y^b V(x, y).
DiffForm family_3d_form_monomialized(const FamilyParams& fp, int a, int b,
                                     const TruncSeries& V, int order);

}  // namespace dicrit
