#pragma once

#include "dicrit/classify.hpp"

namespace dicrit {

/// Parameters of the cuspidal family
///   Omega = d(z^2 + (x^p y^q)^k) + alpha (x^p y^q)^n U(x^p y^q) dz.
struct FamilyParams {
  int p = 1, q = 1;  // f = x^p y^q, gcd(p, q) = 1
  int k = 2;         // exponent in d(z^2 + f^k)
  int n = 1;         // exponent in alpha f^n U(f) dz
  Scalar alpha_sq = Scalar(0);      // exact rational when available
  std::optional<Scalar> alpha;      // materialized root of alpha_sq (or given)
  TruncSeries U;                    // unit series in one variable, U(0) = 1

  /// alpha as a scalar: the stored value, or the principal square root of
  /// alpha_sq (exact when it is a rational square).
  Scalar alpha_value() const;
  void validate() const;
};

FamilyParams make_family(int p, int q, int k, int n, const Scalar& alpha,
                         const TruncSeries& U);

/// The 2D shadow omega = d(z^2 + t^k) + alpha t^n U(t) dz over (t, z).
DiffForm family_2d_form(const FamilyParams& fp, int order);
/// The 3D form over (x, y, z).
DiffForm family_3d_form(const FamilyParams& fp, int order);

struct ResonanceSolution {
  std::optional<Rational> r;     // alpha^2 = (16+r)^2/(16+2r), r in Q_{>=0}
  bool boundary = false;         // r == 0, alpha = +-4
  std::optional<std::pair<Scalar, Scalar>> alpha_roots;  // roots of 2y^2+alpha y+2
  std::optional<std::pair<Scalar, Scalar>> quotients;    // eigenvalue quotients (p=1)
};

/// Decide alpha^2 = (16+r)^2/(16+2r) exactly over r in Q_{>=0}.
ResonanceSolution alpha_resonance_solve(const Scalar& alpha_sq);

/// Eigenvalue quotients 2p(a2-a1)/(2a1+alpha), 2p(a1-a2)/(2a2+alpha) at the
/// two non-corner singular points; alpha_1 is the root whose quotient is
/// positive when one exists.
std::pair<Scalar, Scalar> eigen_quotients(int p, const Scalar& alpha);
/// The labeled roots (alpha_1, alpha_2) of 2y^2 + alpha y + 2 = 0 under the
/// same naming convention.
std::pair<Scalar, Scalar> alpha_roots_labeled(int p, const Scalar& alpha);

Verdict prop5_check(const FamilyParams& fp, int order = 12);

enum class FamilyClass { generic, resonant_dicritical_candidate, resonant_dulac, boundary };
std::string family_class_str(FamilyClass c);

struct FamilyClassification {
  FamilyClass cls = FamilyClass::generic;
  std::optional<Rational> r;
  std::optional<Scalar> quotient_p1;   // eigenvalue quotient at P1
  std::optional<Scalar> quotient_p2;
  std::optional<int> obstruction_order;
  std::optional<SingularityClass> p1_class;
  std::optional<SingularityClass> p2_class;
  int order = 0;
};

FamilyClassification family_classify(const FamilyParams& fp, int order = 12);

/// Numeric holonomy evidence consumed by corollary4_check / theorem6_check.
struct HolonomyProbe {
  bool available = false;
  bool abelian = false;             // pairwise commutators below tolerance
  bool finite_orders = false;       // every generator has h^k = id, k <= max
  double commutator_residual = 0.0; // max commutator displacement
  double order_residual = 0.0;      // max |h^k(t0) - t0| over matched orders
  std::vector<int> generator_orders;
  double tol_hold = 1e-6, tol_fail = 1e-2;
};

Verdict corollary4_check(const FamilyParams& fp, const HolonomyProbe& probe);

/// Theorem 6 needs an invariance verdict for the candidate rational function;
/// the holonomy module supplies it through this hook.
Verdict theorem6_check(const FamilyParams& fp,
                       const std::optional<Verdict>& invariance,
                       int order = 12);

struct MonomializedF {
  int a = 1, b = 1;      // f(rho(x, y)) = x^a y^b V(x, y)
  TruncSeries V;         // unit
  bool monomial = true;  // true when f itself is x^a y^b (V == 1)
};

Verdict theorem7_check(const FamilyParams& fp, int order = 12);

}  // namespace dicrit
