#pragma once

#include "dicrit/blowup.hpp"
#include "dicrit/verdict.hpp"

namespace dicrit {

enum class SingLabel {
  regular,
  simple_a,
  simple_b_resonant,
  saddle_node,
  dulac_c,
  resonant_linearizable_candidate,
  dicritical_radial,
  unclassified,
};

std::string label_str(SingLabel l);

struct LinearPart2D {
  Scalar m[2][2];  // linear part of the dual vector field
  std::pair<Scalar, Scalar> eigenvalues;
  bool nilpotent = false;
  bool exact = true;
};

/// Linear part of the dual vector field of a 2-variable germ.
LinearPart2D linear_part_2d(const FoliationGerm& g);

/// Residues of a logarithmic 1-form at the origin (constant terms of the
/// pole coefficients).
std::vector<Scalar> log_residues(const DiffForm& logform);

struct AdaptedInvariants {
  int nu = 0;
  int mu = 0;
  int rs = 0;
  std::pair<int, int> dimensional_type_bounds{1, 1};
  bool pre_simple = false;
  int jet_order = 0;
  std::string note;
};

AdaptedInvariants adapted_invariants(const FoliationGerm& g, int jet_order = 3);

/// Poincare-Dulac normal form of the dual field of a 2-variable germ whose
/// linear part is diagonalizable with nonzero eigenvalues.
struct NormalForm2D {
  std::pair<Scalar, Scalar> eigenvalues;  // in normal-form coordinates
  SubstitutionMap to_germ;                // normal-form coords -> germ coords
  VectorField field;                      // normalized dual field
  std::vector<std::tuple<int, Expo, Scalar>> resonant;  // nonlinear resonant terms
  int order = 0;
  bool exact = true;
};

NormalForm2D poincare_dulac_normal_form(const FoliationGerm& g, int order);

struct SingularityClass {
  SingLabel label = SingLabel::unclassified;
  std::vector<Scalar> parameters;  // eigenvalues (2D) or residues (3D)
  std::vector<std::pair<std::string, Scalar>> named;  // echoed model parameters
  std::optional<Scalar> ratio;       // divisor-direction / transverse eigenvalue
  std::optional<Scalar> cs_residue;  // transverse / divisor-direction
  int evidence_order = 0;
  std::optional<int> obstruction_order;
  std::optional<NormalForm2D> normal_form;
  std::string note;
};

/// Classify a pre-simple germ against the formal models; 2-variable germs go
/// through the dual vector field, 3-variable germs through the logarithmic
/// model matchers or, for pulled-back family germs, their 2D shadow.
SingularityClass classify_simple_type(const FoliationGerm& g, int order = 12);

/// Classification of a logarithmic model 1-form (formal types A, B, C).
SingularityClass classify_log_model(const DiffForm& logform, int order = 12);

Verdict first_integral_local_verdict(const SingularityClass& cls);

/// Collapse a 3-variable pulled-back family germ (coefficients functions of
/// x^p y^q and the fiber variable) to its 2-variable shadow.
struct FamilyShadow {
  FoliationGerm shadow;  // 2-variable germ over (t, fiber)
  int p = 1, q = 1;      // detected exponents of f = x^p y^q
  int fiber_var = 2;
};
std::optional<FamilyShadow> collapse_family_germ(const FoliationGerm& g);

/// Try to reconstruct a rational from a double (continued fractions).
std::optional<Rational> rational_reconstruct(double x, double tol = 1e-9,
                                             long max_den = 100000);

}  // namespace dicrit
