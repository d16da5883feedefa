#pragma once

#include <vector>

#include "dicrit/series.hpp"

namespace dicrit {

/// Sorted index tuples for the degree-d wedge basis over n variables.
const std::vector<std::vector<int>>& wedge_basis(int nvars, int deg);

/// A differential form of degree 0..3 with TruncSeries coefficients.
/// Degree-1 forms may carry a logarithmic presentation
///   omega = sum_{pole} a_i dx_i/x_i + sum_{rest} a_i dx_i.
class DiffForm {
 public:
  DiffForm() = default;
  DiffForm(VarSet vars, int degree, int order = kInfOrder);

  static DiffForm from_series(const TruncSeries& s);  // degree 0
  static DiffForm differential(const VarSet& vars, int var, int order = kInfOrder);

  const VarSet& vars() const { return vars_; }
  int degree() const { return degree_; }
  int order() const;
  bool logarithmic() const { return !pole_.empty(); }
  const std::vector<bool>& pole_flags() const { return pole_; }

  int basis_size() const { return static_cast<int>(coeffs_.size()); }
  const TruncSeries& coeff(int k) const { return coeffs_[static_cast<size_t>(k)]; }
  TruncSeries& coeff(int k) { return coeffs_[static_cast<size_t>(k)]; }
  const std::vector<TruncSeries>& coeffs() const { return coeffs_; }

  /// Coefficient of dx_i (degree-1 forms).
  const TruncSeries& coeff_d(int var) const;

  bool is_zero() const;
  bool is_exact_data() const;

  DiffForm operator-() const;
  friend DiffForm operator+(const DiffForm& a, const DiffForm& b);
  friend DiffForm operator-(const DiffForm& a, const DiffForm& b);
  DiffForm& operator+=(const DiffForm& b) { return *this = *this + b; }
  DiffForm scaled(const Scalar& c) const;
  DiffForm multiplied(const TruncSeries& s) const;
  DiffForm truncated(int order) const;
  DiffForm to_float() const;

  bool operator==(const DiffForm& o) const {
    return vars_ == o.vars_ && degree_ == o.degree_ && coeffs_ == o.coeffs_ &&
           pole_ == o.pole_;
  }
  bool operator!=(const DiffForm& o) const { return !(*this == o); }

  /// Build a logarithmic 1-form from per-variable coefficients and pole flags.
  static DiffForm logarithmic_1form(const VarSet& vars, std::vector<TruncSeries> a,
                                    std::vector<bool> pole);

  /// Logarithmic -> holomorphic presentation of the same form: multiplies
  /// through by the product of the poles.  Lossless up to that monomial.
  DiffForm cleared_poles() const;

  /// Holomorphic -> logarithmic presentation: a_i = x_i * c_i on flagged
  /// variables.  Coefficient-level inverse of the presentation change.
  DiffForm with_log_presentation(const std::vector<bool>& pole) const;
  DiffForm with_holomorphic_presentation() const;

  std::string str() const;

 private:
  VarSet vars_;
  int degree_ = 0;
  std::vector<TruncSeries> coeffs_;
  std::vector<bool> pole_;  // degree-1 log presentation flags, empty when holomorphic
};

struct VectorField {
  VarSet vars;
  std::vector<TruncSeries> components;

  VectorField() = default;
  VectorField(VarSet v, std::vector<TruncSeries> comps);
  const TruncSeries& component(int i) const { return components[static_cast<size_t>(i)]; }
};

DiffForm exterior_derivative(const DiffForm& w);
DiffForm exterior_derivative(const TruncSeries& f);
DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm interior_product(const VectorField& X, const DiffForm& w);

struct Saturation {
  DiffForm form;        // the saturated form
  TruncSeries cofactor; // maximal common monomial factor removed
};
/// Remove the maximal common monomial factor of all coefficients.
Saturation saturate(const DiffForm& w);

/// omega ^ d(omega); identically zero (to truncation) for integrable 1-forms.
DiffForm integrability_residual(const DiffForm& w);

/// Dual vector field of a 2-variable 1-form A dx + B dy: X = -B d/dx + A d/dy.
VectorField dual_field_2d(const DiffForm& w);

}  // namespace dicrit
