#pragma once

#include "dicrit/germ.hpp"

namespace dicrit {

/// A monomial-affine chart with exceptional-divisor bookkeeping.
struct ChartMap {
  SubstitutionMap subst;  // chart coordinates -> source coordinates
  std::vector<DivisorComponent> divisor;
  std::string label;
};

struct TransformResult {
  ChartMap chart;
  DiffForm form;        // saturated strict transform
  TruncSeries cofactor; // pullback(chart, original) = cofactor * form
  std::vector<DivisorComponent> divisor;

  FoliationGerm germ() const;
};

enum class BlowupChart2D { main, other };

/// One point blow-up of the origin of a 2-variable germ.
/// main: (t, z) -> (t, t*w); other: (t, z) -> (v*z, z).
TransformResult blowup_point_2d(const FoliationGerm& g, BlowupChart2D chart,
                                const std::string& new_var = "");

enum class Axis3D { x_axis, y_axis };

/// `count` blow-ups of a coordinate axis of a 3-variable germ, in the chart
/// where the fiber variable is divided by the divisor variable each step
/// (x-axis: z -> y^count * z).
TransformResult blowup_axis_3d(const FoliationGerm& g, Axis3D axis, int count,
                               const std::string& fiber_name = "");

/// x-axis `count_x` times then y-axis `count_y` times; composite chart
/// z = x^{count_y} y^{count_x} w.
TransformResult blowup_axis_chain(const FoliationGerm& g, int count_x, int count_y,
                                  const std::string& fiber_name = "w");

struct SingularPointOnDivisor {
  std::vector<Scalar> point;
  FoliationGerm germ;  // germ re-centered at the point
  bool corner = false;
  std::string note;
};

struct DivisorSingularities {
  std::vector<SingularPointOnDivisor> points;
  std::vector<std::string> curves;  // recognized singular curves
};

/// Singular points of the transform on its divisor: isolated points with
/// translated germs plus the family's recognized singular curves.
DivisorSingularities singular_points_on_divisor(const TransformResult& t);

/// Roots of a univariate polynomial slice.  Exact for degree <= 2 with exact
/// scalars; floating companion-matrix roots otherwise (deduplicated at 1e-8).
std::vector<Scalar> univariate_roots(const TruncSeries& poly, int var);

struct MarkedPoint {
  Scalar location;  // divisor coordinate (finite points)
  bool at_infinity = false;
  bool corner = false;
  FoliationGerm germ;
};

/// The last divisor component of a 2D reduction, with its marked points.
struct SpecialComponent {
  TransformResult last;  // final main-chart transform
  int divisor_var = 0;   // exceptional variable (transversal fiber coordinate)
  int coord_var = 1;     // coordinate along the component
  std::vector<MarkedPoint> points;
  int blowup_count = 0;
  FoliationGerm infinity_germ;  // germ at the divisor point w = infinity
  bool infinity_singular = false;
};

/// Blow up a 2-variable germ at nilpotent points until every singular point
/// on the last component is non-nilpotent; returns that component.
SpecialComponent resolve_to_special_component(const FoliationGerm& g, int max_depth = 12);

/// Composite p-fold point blow-up (t, z) -> (t, t^p w) of a 2D nilpotent
/// family form, with marked points on the last component.
SpecialComponent family_special_component(const DiffForm& omega2d, int p);

}  // namespace dicrit
