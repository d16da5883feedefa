#pragma once

#include <functional>
#include <memory>

#include "dicrit/criteria.hpp"

namespace dicrit {

struct HolonomySettings {
  double rk_tol = 1e-10;        // local error per unit arc
  double max_step = 0.01;       // max parameter step (~ pi/50 radians on loops)
  double escape_radius = 2.0;   // lift escaping the polydisk aborts
  double tol_hold = 1e-6;
  double tol_fail = 1e-2;
  int max_order = 12;           // periodicity search bound
  double probe_t0 = 0.05;
};

/// A value with continuously tracked argument (branch bookkeeping).
struct BranchedValue {
  std::complex<double> value;
  double arg = 0.0;  // continuous argument, not reduced mod 2pi

  static BranchedValue principal(std::complex<double> v) {
    return {v, std::arg(v)};
  }
};

struct LoopSpec {
  int component_var = 0;          // defining variable of the divisor component
  Scalar center;                  // encircled point on the component
  double radius = 0.5;
  std::complex<double> basepoint; // basepoint on the component
  int orientation = +1;           // +1 = counterclockwise
  bool around_infinity = false;   // big circle containing all finite points
};

/// Numeric path lifting through the leaves of a 2-variable germ along a
/// divisor component.
class LiftContext {
 public:
  LiftContext(const FoliationGerm& g, int divisor_var, HolonomySettings settings);

  int divisor_var() const { return divisor_var_; }
  int coord_var() const { return coord_var_; }
  const HolonomySettings& settings() const { return settings_; }

  /// Lift over a path s(u), u in [0,1]; returns the endpoint fiber value with
  /// the accumulated winding.
  BranchedValue lift_path(const std::function<std::complex<double>(double)>& path,
                          const std::function<std::complex<double>(double)>& dpath,
                          BranchedValue t0) const;

  /// Lift around a loop (lasso: segment to the circle, circle, segment back).
  BranchedValue lift_loop(const LoopSpec& loop, BranchedValue t0) const;

 private:
  struct Term {
    std::array<int, 2> e;
    std::complex<double> c;
  };
  std::complex<double> eval(const std::vector<Term>& p, std::complex<double> t,
                            std::complex<double> s) const;
  std::vector<Term> c_fiber_, c_coord_;
  int divisor_var_, coord_var_;
  HolonomySettings settings_;
  double scale_ = 1.0;
};

/// Endpoint of the unique lift of a loop starting at t0 on the transversal.
Scalar lift_loop(const FoliationGerm& g, const LoopSpec& loop, const Scalar& t0,
                 const HolonomySettings& settings = {});

/// A holonomy return map: a composition of loop lifts over one context.
class HolonomyMap {
 public:
  HolonomyMap() = default;
  HolonomyMap(std::shared_ptr<const LiftContext> ctx, LoopSpec loop);

  BranchedValue evaluate(BranchedValue t0) const;
  std::complex<double> operator()(std::complex<double> t0) const {
    return evaluate(BranchedValue::principal(t0)).value;
  }

  HolonomyMap inverse() const;
  /// Concatenation of loops: (a.then(b))(t) = b(a(t)).
  HolonomyMap then(const HolonomyMap& b) const;

  /// Derivative at 0 by Richardson extrapolation over t0, t0/2, t0/4.
  std::complex<double> multiplier(double t0 = 0.05) const;

  /// Least-squares polynomial fit h(t) ~ m t + c2 t^2 + c3 t^3 on samples.
  std::vector<std::complex<double>> series_fit(double t0 = 0.05) const;

  /// Smallest k <= max_order with |h^k(t0) - t0| < tol; residual reported.
  std::optional<int> periodicity_order(double t0, double tol, int max_order,
                                       double* residual = nullptr) const;

  bool empty() const { return steps_.empty(); }

 private:
  struct Step {
    LoopSpec loop;
    bool inverted = false;
  };
  std::shared_ptr<const LiftContext> ctx_;
  std::vector<Step> steps_;
};

struct GeneratorInfo {
  std::string label;
  std::optional<Scalar> center;
  bool at_infinity = false;
  std::complex<double> multiplier;
  std::optional<int> order;   // periodicity order if found
  double order_residual = 0.0;
  std::optional<std::complex<double>> predicted;  // e^{2 pi i CS} when known
};

struct HolonomyGenerators {
  std::shared_ptr<const LiftContext> ctx;
  std::vector<HolonomyMap> generators;
  std::vector<GeneratorInfo> info;
  std::complex<double> basepoint;
  HolonomyProbe probe;  // filled by probe_group
};

/// One generator per marked point of the special component (the point at
/// infinity contributes a reversed big circle).
HolonomyGenerators holonomy_generators(const SpecialComponent& sc,
                                       const HolonomySettings& settings = {});

/// Periodicity orders and pairwise commutators of the generators.
HolonomyProbe probe_group(HolonomyGenerators& gens);

/// Dulac map branch D(t) = t^{p/q} with continuous argument tracking.
BranchedValue dulac_map(int p, int q, const BranchedValue& t);

struct CornerData {
  int p = 1, q = 1;  // residues of the resonant linearizable corner model
};

/// Adjunction of a holonomy map across a corner: h -> D^{-1} o h o D with
/// D(t) = t^{p/q}; for linear h(t) = e^{-2 pi i p/q} t the result is xi t
/// with xi^q = 1.
struct AdjoinedMap {
  CornerData corner;
  HolonomyMap h;
  BranchedValue evaluate(const BranchedValue& s) const;
  std::complex<double> multiplier(double t0 = 0.05) const;
};
AdjoinedMap adjoin(const CornerData& corner, const HolonomyMap& h);

/// A one-variable rational function num/den used for invariance tests.
struct RationalFn {
  TruncSeries num, den;  // one-variable polynomials
  std::complex<double> eval(std::complex<double> t) const;
  bool near_pole(std::complex<double> t, double tol = 1e-8) const;
};

Verdict invariant_rational_test(const std::vector<HolonomyMap>& gens,
                                const RationalFn& r,
                                const std::vector<std::complex<double>>& samples,
                                double tol_hold = 1e-6, double tol_fail = 1e-2);

}  // namespace dicrit
