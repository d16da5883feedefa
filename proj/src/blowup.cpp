#include "dicrit/blowup.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace dicrit {

FoliationGerm TransformResult::germ() const {
  FoliationGerm g;
  g.form = form;
  g.divisor = divisor;
  return g;
}

static std::string fresh_name(const VarSet& used, const std::string& wanted) {
  if (!wanted.empty()) {
    if (used.contains(wanted)) throw Error("variable name already used: " + wanted);
    return wanted;
  }
  for (const std::string& c : {"w", "v", "u", "s", "r"})
    if (!used.contains(c)) return c;
  for (int k = 1;; ++k) {
    std::string c = "w" + std::to_string(k);
    if (!used.contains(c)) return c;
  }
}

TransformResult blowup_point_2d(const FoliationGerm& g, BlowupChart2D chart,
                                const std::string& new_var) {
  if (g.vars().size() != 2) throw Error("point blow-up needs 2 variables");
  if (!g.singular_at_origin()) throw Error("nothing to blow up");

  const VarSet& cv = g.vars();
  int keep = chart == BlowupChart2D::main ? 0 : 1;
  int repl = 1 - keep;
  std::string nv = fresh_name(cv, new_var);
  VarSet dv = chart == BlowupChart2D::main ? VarSet{cv.name(0), nv}
                                           : VarSet{nv, cv.name(1)};
  int keep_d = keep;  // kept variable has the same index in the new chart
  int new_d = repl;
  // replaced variable = kept * new
  Expo e_keep = unit_expo(keep_d);
  Expo e_repl;
  e_repl[keep_d] = 1;
  e_repl[new_d] = 1;
  std::vector<Expo> expos(2);
  expos[static_cast<size_t>(keep)] = e_keep;
  expos[static_cast<size_t>(repl)] = e_repl;
  SubstitutionMap subst = SubstitutionMap::monomial(dv, cv, expos);

  DiffForm pulled = subst.pullback(g.form);
  Saturation sat = saturate(pulled);

  TransformResult r;
  r.chart.subst = subst;
  r.chart.label = cv.name(repl) + "=" + subst.component(repl).str();
  r.form = sat.form;
  r.cofactor = sat.cofactor;

  std::vector<int> divisor_vars{keep_d};
  if (g.on_divisor(repl)) divisor_vars.push_back(new_d);
  Expo cof = sat.cofactor.min_exponents();
  for (int dvar : divisor_vars) {
    DivisorComponent c;
    c.var = dvar;
    c.invariant = divisor_invariant(r.form, dvar);
    c.multiplicity = cof[dvar];
    r.divisor.push_back(c);
  }
  r.chart.divisor = r.divisor;
  return r;
}

static bool axis_in_singular_locus(const DiffForm& form, int v1, int v2) {
  for (int k = 0; k < form.basis_size(); ++k) {
    if (!form.coeff(k).restricted_var_zero(v1).restricted_var_zero(v2).is_zero())
      return false;
  }
  return true;
}

TransformResult blowup_axis_3d(const FoliationGerm& g, Axis3D axis, int count,
                               const std::string& fiber_name) {
  if (g.vars().size() != 3) throw Error("axis blow-up needs 3 variables");
  if (count < 0) throw Error("negative blow-up count");
  const VarSet& cv = g.vars();
  int axis_var = axis == Axis3D::x_axis ? 0 : 1;
  int div_var = axis == Axis3D::x_axis ? 1 : 0;
  int fiber = 2;

  std::string fname = fiber_name.empty() ? cv.name(fiber) : fiber_name;
  VarSet dv = fname == cv.name(fiber)
                  ? cv
                  : VarSet{cv.name(0), cv.name(1), fresh_name(cv, fname)};

  DiffForm cur = g.form;
  for (int step = 0; step < count; ++step) {
    if (!axis_in_singular_locus(cur, div_var, fiber))
      throw Error("axis not in singular locus");
    std::vector<Expo> expos(3);
    expos[0] = unit_expo(0);
    expos[1] = unit_expo(1);
    Expo ef = unit_expo(fiber);
    ef[div_var] = 1;
    expos[2] = ef;
    SubstitutionMap one = SubstitutionMap::monomial(cv, cv, expos);
    cur = saturate(one.pullback(cur)).form;
  }
  (void)axis_var;

  // Composite chart and a single clean saturation from the original.
  std::vector<Expo> expos(3);
  expos[0] = unit_expo(0);
  expos[1] = unit_expo(1);
  Expo ef = unit_expo(fiber);
  ef[div_var] = static_cast<int16_t>(count);
  expos[2] = ef;
  SubstitutionMap subst = SubstitutionMap::monomial(dv, cv, expos);

  TransformResult r;
  if (count == 0) {
    r.chart.subst = SubstitutionMap::identity(cv);
    r.chart.label = "identity";
    r.form = g.form;
    r.cofactor = TruncSeries::constant(cv, Scalar(1));
    r.divisor = g.divisor;
    r.chart.divisor = r.divisor;
    return r;
  }
  DiffForm pulled = subst.pullback(g.form);
  r.chart.subst = subst;
  r.chart.label = cv.name(fiber) + "=" + subst.component(fiber).str();
  Saturation sat = saturate(pulled);
  r.form = sat.form;
  r.cofactor = sat.cofactor;

  Expo cof = sat.cofactor.min_exponents();
  std::vector<int> divisor_vars{div_var};
  for (const auto& d : g.divisor)
    if (d.var != div_var && d.var != fiber) divisor_vars.push_back(d.var);
  std::sort(divisor_vars.begin(), divisor_vars.end());
  for (int dvar : divisor_vars) {
    DivisorComponent c;
    c.var = dvar;
    c.invariant = divisor_invariant(r.form, dvar);
    c.multiplicity = cof[dvar];
    r.divisor.push_back(c);
  }
  r.chart.divisor = r.divisor;
  return r;
}

TransformResult blowup_axis_chain(const FoliationGerm& g, int count_x, int count_y,
                                  const std::string& fiber_name) {
  TransformResult tx = blowup_axis_3d(g, Axis3D::x_axis, count_x, fiber_name);
  TransformResult ty = blowup_axis_3d(tx.germ(), Axis3D::y_axis, count_y, "");
  // Compose charts and recompute the cofactor against the original form.
  TransformResult r;
  r.chart.subst = compose(tx.chart.subst, ty.chart.subst);
  r.chart.label = g.vars().name(2) + "=" + r.chart.subst.component(2).str();
  r.form = ty.form;
  DiffForm pulled = r.chart.subst.pullback(g.form);
  Saturation sat = saturate(pulled);
  r.cofactor = sat.cofactor;
  if (sat.form != r.form) throw Error("axis chain saturation mismatch");
  Expo cof = r.cofactor.min_exponents();
  for (int dvar : {0, 1}) {
    DivisorComponent c;
    c.var = dvar;
    c.invariant = divisor_invariant(r.form, dvar);
    c.multiplicity = cof[dvar];
    r.divisor.push_back(c);
  }
  r.chart.divisor = r.divisor;
  return r;
}

std::vector<Scalar> univariate_roots(const TruncSeries& poly, int var) {
  for (int i = 0; i < poly.vars().size(); ++i)
    if (i != var && poly.max_exponent(i) > 0)
      throw Error("slice is not univariate");
  int deg = poly.max_exponent(var);
  std::vector<Scalar> coeff(static_cast<size_t>(deg) + 1, Scalar(0));
  for (const auto& [e, c] : poly.terms()) coeff[static_cast<size_t>(e[var])] = c;

  if (deg == 0) return {};
  bool exact = poly.is_exact();
  if (exact && deg == 1) return {-coeff[0] / coeff[1]};
  if (exact && deg == 2) {
    Scalar disc = coeff[1] * coeff[1] - Scalar(4) * coeff[2] * coeff[0];
    Scalar s = disc.sqrt();
    Scalar two_a = Scalar(2) * coeff[2];
    return {(-coeff[1] + s) / two_a, (-coeff[1] - s) / two_a};
  }

  // Companion-matrix roots.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(deg, deg);
  std::complex<double> lead = coeff[static_cast<size_t>(deg)].to_complex();
  for (int i = 0; i < deg; ++i) {
    if (i + 1 < deg) m(i + 1, i) = 1.0;
    m(i, deg - 1) = -coeff[static_cast<size_t>(i)].to_complex() / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<Scalar> roots;
  for (int i = 0; i < deg; ++i) {
    std::complex<double> r = es.eigenvalues()(i);
    bool dup = false;
    for (const auto& q : roots)
      if (std::abs(q.to_complex() - r) < 1e-8) dup = true;
    if (!dup) roots.emplace_back(r);
  }
  return roots;
}

/// Remove float constant terms that are numerical residue of translating to
/// a root found in float mode.
static FoliationGerm snap_singular_germ(FoliationGerm g) {
  for (int k = 0; k < g.form.basis_size(); ++k) {
    TruncSeries& c = g.form.coeff(k);
    Scalar c0 = c.constant_term();
    if (!c0.is_zero() && !c0.is_exact() &&
        c0.abs() < 1e-8 * (c.max_coeff_abs() + 1.0))
      c = c - TruncSeries::constant(c.vars(), c0);
  }
  return g;
}

static TruncSeries drop_to_vars(const TruncSeries& s, const VarSet& sub,
                                const std::vector<int>& keep) {
  TruncSeries r(sub, s.order());
  for (const auto& [e, c] : s.terms()) {
    Expo ne;
    for (size_t k = 0; k < keep.size(); ++k) ne[static_cast<int>(k)] = e[keep[k]];
    r.add_term(ne, c);
  }
  return r;
}

static DivisorSingularities divisor_points_2d(const TransformResult& t) {
  DivisorSingularities out;
  const DiffForm& f = t.form;
  const VarSet& vars = f.vars();
  for (const auto& comp : t.divisor) {
    int d = comp.var;
    int fib = 1 - d;
    TruncSeries rd = f.coeff_d(d).restricted_var_zero(d);
    TruncSeries rf = f.coeff_d(fib).restricted_var_zero(d);
    if (rd.is_zero() && rf.is_zero())
      throw Error("family not in expected shape: divisor inside singular locus");
    const TruncSeries& lead = rd.is_zero() ? rf : rd;
    const TruncSeries& other = rd.is_zero() ? rd : rf;
    for (const Scalar& w0 : univariate_roots(lead, fib)) {
      std::vector<Scalar> pt(2, Scalar(0));
      pt[static_cast<size_t>(fib)] = w0;
      if (!other.is_zero()) {
        Scalar v = other.eval_scalar(pt);
        if (v.is_exact() ? !v.is_zero() : v.abs() > 1e-9) continue;
      }
      bool dup = false;
      for (const auto& p : out.points)
        if ((p.point[static_cast<size_t>(fib)] - w0).abs() < 1e-8 &&
            p.point[static_cast<size_t>(d)].is_zero())
          dup = true;
      if (dup) continue;
      SingularPointOnDivisor sp;
      sp.point = pt;
      sp.corner = w0.is_zero() && t.divisor.size() > 1;
      sp.germ = snap_singular_germ(germ_at_point(t.germ(), pt));
      out.points.push_back(std::move(sp));
    }
  }
  (void)vars;
  return out;
}

static DivisorSingularities divisor_points_3d(const TransformResult& t) {
  DivisorSingularities out;
  const DiffForm& f = t.form;
  const VarSet& vars = f.vars();
  // Fiber variable: the one not defining any divisor component.
  std::vector<bool> is_div(static_cast<size_t>(vars.size()), false);
  for (const auto& c : t.divisor) is_div[static_cast<size_t>(c.var)] = true;
  int fib = -1;
  for (int i = 0; i < vars.size(); ++i)
    if (!is_div[static_cast<size_t>(i)]) fib = i;
  if (fib < 0) throw Error("family not in expected shape: no fiber variable");

  bool corner_curve = true;
  for (int k = 0; k < f.basis_size(); ++k) {
    TruncSeries r = f.coeff(k);
    for (const auto& c : t.divisor) r = r.restricted_var_zero(c.var);
    if (!r.is_zero()) corner_curve = false;
  }
  if (corner_curve && t.divisor.size() >= 2)
    out.curves.push_back(vars.name(t.divisor[0].var) + "=" +
                         vars.name(t.divisor[1].var) + "=0 (corner curve)");

  for (const auto& comp : t.divisor) {
    if (!comp.invariant) continue;
    int d = comp.var;
    // Induced foliation on the component: drop dx_d, divide the remaining
    // coefficient pair by its common power of x_d, restrict, saturate.
    std::vector<int> keep;
    for (int i = 0; i < vars.size(); ++i)
      if (i != d) keep.push_back(i);
    int common_pow = INT16_MAX;
    for (int j : keep) {
      const TruncSeries& c = f.coeff_d(j);
      common_pow = std::min(common_pow,
                            c.is_zero() ? INT16_MAX : c.min_exponents()[d]);
    }
    if (common_pow == INT16_MAX) common_pow = 0;
    VarSet sub{vars.name(keep[0]), vars.name(keep[1])};
    DiffForm induced(sub, 1, f.order());
    for (size_t k = 0; k < keep.size(); ++k) {
      TruncSeries c = f.coeff_d(keep[k]);
      if (!c.is_zero() && common_pow > 0)
        c = c.divided_by_monomial(unit_expo(d, common_pow));
      induced.coeff(static_cast<int>(k)) =
          drop_to_vars(c.restricted_var_zero(d), sub, keep);
    }
    if (induced.is_zero())
      throw Error("family not in expected shape: degenerate induced foliation");
    induced = saturate(induced).form;

    // Candidate points sit on the other divisor component.
    int other_div = -1;
    for (const auto& c2 : t.divisor)
      if (c2.var != d) other_div = c2.var;
    if (other_div < 0) continue;
    int other_sub = other_div == keep[0] ? 0 : 1;
    int fib_sub = 1 - other_sub;
    TruncSeries r0 = induced.coeff_d(other_sub).restricted_var_zero(other_sub);
    TruncSeries r1 = induced.coeff_d(fib_sub).restricted_var_zero(other_sub);
    if (r0.is_zero() && r1.is_zero())
      throw Error("family not in expected shape: non-isolated singularities");
    const TruncSeries& lead = r0.is_zero() ? r1 : r0;
    const TruncSeries& other = r0.is_zero() ? r0 : r1;
    for (const Scalar& w0 : univariate_roots(lead, fib_sub)) {
      std::vector<Scalar> sub_pt(2, Scalar(0));
      sub_pt[static_cast<size_t>(fib_sub)] = w0;
      if (!other.is_zero()) {
        Scalar v = other.eval_scalar(sub_pt);
        if (v.is_exact() ? !v.is_zero() : v.abs() > 1e-9) continue;
      }
      std::vector<Scalar> pt(3, Scalar(0));
      pt[static_cast<size_t>(fib)] = w0;
      bool dup = false;
      for (const auto& p : out.points)
        if ((p.point[static_cast<size_t>(fib)] - w0).abs() < 1e-8) dup = true;
      if (dup) continue;
      SingularPointOnDivisor sp;
      sp.point = pt;
      sp.corner = true;  // on the corner axis of the two divisor components
      sp.germ = snap_singular_germ(germ_at_point(t.germ(), pt));
      sp.note = "corner-axis point " + vars.name(fib) + "=" + w0.str();
      out.points.push_back(std::move(sp));

      // Singular curve through the point along the divisor component?
      bool curve = true;
      std::vector<Scalar> probe(3, Scalar(0));
      probe[static_cast<size_t>(fib)] = w0;
      probe[static_cast<size_t>(other_div)] = Scalar(Rational(1, 3));
      for (int k = 0; k < f.basis_size() && curve; ++k) {
        TruncSeries rr = f.coeff(k).restricted_var_zero(d);
        Scalar v = rr.eval_scalar(probe);
        if (v.is_exact() ? !v.is_zero() : v.abs() > 1e-9) curve = false;
      }
      if (curve)
        out.curves.push_back(vars.name(d) + "=0, " + vars.name(fib) + "=" + w0.str());
    }
  }
  return out;
}

DivisorSingularities singular_points_on_divisor(const TransformResult& t) {
  if (t.divisor.empty()) throw Error("transform has no divisor component");
  if (t.form.vars().size() == 2) return divisor_points_2d(t);
  return divisor_points_3d(t);
}

static bool linear_part_nilpotent_2d(const FoliationGerm& g) {
  VectorField x = dual_field_2d(g.form);
  auto entry = [&](int i, int j) {
    auto it = x.component(i).terms().find(unit_expo(j));
    return it == x.component(i).terms().end() ? Scalar(0) : it->second;
  };
  Scalar det = entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0);
  Scalar tr = entry(0, 0) + entry(1, 1);
  return det.is_zero() && tr.is_zero();
}

SpecialComponent resolve_to_special_component(const FoliationGerm& g0, int max_depth) {
  FoliationGerm cur = g0;
  int count = 0;
  for (int depth = 0; depth < max_depth; ++depth) {
    TransformResult t = blowup_point_2d(cur, BlowupChart2D::main,
                                        "w" + std::to_string(depth + 1));
    ++count;
    DivisorSingularities sing = singular_points_on_divisor(t);

    // Germ at the divisor point w = infinity (origin of the other chart).
    TransformResult t_other = blowup_point_2d(cur, BlowupChart2D::other,
                                              "v" + std::to_string(depth + 1));
    FoliationGerm inf_germ = t_other.germ();
    bool inf_singular = inf_germ.singular_at_origin();

    std::vector<const SingularPointOnDivisor*> nilpotent;
    for (const auto& p : sing.points)
      if (linear_part_nilpotent_2d(p.germ)) nilpotent.push_back(&p);
    bool inf_nilpotent = inf_singular && linear_part_nilpotent_2d(inf_germ);

    if (nilpotent.empty() && !inf_nilpotent) {
      SpecialComponent sc;
      sc.last = t;
      sc.divisor_var = 0;
      sc.coord_var = 1;
      sc.blowup_count = count;
      for (const auto& p : sing.points) {
        MarkedPoint m;
        m.location = p.point[1];
        m.corner = p.corner;
        m.germ = p.germ;
        sc.points.push_back(std::move(m));
      }
      sc.infinity_germ = inf_germ;
      sc.infinity_singular = inf_singular;
      if (inf_singular) {
        MarkedPoint m;
        m.at_infinity = true;
        m.corner = true;
        m.germ = inf_germ;
        sc.points.push_back(std::move(m));
      }
      return sc;
    }
    if (nilpotent.size() + (inf_nilpotent ? 1 : 0) > 1)
      throw Error("family not in expected shape: several nilpotent points");
    cur = nilpotent.empty() ? inf_germ : nilpotent.front()->germ;
  }
  throw Error("reduction did not terminate within depth bound");
}

SpecialComponent family_special_component(const DiffForm& omega2d, int p) {
  if (omega2d.vars().size() != 2) throw Error("family form must have 2 variables");
  if (p < 1) throw Error("blow-up count must be positive");
  const VarSet& cv = omega2d.vars();
  std::string wn = fresh_name(cv, "w");
  VarSet dv{cv.name(0), wn};
  Expo ez;
  ez[0] = static_cast<int16_t>(p);
  ez[1] = 1;
  SubstitutionMap subst = SubstitutionMap::monomial(dv, cv, {unit_expo(0), ez});

  Saturation sat = saturate(subst.pullback(omega2d));
  TransformResult t;
  t.chart.subst = subst;
  t.chart.label = cv.name(1) + "=" + subst.component(1).str();
  t.form = sat.form;
  t.cofactor = sat.cofactor;
  DivisorComponent dc;
  dc.var = 0;
  dc.invariant = divisor_invariant(t.form, 0);
  dc.multiplicity = sat.cofactor.min_exponents()[0];
  t.divisor.push_back(dc);
  t.chart.divisor = t.divisor;

  SpecialComponent sc;
  sc.last = t;
  sc.divisor_var = 0;
  sc.coord_var = 1;
  sc.blowup_count = p;
  for (const auto& pt : singular_points_on_divisor(t).points) {
    MarkedPoint m;
    m.location = pt.point[1];
    m.corner = pt.corner;
    m.germ = pt.germ;
    sc.points.push_back(std::move(m));
  }

  // Divisor point w = infinity: last-step other chart after p-1 main steps.
  {
    VarSet ov{"vo", cv.name(1)};
    Expo et;  // t = vo * z
    et[0] = 1;
    et[1] = 1;
    Expo ez2;  // z = (vo z)^{p-1} z
    ez2[0] = static_cast<int16_t>(p - 1);
    ez2[1] = static_cast<int16_t>(p);
    SubstitutionMap far = SubstitutionMap::monomial(ov, cv, {et, ez2});
    Saturation fs = saturate(far.pullback(omega2d));
    FoliationGerm fg;
    fg.form = fs.form;
    DivisorComponent c0;
    c0.var = 1;  // exceptional D_p = {z-coordinate = 0} in the far chart
    c0.invariant = divisor_invariant(fs.form, 1);
    c0.multiplicity = fs.cofactor.min_exponents()[1];
    fg.divisor.push_back(c0);
    if (p >= 2) {
      DivisorComponent c1;
      c1.var = 0;  // previous component D_{p-1}
      c1.invariant = divisor_invariant(fs.form, 0);
      c1.multiplicity = fs.cofactor.min_exponents()[0];
      fg.divisor.push_back(c1);
    }
    sc.infinity_germ = fg;
    sc.infinity_singular = fg.singular_at_origin();
    if (sc.infinity_singular) {
      MarkedPoint m;
      m.at_infinity = true;
      m.corner = p >= 2;
      m.germ = fg;
      sc.points.push_back(std::move(m));
    }
  }
  return sc;
}

}  // namespace dicrit
