#include "dicrit/integral.hpp"

#include <numeric>

#include "dicrit/parser.hpp"

namespace dicrit {

bool MeroFunction::is_constant() const {
  if (num.is_zero()) return true;
  if (num.is_constant() && den.is_constant()) return true;
  // num = c * den?
  const auto& lead = *num.terms().begin();
  auto it = den.terms().find(lead.first);
  if (it == den.terms().end()) return false;
  Scalar c = lead.second / it->second;
  return num == den.scaled(c);
}

MeroFunction MeroFunction::cleared() const {
  Expo mn = num.min_exponents();
  Expo md = den.min_exponents();
  Expo g;
  for (int i = 0; i < kMaxVars; ++i) g[i] = std::min(mn[i], md[i]);
  if (g.total() == 0) return *this;
  return MeroFunction{num.divided_by_monomial(g), den.divided_by_monomial(g)};
}

MeroFunction parse_mero(const std::string& text, const VarSet& vars, int order) {
  ParsedValue v = parse_value(text, vars, order);
  if (v.num.degree() != 0) throw Error("expected a function, found a form");
  MeroFunction f{v.num.coeff(0), v.den};
  if (f.den.is_zero()) throw Error("zero denominator");
  return f.cleared();
}

Verdict verify_first_integral(const MeroFunction& f, const DiffForm& omega,
                              int min_certify_order) {
  if (f.is_constant())
    return Verdict::make(Outcome::fails, "first-integral",
                         "candidate is constant");
  DiffForm g = exterior_derivative(f.num).multiplied(f.den) -
               exterior_derivative(f.den).multiplied(f.num);
  DiffForm res = wedge(g, omega.logarithmic() ? omega.cleared_poles() : omega);
  int valid = res.order();
  if (!res.is_zero()) {
    Verdict v = Verdict::make(Outcome::fails, "first-integral",
                              "dF ^ Omega has a nonzero term");
    v.order = valid;
    double mx = 0;
    for (int k = 0; k < res.basis_size(); ++k)
      mx = std::max(mx, res.coeff(k).max_coeff_abs());
    v.residual = mx;
    return v;
  }
  if (valid != kInfOrder && valid < min_certify_order) {
    Verdict v = Verdict::make(Outcome::inconclusive, "first-integral",
                              "truncation order too low to certify; need order " +
                                  std::to_string(min_certify_order));
    v.order = valid;
    return v;
  }
  Verdict v = Verdict::make(Outcome::holds, "first-integral",
                            valid == kInfOrder
                                ? "dF ^ Omega = 0 exactly (denominator cleared)"
                                : "dF ^ Omega = 0 through the working order");
  if (valid != kInfOrder) v.order = valid;
  v.residual = 0.0;
  return v;
}

MeroFunction pullback_integral(const MeroFunction& f, const SubstitutionMap& phi) {
  TruncSeries num = phi.pullback(f.num);
  TruncSeries den = phi.pullback(f.den);
  if (den.is_zero())
    throw Error("denominator vanishes identically under the substitution");
  return MeroFunction{num, den}.cleared();
}

std::string PuiseuxCurve::str() const {
  std::string out;
  for (int i = 0; i < target.size(); ++i) {
    if (i) out += ", ";
    out += target.name(i) + "(s) = ";
    const TruncSeries& c = components[static_cast<size_t>(i)];
    if (c.is_zero()) {
      out += "0";
      continue;
    }
    bool first = true;
    for (const auto& [e, coef] : c.terms()) {
      std::string cs = coef.str();
      if (!first && !cs.empty() && cs[0] != '-') out += "+";
      first = false;
      out += cs;
      int ex = e[0];
      if (ex != 0) {
        out += "*s^";
        if (ex % denominator == 0) {
          out += std::to_string(ex / denominator);
        } else {
          out += "(" + std::to_string(ex) + "/" + std::to_string(denominator) + ")";
        }
      }
    }
  }
  return out;
}

Verdict verify_separatrix(const PuiseuxCurve& curve, const DiffForm& omega) {
  VarSet uv{curve.param};
  SubstitutionMap map(uv, curve.target, curve.components);
  DiffForm pulled = map.pullback(omega.logarithmic() ? omega.cleared_poles() : omega);
  int valid = pulled.order();
  if (!pulled.is_zero()) {
    Verdict v = Verdict::make(Outcome::fails, "separatrix",
                              "the parameterization does not annihilate the form");
    v.residual = pulled.coeff(0).max_coeff_abs();
    return v;
  }
  if (valid != kInfOrder && valid < 2) {
    Verdict v = Verdict::make(Outcome::inconclusive, "separatrix",
                              "truncation order too low");
    v.order = valid;
    return v;
  }
  Verdict v = Verdict::make(Outcome::holds, "separatrix",
                            "the curve annihilates the form to the working order");
  if (valid != kInfOrder) v.order = valid;
  return v;
}

// ---------------------------------------------------------------------------
// separatrix family through the dicritical point

namespace {

struct P1Data {
  FamilyClassification fc;
  const SingularityClass* p1 = nullptr;
  Scalar alpha1, alpha2;
  long s1 = 1, s2 = 1;  // quotient at P1 = s2/s1 in lowest terms
};

P1Data p1_data(const FamilyParams& fp, int order) {
  P1Data d;
  d.fc = family_classify(fp, order);
  if (d.fc.cls != FamilyClass::resonant_dicritical_candidate)
    throw Error("no dicritical family: classification is " +
                family_class_str(d.fc.cls));
  d.p1 = &*d.fc.p1_class;
  auto roots = alpha_roots_labeled(fp.n, fp.alpha_value());
  d.alpha1 = roots.first;
  d.alpha2 = roots.second;
  Rational q = d.fc.quotient_p1->rational();
  d.s2 = boost::multiprecision::numerator(q).convert_to<long>();
  d.s1 = boost::multiprecision::denominator(q).convert_to<long>();
  return d;
}

/// Curve (T, v) = to_germ(u^{s1}, C u^{s2}) in the P1 germ coordinates,
/// then w = v + alpha1, (t, z) = (T, T^p w).
std::pair<TruncSeries, TruncSeries> curve_2d_components(const FamilyParams& fp,
                                                        const P1Data& d,
                                                        const Scalar& c, int order,
                                                        const VarSet& uv) {
  const NormalForm2D& nf = *d.p1->normal_form;
  int ram_order = order * static_cast<int>(d.s1) + 4;
  TruncSeries uhat = TruncSeries::monomial(uv, unit_expo(0, static_cast<int>(d.s1)),
                                           Scalar(1), ram_order);
  TruncSeries vhat = TruncSeries::monomial(uv, unit_expo(0, static_cast<int>(d.s2)),
                                           c, ram_order);
  // the leaf v = C T^{s2/s1} lives along the eigendirection pair; match the
  // quotient to the normal-form eigenvalue order
  Scalar ratio21 = nf.eigenvalues.second / nf.eigenvalues.first;
  Scalar target = Scalar(Rational(d.s2)) / Scalar(Rational(d.s1));
  bool swapped = !(ratio21 == target || (ratio21 - target).abs() < 1e-9);
  std::vector<TruncSeries> curve =
      swapped ? std::vector<TruncSeries>{vhat, uhat}
              : std::vector<TruncSeries>{uhat, vhat};
  TruncSeries T = nf.to_germ.component(0).truncated(order).substituted(curve);
  TruncSeries v = nf.to_germ.component(1).truncated(order).substituted(curve);
  TruncSeries w = v + TruncSeries::constant(uv, d.alpha1, ram_order);
  TruncSeries t2d = T.truncated(ram_order);
  TruncSeries z2d = (T.pow(fp.n) * w).truncated(ram_order);
  return {t2d, z2d};
}

}  // namespace

PuiseuxCurve separatrix_family(const FamilyParams& fp, const Scalar& c, int order) {
  P1Data d = p1_data(fp, order);
  VarSet uv{"s"};
  auto [t2d, z2d] = curve_2d_components(fp, d, c, order, uv);
  PuiseuxCurve out;
  out.param = "s";
  out.denominator = static_cast<int>(d.s1);
  out.target = VarSet{"t", "z"};
  out.components = {t2d, z2d};
  out.order = std::min(t2d.order(), z2d.order());
  return out;
}

SubstitutionMap separatrix_surface(const FamilyParams& fp, const Scalar& c, int order) {
  P1Data d = p1_data(fp, order);
  if (d.s1 != 1)
    throw Error("surface form needs an integer quotient denominator");
  VarSet uv{"s"};
  auto [t2d, z2d] = curve_2d_components(fp, d, c, order, uv);
  // reparameterize as a graph z = g(t): invert t(s) = s (1 + ...)
  TruncSeries ts = t2d;
  // Lagrange-style inversion by iteration: s = t * h(t)
  VarSet tv{"tpar"};
  int n = ts.order() == kInfOrder ? order + 4 : ts.order();
  TruncSeries s_of_t = TruncSeries::variable(tv, 0, n);
  for (int it = 0; it < n + 2; ++it) {
    std::vector<TruncSeries> img{s_of_t};
    TruncSeries err = ts.substituted(img).truncated(n) - TruncSeries::variable(tv, 0, n);
    if (err.is_zero()) break;
    s_of_t = s_of_t - err;
  }
  std::vector<TruncSeries> img{s_of_t};
  TruncSeries graph = z2d.substituted(img).truncated(n);  // z as a series in tpar

  // z(x, y) = graph(f), f = x^p y^q
  VarSet xy{"x", "y"};
  Expo ef;
  ef[0] = static_cast<int16_t>(fp.p);
  ef[1] = static_cast<int16_t>(fp.q);
  TruncSeries f = TruncSeries::monomial(xy, ef, Scalar(1), n);
  std::vector<TruncSeries> fimg{f};
  TruncSeries zxy = graph.substituted(fimg);
  std::vector<TruncSeries> comps{TruncSeries::variable(xy, 0, zxy.order()),
                                 TruncSeries::variable(xy, 1, zxy.order()), zxy};
  return SubstitutionMap(xy, VarSet{"x", "y", "z"}, comps);
}

PuiseuxCurve separatrix_diagonal_3d(const FamilyParams& fp, const Scalar& c,
                                    int order) {
  SubstitutionMap surf = separatrix_surface(fp, c, order);
  VarSet uv{"s"};
  int n = surf.component(2).order();
  TruncSeries s = TruncSeries::variable(uv, 0, n);
  std::vector<TruncSeries> diag{s, s};
  PuiseuxCurve out;
  out.param = "s";
  out.denominator = 1;
  out.target = surf.codomain();
  for (int i = 0; i < 3; ++i)
    out.components.push_back(surf.component(i).substituted(diag).truncated(n));
  out.order = n;
  return out;
}

// ---------------------------------------------------------------------------
// rectification

TruncSeries rectify(const DiffForm& omega, int order) {
  if (omega.degree() != 1 || omega.vars().size() != 2)
    throw Error("rectify needs a 2-variable 1-form");
  const VarSet& vars = omega.vars();
  TruncSeries a = omega.coeff_d(0);
  if (!a.is_unit())
    throw Error("form is not regular with a unit dt coefficient");
  TruncSeries b = (omega.coeff_d(1) * a.inverse(order)).truncated(order);
  if (b.is_zero())
    return TruncSeries::constant(vars, Scalar(1), order);
  if (!b.divisible_by(unit_expo(0)))
    throw Error("axis not invariant; choose other axis convention");
  TruncSeries bhat = b.divided_by_monomial(unit_expo(0));

  TruncSeries b0 = bhat.restricted_var_zero(0);  // series in z only
  TruncSeries mu = b0.antiderivative(1).exp(order);       // exp(int B0 dz)
  TruncSeries mu_inv = mu.inverse(order);

  TruncSeries s1 = TruncSeries::zero(vars, order);
  for (int k = 0; k <= order; ++k) {
    // residual of d/dz S1 + S1 * Bhat(t S1, z) with the current S1
    TruncSeries ts1 = (TruncSeries::variable(vars, 0, order) * s1).truncated(order);
    std::vector<TruncSeries> args{ts1, TruncSeries::variable(vars, 1, order)};
    TruncSeries res =
        (s1.derivative(1) + s1 * bhat.substituted(args)).truncated(order);
    // t^k slice of the residual, as a series in z
    TruncSeries rk(vars, order);
    for (const auto& [e, cc] : res.terms())
      if (e[0] == k) rk.add_term(unit_expo(1, e[1]), cc);
    if (k == 0) {
      // s_0' + B0 s_0 = 0, s_0(0) = 1
      TruncSeries s0 = mu_inv;
      s1 += s0;
      continue;
    }
    if (rk.is_zero()) continue;
    // s_k' + B0 s_k = -r_k, s_k(0) = 0
    TruncSeries rhs = (mu * rk).truncated(order).antiderivative(1);
    TruncSeries sk = (-(mu_inv * rhs)).truncated(order);
    TruncSeries tk = TruncSeries::monomial(vars, unit_expo(0, k), Scalar(1), order);
    s1 += (tk * sk).truncated(order);
  }
  return s1.truncated(order);
}

// ---------------------------------------------------------------------------
// the dicriticalness section

namespace {

struct SectionCore {
  SubstitutionMap section2d;  // (t, z) -> original 2D coordinates
  TruncSeries S1;
  long n1, m1, n2, m2;
  Scalar alpha1;
  Expo cofactor;  // monomial removed when saturating the corner-chart pullback
};

/// Build E o S for the 2D family at P1, in raw P1 coordinates; the rectifier
/// S1 absorbs the nonlinear part.
SectionCore section_core_2d(const FamilyParams& fp, int order) {
  P1Data d = p1_data(fp, order);
  long s1 = d.s1, s2 = d.s2;
  // (m1, m2) = (s1, s2); Bezout n1 s2 - n2 s1 = 1
  long n1 = -1, n2 = -1;
  for (long cand = 0; cand < s2 || cand == 0; ++cand) {
    if ((1 + s1 * cand) % s2 == 0) {
      n2 = cand;
      n1 = (1 + s1 * cand) / s2;
      break;
    }
  }
  if (n1 < 0) throw Error("no unimodular chart for the quotient");

  const FoliationGerm* p1_germ = nullptr;
  DiffForm w2 = family_2d_form(fp, order + 6);
  SpecialComponent sc = family_special_component(w2, fp.n);
  FoliationGerm stored;
  for (const auto& m : sc.points)
    if (!m.at_infinity && (m.location - d.alpha1).abs() < 1e-8) {
      stored = m.germ;
      p1_germ = &stored;
    }
  if (!p1_germ) throw Error("family not in expected shape: P1 not found");

  // E3: (T, v) = (t^{n1} z^{m1}, t^{n2} z^{m2}) into the P1 chart
  VarSet tz{"t", "z"};
  Expo eT, ev;
  eT[0] = static_cast<int16_t>(n1);
  eT[1] = static_cast<int16_t>(s1);
  ev[0] = static_cast<int16_t>(n2);
  ev[1] = static_cast<int16_t>(s2);
  SubstitutionMap e3 = SubstitutionMap::monomial(tz, p1_germ->vars(), {eT, ev});

  DiffForm pulled = e3.pullback(p1_germ->form);
  bool raw_ok = false;
  DiffForm eta;
  Expo cof;
  if (!pulled.is_zero()) {
    Saturation sat = saturate(pulled);
    eta = sat.form;
    cof = sat.cofactor.min_exponents();
    raw_ok = eta.coeff_d(0).is_unit();
  }
  if (!raw_ok) {
    // linearize first, then apply the monomial chart
    const NormalForm2D& nf = *d.p1->normal_form;
    SubstitutionMap lin_then_e3 = compose(nf.to_germ, e3);
    pulled = lin_then_e3.pullback(p1_germ->form);
    Saturation sat = saturate(pulled);
    eta = sat.form;
    cof = sat.cofactor.min_exponents();
    if (!eta.coeff_d(0).is_unit())
      throw Error("family not in expected shape: corner chart not regular");
    e3 = lin_then_e3;
  }

  TruncSeries S1 = rectify(eta, order);
  TruncSeries tS1 = (TruncSeries::variable(tz, 0, order) * S1).truncated(order + 2);
  std::vector<TruncSeries> scomp{tS1, TruncSeries::variable(tz, 1, order + 2)};
  SubstitutionMap s_map(tz, tz, scomp);

  // blow-down and translation back to the original 2D coordinates
  // (t2d, z2d) = (T, T^p (v + alpha1)) evaluated on E3 o S
  SubstitutionMap e3s = compose(e3, s_map);
  TruncSeries T = e3s.component(0).truncated(order + 2);
  TruncSeries v = e3s.component(1).truncated(order + 2);
  TruncSeries w = v + TruncSeries::constant(tz, d.alpha1);
  TruncSeries t2d = T;
  TruncSeries z2d = (T.pow(fp.n) * w).truncated(order + 2);
  SectionCore core{
      SubstitutionMap(tz, VarSet{"t2", "z2"}, {t2d, z2d}),
      S1,
      n1,
      s1,
      n2,
      s2,
      d.alpha1,
      cof};
  return core;
}

SubstitutionMap lift_section(const SectionCore& core, int e1, int e2, int order) {
  // ramification phi = (t^{e1}, z^{e2}); the first 2D component becomes
  // t^{e1 n1} z^{e2 m1} * unit and splits as sigma1^{e1} sigma2^{e2}.
  VarSet tz{"t", "z"};
  SubstitutionMap phi = SubstitutionMap::monomial(
      tz, core.section2d.domain(), {unit_expo(0, e1), unit_expo(1, e2)});
  SubstitutionMap full = compose(core.section2d, phi);
  TruncSeries first = full.component(0);
  TruncSeries second = full.component(1);

  Expo mono;
  mono[0] = static_cast<int16_t>(e1 * core.n1);
  mono[1] = static_cast<int16_t>(e2 * core.m1);
  if (!first.divisible_by(mono))
    throw Error("family not in expected shape: section monomial mismatch");
  TruncSeries unit = first.divided_by_monomial(mono);
  if (!unit.is_unit())
    throw Error("family not in expected shape: section unit mismatch");
  TruncSeries sigma1 =
      (TruncSeries::monomial(tz, unit_expo(0, static_cast<int>(core.n1)), Scalar(1)) *
       unit.pow_rational(1, e1, order + 2))
          .truncated(order + 2);
  TruncSeries sigma2 =
      TruncSeries::monomial(tz, unit_expo(1, static_cast<int>(core.m1)), Scalar(1),
                            order + 2);
  return SubstitutionMap(tz, VarSet{"x", "y", "z"}, {sigma1, sigma2, second});
}

int certify_section(const SubstitutionMap& sigma, const DiffForm& omega3) {
  DiffForm pulled = sigma.pullback(omega3);
  if (pulled.is_zero())
    throw Error(pulled.order() == kInfOrder
                    ? "section is invariant: sigma^* Omega = 0"
                    : "section working order too low: sigma^* Omega truncated away "
                      "(order " + std::to_string(pulled.order()) + ")");
  DiffForm res = wedge(pulled, DiffForm::differential(sigma.domain(), 0));
  if (!res.is_zero()) {
    double mx = 0;
    for (int k = 0; k < res.basis_size(); ++k)
      mx = std::max(mx, res.coeff(k).max_coeff_abs());
    throw Error("section certificate failed: sigma^* Omega ^ dt != 0 (residual " +
                std::to_string(mx) + ")");
  }
  return res.order() == kInfOrder ? kInfOrder : res.order();
}

}  // namespace

SectionMap dicriticalness_section(const FamilyParams& fp, int order) {
  // provisional pass to learn the cofactor degree, then rebuild deep enough
  // that sigma^* Omega is visible beyond its valuation
  SectionCore probe = section_core_2d(fp, 4);
  int content = probe.cofactor[0] * fp.p + probe.cofactor[1] * fp.q +
                (2 * fp.n) * (fp.p + fp.q) + fp.p + fp.q;
  SectionMap out;
  SubstitutionMap sigma;
  SectionCore core;
  for (int attempt = 0;; ++attempt) {
    int internal = order + (attempt + 1) * (content + 4);
    core = section_core_2d(fp, internal);
    sigma = lift_section(core, fp.p, fp.q, internal);
    DiffForm omega3 = family_3d_form(fp, internal + 4);
    try {
      out.certificate_order = certify_section(sigma, omega3);
      break;
    } catch (const Error& e) {
      if (attempt >= 2 ||
          std::string(e.what()).find("working order too low") == std::string::npos)
        throw;
    }
  }
  out.sigma = sigma;
  out.n1 = static_cast<int>(core.n1);
  out.m1 = static_cast<int>(core.m1);
  out.n2 = static_cast<int>(core.n2);
  out.m2 = static_cast<int>(core.m2);
  out.p = fp.n;
  out.alpha1 = core.alpha1;
  out.S1 = core.S1;

  // image of the axis {z = 0}
  VarSet tz = sigma.domain();
  bool trivial = true;
  std::vector<TruncSeries> gamma;
  for (int i = 0; i < 3; ++i) {
    TruncSeries c = sigma.component(i).restricted_var_zero(1);
    if (!c.is_zero()) trivial = false;
    gamma.push_back(c);
  }
  out.axis_image_trivial = trivial;
  if (!trivial) {
    PuiseuxCurve axis;
    axis.param = "s";
    axis.denominator = 1;
    axis.target = sigma.codomain();
    VarSet uv{"s"};
    for (auto& c : gamma) {
      TruncSeries cu(uv, c.order());
      for (const auto& [e, cc] : c.terms()) cu.add_term(unit_expo(0, e[0]), cc);
      axis.components.push_back(std::move(cu));
    }
    axis.order = order;
    Verdict v = verify_separatrix(axis, family_3d_form(fp, order + 4));
    if (!v.holds())
      throw Error("section axis image is not invariant");
    out.note = "axis image verified invariant";
  } else {
    out.note = "axis image is the origin";
  }
  return out;
}

DiffForm family_3d_form_monomialized(const FamilyParams& fp, int a, int b,
                                     const TruncSeries& V, int order) {
  VarSet xyz{"x", "y", "z"};
  Expo ef;
  ef[0] = static_cast<int16_t>(a);
  ef[1] = static_cast<int16_t>(b);
  VarSet xy{"x", "y"};
  if (V.vars() != xy) throw Error("V must be a series in (x, y)");
  TruncSeries v3(xyz, V.order());
  for (const auto& [e, c] : V.terms()) {
    Expo ne;
    ne[0] = e[0];
    ne[1] = e[1];
    v3.add_term(ne, c);
  }
  TruncSeries g = (TruncSeries::monomial(xyz, ef, Scalar(1), order) * v3).truncated(order);
  TruncSeries z = TruncSeries::variable(xyz, 2, order);
  TruncSeries u(xyz, order);
  if (fp.U.is_zero()) {
    u = TruncSeries::constant(xyz, Scalar(1), order);
  } else {
    std::vector<TruncSeries> img{g};
    u = fp.U.substituted(img).truncated(order);
  }
  DiffForm w = exterior_derivative((z * z + g.pow(fp.k)).truncated(order));
  w.coeff(2) += (fp.alpha_value() * (g.pow(fp.n) * u)).truncated(order);
  return w;
}

SectionMap dicriticalness_section_monomialized(const FamilyParams& fp, int a, int b,
                                               const TruncSeries& V, int order) {
  if (V.constant_term().is_zero())
    throw Error("monomialization unit V must satisfy V(0,0) != 0");
  SectionCore probe = section_core_2d(fp, 4);
  int content = probe.cofactor[0] * a + probe.cofactor[1] * b +
                (2 * fp.n) * (a + b) + a + b;
  int internal = order + content + 8;
  SectionCore core = section_core_2d(fp, internal);
  order = internal;
  VarSet tz{"t", "z"};

  // first 2D component = t^{n1} z^{m1} * Uhat(t, z)
  TruncSeries first = core.section2d.component(0);
  Expo mono;
  mono[0] = static_cast<int16_t>(core.n1);
  mono[1] = static_cast<int16_t>(core.m1);
  TruncSeries uhat = first.divided_by_monomial(mono);

  // solve W(t,z) with phi2 = z^b W from
  //   W^{m1} * Uhat(t^a, z^b W) = V(t^{n1}, z^{m1})
  int n = order + 2;
  std::vector<TruncSeries> vimg{
      TruncSeries::monomial(tz, unit_expo(0, static_cast<int>(core.n1)), Scalar(1), n),
      TruncSeries::monomial(tz, unit_expo(1, static_cast<int>(core.m1)), Scalar(1), n)};
  TruncSeries vt = V.substituted(vimg).truncated(n);
  long m1 = core.m1;
  TruncSeries w = TruncSeries::constant(
      tz, core.S1.is_exact() && vt.is_exact() && vt.constant_term().is_one()
              ? Scalar(1)
              : Scalar(std::pow(vt.constant_term().to_complex() /
                                    uhat.constant_term().to_complex(),
                                1.0 / static_cast<double>(m1))),
      n);
  for (int it = 0; it < n + 2; ++it) {
    std::vector<TruncSeries> args{
        TruncSeries::monomial(tz, unit_expo(0, a), Scalar(1), n),
        (TruncSeries::monomial(tz, unit_expo(1, b), Scalar(1), n) * w).truncated(n)};
    TruncSeries target = (vt * uhat.substituted(args).inverse(n)).truncated(n);
    TruncSeries neww = target.pow_rational(1, m1, n);
    if (neww == w) break;
    w = neww;
  }

  // sigma_up = (t^{n1}, z^{m1}, second component of section2d o (t^a, z^b W))
  std::vector<TruncSeries> phi{
      TruncSeries::monomial(tz, unit_expo(0, a), Scalar(1), n),
      (TruncSeries::monomial(tz, unit_expo(1, b), Scalar(1), n) * w).truncated(n)};
  SubstitutionMap phimap(tz, core.section2d.domain(), phi);
  SubstitutionMap full = compose(core.section2d, phimap);
  std::vector<TruncSeries> comps{
      TruncSeries::monomial(tz, unit_expo(0, static_cast<int>(core.n1)), Scalar(1), n),
      TruncSeries::monomial(tz, unit_expo(1, static_cast<int>(core.m1)), Scalar(1), n),
      full.component(1)};
  SubstitutionMap sigma(tz, VarSet{"x", "y", "z"}, comps);

  SectionMap out;
  out.sigma = sigma;
  out.n1 = static_cast<int>(core.n1);
  out.m1 = static_cast<int>(core.m1);
  out.n2 = static_cast<int>(core.n2);
  out.m2 = static_cast<int>(core.m2);
  out.p = fp.n;
  out.alpha1 = core.alpha1;
  out.S1 = core.S1;
  DiffForm omega3 = family_3d_form_monomialized(fp, a, b, V, order + 4);
  out.certificate_order = certify_section(sigma, omega3);
  out.note = "monomialized f = x^" + std::to_string(a) + " y^" + std::to_string(b) +
             " V(x,y)";
  return out;
}

}  // namespace dicrit
