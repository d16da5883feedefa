#include "dicrit/report.hpp"

#include <fstream>

#include "dicrit/parser.hpp"

namespace dicrit {

Json verdict_json(const Verdict& v) {
  Json j;
  j["outcome"] = outcome_str(v.outcome);
  j["criterion"] = v.criterion;
  j["reason"] = v.reason;
  if (!v.evidence.empty()) {
    Json e = Json::object();
    for (const auto& [k, val] : v.evidence) e[k] = val;
    j["evidence"] = e;
  }
  if (v.residual) j["residual"] = *v.residual;
  if (v.order) j["order"] = *v.order;
  return j;
}

static Json scalar_json(const Scalar& s) { return Json(s.str()); }

static Json complex_json(std::complex<double> z) {
  Json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

static Json class_json(const SingularityClass& cls) {
  Json j;
  j["label"] = label_str(cls.label);
  if (!cls.parameters.empty()) {
    Json p = Json::array();
    for (const auto& s : cls.parameters) p.push_back(s.str());
    j["parameters"] = p;
  }
  for (const auto& [k, v] : cls.named) j[k] = v.str();
  if (cls.ratio) j["eigen_quotient"] = cls.ratio->str();
  if (cls.cs_residue) j["cs_residue"] = cls.cs_residue->str();
  j["evidence_order"] = cls.evidence_order;
  if (cls.obstruction_order) j["obstruction_order"] = *cls.obstruction_order;
  if (!cls.note.empty()) j["note"] = cls.note;
  return j;
}

static Json config_echo(const AnalysisConfig& cfg) {
  Json j;
  if (cfg.family) {
    Json f;
    f["p"] = cfg.family->p;
    f["q"] = cfg.family->q;
    f["k"] = cfg.family->k;
    f["n"] = cfg.family->n;
    f["alpha_sq"] = cfg.family->alpha_sq.str();
    if (cfg.family->alpha) f["alpha"] = cfg.family->alpha->str();
    f["U"] = cfg.family->U.is_zero() ? "1" : cfg.family->U.str();
    j["family"] = f;
  }
  if (cfg.form_2d) j["form"] = *cfg.form_2d;
  if (cfg.candidate) j["candidate"] = *cfg.candidate;
  if (cfg.rational_t) j["candidate_r"] = *cfg.rational_t;
  j["order"] = cfg.order;
  j["tol"] = cfg.tol_hold;
  j["tol_fail"] = cfg.tol_fail;
  j["mode"] = cfg.exact ? "exact" : "float";
  Json checks = Json::array();
  for (const auto& c : cfg.checks) checks.push_back(c);
  j["checks"] = checks;
  return j;
}

static Json base_report(const AnalysisConfig& cfg) {
  Json j;
  j["tool"] = "dicrit";
  j["version"] = "0.1.0";
  j["report_version"] = 1;
  j["config"] = config_echo(cfg);
  return j;
}

std::string family_transform_str(const DiffForm& form, int pn, int qn) {
  // expects coefficients (pn y G, qn x G, x y H) over (x, y, w)
  const VarSet& v = form.vars();
  if (v.size() != 3) return form.str();
  TruncSeries cx = form.coeff_d(0), cy = form.coeff_d(1), cw = form.coeff_d(2);
  Expo ey = unit_expo(1), ex = unit_expo(0), exy;
  exy[0] = 1;
  exy[1] = 1;
  if (!cx.divisible_by(ey) || !cy.divisible_by(ex) || !cw.divisible_by(exy))
    return form.str();
  TruncSeries g = cx.divided_by_monomial(ey).scaled(Scalar(1) / Scalar(pn));
  if (cy != (g * TruncSeries::variable(v, 0)).scaled(Scalar(qn))) return form.str();
  TruncSeries h = cw.divided_by_monomial(exy);
  std::string xs = v.name(0), ys = v.name(1), ws = v.name(2);
  auto coef = [](int c, const std::string& term) {
    return c == 1 ? term : std::to_string(c) + "*" + term;
  };
  return "(" + g.str() + ")*(" + coef(pn, ys + "*d" + xs) + "+" +
         coef(qn, xs + "*d" + ys) + ")+" + xs + "*" + ys + "*(" + h.str() + ")*d" +
         ws;
}

// ---------------------------------------------------------------------------

namespace {

struct FamilyPipeline {
  const AnalysisConfig& cfg;
  const FamilyParams& fp;
  Json& report;

  std::optional<SpecialComponent> special;
  std::optional<HolonomyGenerators> gens;
  std::optional<HolonomyProbe> probe;

  FamilyPipeline(const AnalysisConfig& c, const FamilyParams& f, Json& r)
      : cfg(c), fp(f), report(r) {}

  void resolution_trace() {
    Json res;
    // 3D axis chain
    FoliationGerm g3 = make_germ(family_3d_form(fp, cfg.order + 4));
    TransformResult chain =
        blowup_axis_chain(g3, fp.q * fp.n, fp.p * fp.n, "w");
    Json j3;
    j3["chart"] = chain.chart.label;
    j3["cofactor"] = chain.cofactor.str();
    j3["strict_transform"] = family_transform_str(chain.form, fp.p * fp.n, fp.q * fp.n);
    Json divs = Json::array();
    for (const auto& d : chain.divisor) {
      Json dj;
      dj["variable"] = chain.form.vars().name(d.var);
      dj["invariant"] = d.invariant;
      dj["multiplicity"] = d.multiplicity;
      divs.push_back(dj);
    }
    j3["divisor"] = divs;
    Json pts = Json::array();
    DivisorSingularities sing = singular_points_on_divisor(chain);
    for (const auto& p : sing.points) {
      Json pj;
      std::string coords;
      for (size_t i = 0; i < p.point.size(); ++i)
        coords += (i ? ", " : "") + p.point[i].str();
      pj["point"] = "(" + coords + ")";
      pj["corner"] = p.corner;
      pj["class"] = class_json(classify_simple_type(p.germ, cfg.order));
      pts.push_back(pj);
    }
    j3["singular_points"] = pts;
    Json curves = Json::array();
    for (const auto& c : sing.curves) curves.push_back(c);
    j3["singular_curves"] = curves;
    res["axis_chain"] = j3;

    // 2D reduction of the shadow family
    special = family_special_component(family_2d_form(fp, cfg.order + 6), fp.n);
    Json j2;
    j2["chart"] = special->last.chart.label;
    j2["cofactor"] = special->last.cofactor.str();
    j2["strict_transform"] = special->last.form.str();
    Json mpts = Json::array();
    for (const auto& m : special->points) {
      Json pj;
      pj["location"] = m.at_infinity ? "infinity" : m.location.str();
      pj["corner"] = m.corner;
      pj["class"] = class_json(classify_simple_type(m.germ, cfg.order));
      mpts.push_back(pj);
    }
    j2["marked_points"] = mpts;
    res["shadow_reduction"] = j2;
    report["resolution"] = res;
  }

  void holonomy_table() {
    if (!special) return;
    HolonomySettings st;
    st.tol_hold = cfg.tol_hold;
    st.tol_fail = cfg.tol_fail;
    gens = holonomy_generators(*special, st);
    probe = probe_group(*gens);
    Json h;
    h["basepoint"] = complex_json(gens->basepoint);
    Json table = Json::array();
    for (const auto& gi : gens->info) {
      Json g;
      g["label"] = gi.label;
      g["multiplier"] = complex_json(gi.multiplier);
      if (gi.predicted) g["predicted_multiplier"] = complex_json(*gi.predicted);
      if (gi.order) g["periodicity_order"] = *gi.order;
      g["order_residual"] = gi.order_residual;
      table.push_back(g);
    }
    h["generators"] = table;
    h["abelian"] = probe->abelian;
    h["commutator_residual"] = probe->commutator_residual;
    report["holonomy"] = h;

    if (cfg.csv_path) {
      std::ofstream csv(*cfg.csv_path);
      csv << "sample_t_re,sample_t_im,image_re,image_im,generator_id\n";
      for (size_t gi = 0; gi < gens->generators.size(); ++gi) {
        for (double t0 : {0.05, 0.04, 0.03, 0.02}) {
          std::complex<double> img = gens->generators[gi](std::complex<double>(t0, 0));
          csv << t0 << ",0," << img.real() << "," << img.imag() << "," << gi << "\n";
        }
      }
    }
  }

  std::optional<Verdict> candidate_invariance() {
    if (!cfg.candidate || !gens) return std::nullopt;
    // candidate F(f, z); restrict to the transversal {w = w_b}: (t, z) =
    // (T, T^n w_b)
    VarSet fz{"f", "z"};
    MeroFunction f2 = parse_mero(*cfg.candidate, fz, cfg.order + 6);
    VarSet tv{"T"};
    int ord = cfg.order + 6;
    TruncSeries T = TruncSeries::variable(tv, 0, ord);
    TruncSeries zc = TruncSeries::monomial(tv, unit_expo(0, fp.n),
                                           Scalar(gens->basepoint), ord);
    std::vector<TruncSeries> img{T, zc};
    RationalFn r;
    r.num = f2.num.substituted(img);
    r.den = f2.den.substituted(img);
    std::vector<std::complex<double>> samples{
        {0.05, 0.0}, {0.03, 0.02}, {-0.01, 0.04}, {0.02, -0.03}, {0.04, 0.01}};
    Verdict v = invariant_rational_test(gens->generators, r, samples, cfg.tol_hold,
                                        cfg.tol_fail);
    return v;
  }
};

Json structured_error(const std::string& kind, const std::string& detail) {
  Json j;
  j["error"] = kind;
  j["detail"] = detail;
  return j;
}

}  // namespace

RunResult run_analyze(const AnalysisConfig& cfg) {
  RunResult out;
  out.report = base_report(cfg);
  Json checks = Json::object();

  if (cfg.family) {
    const FamilyParams& fp = *cfg.family;
    bool resonant_pipeline = cfg.wants("thm6") || cfg.wants("thm7") ||
                             cfg.wants("section") || cfg.wants("holonomy");
    if (fp.alpha_sq == Scalar(16) && resonant_pipeline) {
      out.report["checks"] = checks;
      out.report["error"] = structured_error(
          "alpha-boundary",
          "alpha = +-4: double root of 2y^2 + alpha y + 2 (boundary r = 0)");
      out.exit_code = 2;
      return out;
    }

    FamilyPipeline pipe(cfg, fp, out.report);
    pipe.resolution_trace();

    if (fp.k == 2 * fp.n && fp.alpha_sq != Scalar(16)) {
      FamilyClassification fc = family_classify(fp, cfg.order);
      Json fj;
      fj["class"] = family_class_str(fc.cls);
      if (fc.r) fj["r"] = rational_str(*fc.r);
      if (fc.quotient_p1) fj["quotient_p1"] = fc.quotient_p1->str();
      if (fc.quotient_p2) fj["quotient_p2"] = fc.quotient_p2->str();
      if (fc.obstruction_order) fj["obstruction_order"] = *fc.obstruction_order;
      if (fc.p1_class) fj["P1"] = class_json(*fc.p1_class);
      if (fc.p2_class) fj["P2"] = class_json(*fc.p2_class);
      out.report["family_classification"] = fj;
    }

    if (cfg.wants("holonomy") || cfg.wants("cor4") || cfg.wants("thm6"))
      pipe.holonomy_table();

    if (cfg.wants("prop5")) checks["prop5"] = verdict_json(prop5_check(fp, cfg.order));
    if (cfg.wants("cor4")) {
      HolonomyProbe probe = pipe.probe ? *pipe.probe : HolonomyProbe{};
      checks["cor4"] = verdict_json(corollary4_check(fp, probe));
    }
    if (cfg.wants("thm6"))
      checks["thm6"] =
          verdict_json(theorem6_check(fp, pipe.candidate_invariance(), cfg.order));
    if (cfg.wants("thm7"))
      checks["thm7"] = verdict_json(theorem7_check(fp, cfg.order));

    if (cfg.wants("section")) {
      try {
        SectionMap s = cfg.mono_a
                           ? dicriticalness_section_monomialized(
                                 fp, *cfg.mono_a, *cfg.mono_b,
                                 parse_series(cfg.mono_v.value_or("1"),
                                              VarSet{"x", "y"}, cfg.order + 4),
                                 cfg.order)
                           : dicriticalness_section(fp, cfg.order);
        Json sj;
        sj["sigma1"] = s.sigma.component(0).truncated(cfg.order).str();
        sj["sigma2"] = s.sigma.component(1).truncated(cfg.order).str();
        sj["sigma3"] = s.sigma.component(2).truncated(cfg.order).str();
        sj["chart"] = Json::array({s.n1, s.m1, s.n2, s.m2});
        sj["alpha1"] = s.alpha1.str();
        sj["certificate_order"] = s.certificate_order == kInfOrder
                                      ? Json("exact")
                                      : Json(s.certificate_order);
        sj["S1"] = s.S1.truncated(std::min(cfg.order, 8)).str();
        sj["note"] = s.note;
        out.report["section"] = sj;
        Verdict sv = Verdict::make(Outcome::holds, "section",
                                   "dicriticalness section constructed with a "
                                   "vanishing sigma^* Omega ^ dt certificate");
        sv.order = s.certificate_order == kInfOrder ? cfg.order : s.certificate_order;
        checks["section"] = verdict_json(sv);
      } catch (const Error& e) {
        checks["section"] = verdict_json(
            Verdict::make(Outcome::fails, "section", e.what()));
      }
    }

    if (cfg.candidate && cfg.wants("verify-integral")) {
      VarSet fz{"f", "z"};
      MeroFunction f2 = parse_mero(*cfg.candidate, fz, cfg.order + 6);
      VarSet tz{"t", "z"};
      SubstitutionMap rename(tz, fz,
                             {TruncSeries::variable(tz, 0), TruncSeries::variable(tz, 1)});
      MeroFunction f2d = pullback_integral(f2, rename);
      Verdict v2 = verify_first_integral(f2d, family_2d_form(fp, cfg.order + 6));
      checks["verify-integral-2d"] = verdict_json(v2);

      VarSet xyz{"x", "y", "z"};
      Expo ef;
      ef[0] = static_cast<int16_t>(fp.p);
      ef[1] = static_cast<int16_t>(fp.q);
      SubstitutionMap phi = SubstitutionMap::monomial(xyz, fz, {ef, unit_expo(2)});
      MeroFunction f3 = pullback_integral(f2, phi);
      Verdict v3 = verify_first_integral(f3, family_3d_form(fp, cfg.order + 6));
      checks["verify-integral-3d"] = verdict_json(v3);
    }
  } else {
    // custom 2D form
    VarSet xy{"x", "y"};
    FoliationGerm g = make_germ(parse_form(*cfg.form_2d, xy, kInfOrder));
    if (!g.singular_at_origin()) {
      Json h;
      h["generators"] = Json::array();
      h["note"] = "regular foliation: no holonomy generators";
      out.report["holonomy"] = h;
      out.report["checks"] = checks;
      return out;
    }
    SpecialComponent sc;
    LinearPart2D lp = linear_part_2d(g);
    if (!lp.nilpotent || cfg.holonomy_component) {
      // already (pre-)simple: take the requested (or last) invariant axis as
      // the component instead of blowing up
      int divisor_var = cfg.holonomy_component
                            ? xy.index_checked(*cfg.holonomy_component)
                            : 1;
      std::vector<int> dv{divisor_var};
      FoliationGerm gd = make_germ(g.form, dv);
      TransformResult t;
      t.chart.subst = SubstitutionMap::identity(xy);
      t.chart.label = "identity";
      t.form = gd.form;
      t.cofactor = TruncSeries::constant(xy, Scalar(1));
      t.divisor = gd.divisor;
      sc.last = t;
      sc.divisor_var = divisor_var;
      sc.coord_var = 1 - divisor_var;
      for (const auto& p : singular_points_on_divisor(t).points) {
        MarkedPoint m;
        m.location = p.point[static_cast<size_t>(sc.coord_var)];
        m.corner = p.corner;
        m.germ = p.germ;
        sc.points.push_back(std::move(m));
      }
      sc.blowup_count = 0;
    } else {
      sc = resolve_to_special_component(g);
    }
    Json res;
    res["blowups"] = sc.blowup_count;
    res["strict_transform"] = sc.last.form.str();
    Json mpts = Json::array();
    for (const auto& m : sc.points) {
      Json pj;
      pj["location"] = m.at_infinity ? "infinity" : m.location.str();
      pj["class"] = class_json(classify_simple_type(m.germ, cfg.order));
      mpts.push_back(pj);
    }
    res["marked_points"] = mpts;
    out.report["resolution"] = res;

    HolonomySettings st;
    st.tol_hold = cfg.tol_hold;
    st.tol_fail = cfg.tol_fail;
    HolonomyGenerators gens = holonomy_generators(sc, st);
    HolonomyProbe probe = probe_group(gens);
    Json h;
    h["basepoint"] = complex_json(gens.basepoint);
    Json table = Json::array();
    for (const auto& gi : gens.info) {
      Json gj;
      gj["label"] = gi.label;
      gj["multiplier"] = complex_json(gi.multiplier);
      if (gi.order) gj["periodicity_order"] = *gi.order;
      gj["order_residual"] = gi.order_residual;
      table.push_back(gj);
    }
    h["generators"] = table;
    h["abelian"] = probe.abelian;
    h["commutator_residual"] = probe.commutator_residual;
    out.report["holonomy"] = h;

    if (cfg.wants("cor4")) {
      Verdict v = Verdict::make(Outcome::inconclusive, "cor4", "");
      v.residual = probe.commutator_residual;
      if (!probe.abelian && probe.commutator_residual > cfg.tol_fail) {
        v.outcome = Outcome::fails;
        v.reason = "projective holonomy generators do not commute: no "
                   "holomorphic first integral";
      } else if (!probe.finite_orders && probe.order_residual > cfg.tol_fail) {
        v.outcome = Outcome::fails;
        v.reason = "a holonomy generator has no finite order up to the bound";
      } else if (probe.abelian && probe.finite_orders) {
        v.reason = "holonomy abelian with finite orders; arithmetic side not "
                   "applicable to a custom form";
      } else {
        v.reason = "holonomy evidence in the inconclusive band";
      }
      std::string orders;
      for (int o : probe.generator_orders)
        orders += (orders.empty() ? "" : ",") + std::to_string(o);
      v.with("generator_orders", orders);
      checks["cor4"] = verdict_json(v);
    }
  }

  out.report["checks"] = checks;
  return out;
}

RunResult run_blowup(const AnalysisConfig& cfg, int steps) {
  RunResult out;
  out.report = base_report(cfg);
  if (cfg.family) {
    const FamilyParams& fp = *cfg.family;
    FoliationGerm g3 = make_germ(family_3d_form(fp, cfg.order + 4));
    int cx = steps < 0 ? fp.q * fp.n : std::min(steps, fp.q * fp.n);
    int cy = steps < 0 ? fp.p * fp.n : std::max(0, std::min(steps - cx, fp.p * fp.n));
    TransformResult chain = blowup_axis_chain(g3, cx, cy, "w");
    out.report["chart"] = chain.chart.label;
    out.report["cofactor"] = chain.cofactor.str();
    out.report["strict_transform"] =
        (cx == fp.q * fp.n && cy == fp.p * fp.n)
            ? family_transform_str(chain.form, fp.p * fp.n, fp.q * fp.n)
            : chain.form.str();
    if (steps == 0) out.report["strict_transform"] = g3.form.str();
    return out;
  }
  VarSet xy{"x", "y"};
  FoliationGerm g = make_germ(parse_form(*cfg.form_2d, xy, kInfOrder));
  if (steps == 0) {
    out.report["strict_transform"] = g.form.str();
    return out;
  }
  int n = steps < 0 ? 1 : steps;
  FoliationGerm cur = g;
  Json trace = Json::array();
  for (int i = 0; i < n; ++i) {
    TransformResult t = blowup_point_2d(cur, BlowupChart2D::main,
                                        "w" + std::to_string(i + 1));
    Json tj;
    tj["chart"] = t.chart.label;
    tj["cofactor"] = t.cofactor.str();
    tj["strict_transform"] = t.form.str();
    trace.push_back(tj);
    auto pts = singular_points_on_divisor(t);
    bool advanced = false;
    for (const auto& p : pts.points)
      if (p.germ.singular_at_origin()) {
        cur = p.germ;
        advanced = true;
        break;
      }
    if (!advanced) break;
  }
  out.report["trace"] = trace;
  if (trace.empty())
    out.report["strict_transform"] = g.form.str();
  else
    out.report["strict_transform"] = trace.back()["strict_transform"];
  return out;
}

RunResult run_holonomy(const AnalysisConfig& cfg) {
  AnalysisConfig c2 = cfg;
  c2.checks = {"holonomy", "cor4"};
  RunResult full = run_analyze(c2);
  RunResult out;
  out.report = base_report(cfg);
  if (full.report.contains("holonomy"))
    out.report["holonomy"] = full.report["holonomy"];
  out.exit_code = full.exit_code;
  return out;
}

RunResult run_classify(const AnalysisConfig& cfg) {
  RunResult out;
  out.report = base_report(cfg);
  if (cfg.family) {
    AnalysisConfig c2 = cfg;
    c2.checks = {"prop5"};
    RunResult full = run_analyze(c2);
    out.report["resolution"] = full.report["resolution"];
    if (full.report.contains("family_classification"))
      out.report["family_classification"] = full.report["family_classification"];
    return out;
  }
  VarSet xy{"x", "y"};
  FoliationGerm g = make_germ(parse_form(*cfg.form_2d, xy, kInfOrder));
  SingularityClass cls = classify_simple_type(g, cfg.order);
  out.report["class"] = class_json(cls);
  AdaptedInvariants inv = adapted_invariants(g);
  Json ij;
  ij["nu"] = inv.nu;
  ij["mu"] = inv.mu;
  ij["rs"] = inv.rs;
  ij["pre_simple"] = inv.pre_simple;
  ij["dimensional_type_bounds"] =
      Json::array({inv.dimensional_type_bounds.first, inv.dimensional_type_bounds.second});
  out.report["adapted_invariants"] = ij;
  return out;
}

RunResult run_section(const AnalysisConfig& cfg) {
  AnalysisConfig c2 = cfg;
  c2.checks = {"section"};
  return run_analyze(c2);
}

RunResult run_verify_integral(const AnalysisConfig& cfg) {
  AnalysisConfig c2 = cfg;
  c2.checks = {"verify-integral"};
  if (!c2.candidate) throw ConfigError("verify-integral needs a [candidate] F");
  return run_analyze(c2);
}

}  // namespace dicrit
