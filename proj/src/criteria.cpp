#include "dicrit/criteria.hpp"

#include <numeric>

namespace dicrit {

Scalar FamilyParams::alpha_value() const {
  if (alpha) return *alpha;
  return alpha_sq.sqrt();
}

void FamilyParams::validate() const {
  if (p < 1 || q < 1) throw Error("f exponents must be positive");
  if (std::gcd(p, q) != 1) throw Error("f exponents must be coprime");
  if (k < 1 || n < 1) throw Error("family exponents must be positive");
  if (alpha_sq.is_zero() && (!alpha || alpha->is_zero()))
    throw Error("alpha must be nonzero");
  if (!U.is_zero() && !U.constant_term().is_one())
    throw Error("U(0) must equal 1");
}

FamilyParams make_family(int p, int q, int k, int n, const Scalar& alpha,
                         const TruncSeries& U) {
  FamilyParams fp;
  fp.p = p;
  fp.q = q;
  fp.k = k;
  fp.n = n;
  fp.alpha = alpha;
  fp.alpha_sq = alpha * alpha;
  fp.U = U;
  fp.validate();
  return fp;
}

static TruncSeries substitute_unit(const TruncSeries& U, const TruncSeries& arg,
                                   int order) {
  if (U.is_zero()) return TruncSeries::constant(arg.vars(), Scalar(1), order);
  if (U.vars().size() != 1) throw Error("U must be a one-variable series");
  std::vector<TruncSeries> images{arg.truncated(order)};
  return U.substituted(images).truncated(order);
}

DiffForm family_2d_form(const FamilyParams& fp, int order) {
  VarSet tz{"t", "z"};
  TruncSeries t = TruncSeries::variable(tz, 0, order);
  TruncSeries z = TruncSeries::variable(tz, 1, order);
  TruncSeries u = substitute_unit(fp.U, t, order);
  DiffForm w = exterior_derivative((z * z + t.pow(fp.k)).truncated(order));
  w.coeff(1) += (fp.alpha_value() * (t.pow(fp.n) * u)).truncated(order);
  return w;
}

DiffForm family_3d_form(const FamilyParams& fp, int order) {
  VarSet xyz{"x", "y", "z"};
  Expo ef;
  ef[0] = static_cast<int16_t>(fp.p);
  ef[1] = static_cast<int16_t>(fp.q);
  TruncSeries f = TruncSeries::monomial(xyz, ef, Scalar(1), order);
  TruncSeries z = TruncSeries::variable(xyz, 2, order);
  TruncSeries u = substitute_unit(fp.U, f, order);
  DiffForm w = exterior_derivative((z * z + f.pow(fp.k)).truncated(order));
  w.coeff(2) += (fp.alpha_value() * (f.pow(fp.n) * u)).truncated(order);
  return w;
}

ResonanceSolution alpha_resonance_solve(const Scalar& alpha_sq) {
  ResonanceSolution out;
  if (alpha_sq.is_zero()) throw Error("alpha must be nonzero");
  if (!alpha_sq.is_rational()) return out;  // no rational r exists
  Rational a = alpha_sq.rational();
  Rational d = a * (a - 16);
  auto s = rational_sqrt(d);
  if (!s) return out;
  Rational r_plus = a - 16 + *s;
  Rational r_minus = a - 16 - *s;
  for (const Rational& r : {r_plus, r_minus}) {
    if (r >= 0) {
      out.r = r;
      out.boundary = (r == 0);
      break;
    }
  }
  if (!out.r) return out;

  if (!out.boundary) {
    Scalar alpha = alpha_sq.sqrt();
    out.alpha_roots = alpha_roots_labeled(1, alpha);
    // exact quotients through r: lambda_1 = r/8, lambda_2 = (2a - 32 - r)/8
    out.quotients = {Scalar(*out.r / 8), Scalar((2 * a - 32 - *out.r) / 8)};
  }
  return out;
}

static std::pair<Scalar, Scalar> roots_of_resonant_quadratic(const Scalar& alpha) {
  // 2 y^2 + alpha y + 2 = 0
  Scalar disc = alpha * alpha - Scalar(16);
  if (disc.is_zero()) throw Error("double root");
  Scalar s = disc.sqrt();
  return {(-alpha + s) / Scalar(4), (-alpha - s) / Scalar(4)};
}

static Scalar quotient_at(int p, const Scalar& root, const Scalar& other,
                          const Scalar& alpha) {
  return Scalar(2 * p) * (other - root) / (Scalar(2) * root + alpha);
}

static bool scalar_positive_rational(const Scalar& s) {
  if (s.is_exact()) return s.is_rational() && s.rational() > 0;
  std::complex<double> v = s.to_complex();
  return std::abs(v.imag()) < 1e-10 * (1 + std::abs(v.real())) && v.real() > 1e-10 &&
         rational_reconstruct(v.real(), 1e-9, 100000).has_value();
}

std::pair<Scalar, Scalar> alpha_roots_labeled(int p, const Scalar& alpha) {
  auto [r1, r2] = roots_of_resonant_quadratic(alpha);
  Scalar q1 = quotient_at(p, r1, r2, alpha);
  Scalar q2 = quotient_at(p, r2, r1, alpha);
  bool pos1 = scalar_positive_rational(q1);
  bool pos2 = scalar_positive_rational(q2);
  if (pos1 && !pos2) return {r1, r2};
  if (pos2 && !pos1) return {r2, r1};
  std::complex<double> c1 = r1.to_complex(), c2 = r2.to_complex();
  if (c1.real() != c2.real() ? c1.real() < c2.real() : c1.imag() <= c2.imag())
    return {r1, r2};
  return {r2, r1};
}

std::pair<Scalar, Scalar> eigen_quotients(int p, const Scalar& alpha) {
  auto [a1, a2] = alpha_roots_labeled(p, alpha);
  return {quotient_at(p, a1, a2, alpha), quotient_at(p, a2, a1, alpha)};
}

std::string family_class_str(FamilyClass c) {
  switch (c) {
    case FamilyClass::generic: return "generic";
    case FamilyClass::resonant_dicritical_candidate:
      return "resonant-dicritical-candidate";
    case FamilyClass::resonant_dulac: return "resonant-dulac";
    default: return "boundary";
  }
}

Verdict prop5_check(const FamilyParams& fp, int order) {
  fp.validate();
  if (2 * fp.n > fp.k) {
    Verdict v = Verdict::make(Outcome::fails, "prop5",
                              "2n > k: generalized surface, no pure meromorphic "
                              "first integral question here");
    v.with("branch", "2n > k");
    return v;
  }
  if (2 * fp.n < fp.k) {
    DiffForm w2 = family_2d_form(fp, order + 4);
    SpecialComponent sc = family_special_component(w2, fp.n);
    Scalar target = -fp.alpha_value() / Scalar(2);
    Verdict v = Verdict::make(Outcome::fails, "prop5",
                              "2n < k: saddle-node at t = -alpha/2 excludes a "
                              "meromorphic first integral");
    v.with("branch", "2n < k");
    for (const auto& m : sc.points) {
      if (m.at_infinity) continue;
      if ((m.location - target).abs() > 1e-8) continue;
      SingularityClass cls = classify_simple_type(m.germ, order);
      v.with("point", "t = " + m.location.str());
      v.with("class", label_str(cls.label));
      if (cls.label != SingLabel::saddle_node)
        v.reason += " (classification did not confirm: " + label_str(cls.label) + ")";
    }
    return v;
  }
  Verdict v = Verdict::make(Outcome::holds, "prop5",
                            "k = 2n: the necessary condition for a pure "
                            "meromorphic first integral holds");
  v.with("branch", "k = 2n");
  return v;
}

FamilyClassification family_classify(const FamilyParams& fp, int order) {
  fp.validate();
  if (fp.k != 2 * fp.n) throw Error("family classification requires k = 2n");
  FamilyClassification out;
  out.order = order;
  if (fp.alpha_sq == Scalar(16)) {
    out.cls = FamilyClass::boundary;
    return out;
  }
  ResonanceSolution rs = alpha_resonance_solve(fp.alpha_sq);
  if (!rs.r) {
    out.cls = FamilyClass::generic;
    return out;
  }
  if (rs.boundary) {
    out.cls = FamilyClass::boundary;
    return out;
  }
  out.r = rs.r;
  auto [q1, q2] = eigen_quotients(fp.n, fp.alpha_value());
  out.quotient_p1 = q1;
  out.quotient_p2 = q2;

  DiffForm w2 = family_2d_form(fp, order + 4);
  SpecialComponent sc = family_special_component(w2, fp.n);
  auto [a1, a2] = alpha_roots_labeled(fp.n, fp.alpha_value());
  for (const auto& m : sc.points) {
    if (m.at_infinity) continue;
    SingularityClass cls = classify_simple_type(m.germ, order);
    if ((m.location - a1).abs() < 1e-8) out.p1_class = cls;
    if ((m.location - a2).abs() < 1e-8) out.p2_class = cls;
  }
  if (!out.p1_class) throw Error("family not in expected shape: P1 not found");
  if (out.p1_class->label == SingLabel::dulac_c) {
    out.cls = FamilyClass::resonant_dulac;
    out.obstruction_order = out.p1_class->obstruction_order;
  } else if (out.p1_class->label == SingLabel::resonant_linearizable_candidate) {
    out.cls = FamilyClass::resonant_dicritical_candidate;
  } else {
    throw Error("family not in expected shape: P1 classified as " +
                label_str(out.p1_class->label));
  }
  return out;
}

Verdict corollary4_check(const FamilyParams& fp, const HolonomyProbe& probe) {
  fp.validate();
  if (fp.k > 2 * fp.n) {
    return Verdict::make(Outcome::fails, "cor4",
                         "k > 2n: dicritical components or saddle-nodes appear "
                         "in the reduction");
  }
  if (fp.k == 2 * fp.n) {
    ResonanceSolution rs = alpha_resonance_solve(fp.alpha_sq);
    if (rs.r) {
      Verdict v = Verdict::make(Outcome::fails, "cor4",
                                "condition (2) arithmetic: alpha^2 = "
                                "(16+r)^2/(16+2r) has a root r in Q_{>=0}");
      v.with("r", rational_str(*rs.r));
      if (rs.boundary) v.with("boundary", "r = 0 (alpha = +-4)");
      return v;
    }
  }
  if (!probe.available)
    return Verdict::make(Outcome::inconclusive, "cor4",
                         "arithmetic conditions hold; holonomy probe not supplied");
  Verdict v = Verdict::make(Outcome::inconclusive, "cor4", "");
  v.residual = probe.commutator_residual;
  if (probe.abelian && probe.finite_orders) {
    v.outcome = Outcome::holds;
    v.reason = "projective holonomy abelian with finite-order generators "
               "(numeric, within tolerance)";
  } else if (probe.commutator_residual > probe.tol_fail) {
    v.outcome = Outcome::fails;
    v.reason = "projective holonomy generators do not commute";
  } else if (!probe.finite_orders && probe.order_residual > probe.tol_fail) {
    v.outcome = Outcome::fails;
    v.reason = "a holonomy generator has no finite order up to the bound";
  } else {
    v.reason = "holonomy evidence in the inconclusive band";
  }
  std::string orders;
  for (int o : probe.generator_orders)
    orders += (orders.empty() ? "" : ",") + std::to_string(o);
  if (!orders.empty()) v.with("generator_orders", orders);
  return v;
}

Verdict theorem6_check(const FamilyParams& fp,
                       const std::optional<Verdict>& invariance, int order) {
  fp.validate();
  if (fp.k != 2 * fp.n) {
    Verdict v = prop5_check(fp, order);
    v.criterion = "thm6";
    v.outcome = Outcome::fails;
    v.reason = "k != 2n excludes a pure meromorphic first integral; " + v.reason;
    return v;
  }
  if (fp.alpha_sq == Scalar(16))
    throw Error("alpha = +-4 is the double-root boundary (r = 0)");
  FamilyClassification fc = family_classify(fp, order);
  if (fc.cls == FamilyClass::resonant_dulac) {
    Verdict v = Verdict::make(Outcome::fails, "thm6",
                              "Dulac type at P1: no meromorphic first integral");
    if (fc.obstruction_order)
      v.with("obstruction_order", std::to_string(*fc.obstruction_order));
    return v;
  }
  if (invariance) {
    Verdict v = *invariance;
    v.criterion = "thm6";
    if (v.holds())
      v.reason = "k = 2n and the candidate rational function is invariant "
                 "under the computed holonomy generators";
    return v;
  }
  return Verdict::make(Outcome::inconclusive, "thm6",
                       "k = 2n; a meromorphic first integral exists if and only "
                       "if some rational function on the transversal is "
                       "invariant under the holonomy of the special component "
                       "(no candidate supplied)");
}

Verdict theorem7_check(const FamilyParams& fp, int order) {
  fp.validate();
  if (fp.k != 2 * fp.n) {
    Verdict v = Verdict::make(Outcome::fails, "thm7",
                              "not dicritical: the 2D side needs n = 2p");
    v.with("condition", "n = 2p");
    return v;
  }
  if (fp.alpha_sq == Scalar(16))
    throw Error("alpha = +-4 is the double-root boundary (r = 0)");
  FamilyClassification fc = family_classify(fp, order);
  switch (fc.cls) {
    case FamilyClass::generic:
      return Verdict::make(Outcome::fails, "thm7",
                           "not dicritical: no eigenvalue quotient in Q_{>0} "
                           "(generic alpha)");
    case FamilyClass::resonant_dulac: {
      Verdict v = Verdict::make(Outcome::fails, "thm7",
                                "not dicritical: Dulac type at P1");
      if (fc.obstruction_order)
        v.with("obstruction_order", std::to_string(*fc.obstruction_order));
      return v;
    }
    case FamilyClass::resonant_dicritical_candidate: {
      Verdict v = Verdict::make(Outcome::holds, "thm7",
                                "dicritical: 2D side linearizable with positive "
                                "rational quotient; the property transfers "
                                "through the pull-back");
      v.order = fc.order;
      if (fc.quotient_p1) v.with("quotient_p1", fc.quotient_p1->str());
      if (fc.quotient_p2) v.with("quotient_p2", fc.quotient_p2->str());
      if (fc.r) v.with("r", rational_str(*fc.r));
      return v;
    }
    default:
      throw Error("alpha = +-4 is the double-root boundary (r = 0)");
  }
}

}  // namespace dicrit
