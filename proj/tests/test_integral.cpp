#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicrit/integral.hpp"
#include "test_util.hpp"

using namespace dicrit;
using namespace dicrit::testing;

static FamilyParams alpha5() {
  return make_family(1, 1, 2, 1, Scalar(5), parse_series("1", VarSet{"t"}, kInfOrder));
}

TEST_CASE("verify_first_integral: the (t+2z)^4/(2t+z) fixture") {
  VarSet tz{"t", "z"};
  MeroFunction f = parse_mero("(t+2*z)^4/(2*t+z)", tz, kInfOrder);
  DiffForm w = parse_form("d(z^2+t^2) + 5*t*dz", tz, kInfOrder);
  Verdict v = verify_first_integral(f, w);
  CHECK(v.holds());
  CHECK(v.reason.find("exactly") != std::string::npos);

  // the pulled-back version with f = x^2 y^3
  VarSet xyz{"x", "y", "z"};
  SubstitutionMap phi(xyz, tz,
                      {parse_series("x^2*y^3", xyz, kInfOrder),
                       parse_series("z", xyz, kInfOrder)});
  MeroFunction f3 = pullback_integral(f, phi);
  DiffForm w3 = parse_form("d(z^2+(x^2*y^3)^2) + 5*x^2*y^3*dz", xyz, kInfOrder);
  CHECK(verify_first_integral(f3, w3).holds());

  // F = t is not a first integral
  MeroFunction ft = parse_mero("t", tz, kInfOrder);
  CHECK(verify_first_integral(ft, w).fails());

  // constants are rejected
  MeroFunction fc = parse_mero("3/2", tz, kInfOrder);
  CHECK(verify_first_integral(fc, w).fails());
}

TEST_CASE("pullback_integral: examples and the functoriality property") {
  VarSet tz{"t", "z"};
  VarSet xyz{"x", "y", "z"};
  SubstitutionMap phi(xyz, tz,
                      {parse_series("x*y", xyz, kInfOrder),
                       parse_series("z", xyz, kInfOrder)});
  MeroFunction ft = parse_mero("t", tz, kInfOrder);
  MeroFunction res = pullback_integral(ft, phi);
  CHECK(res.num == parse_series("x*y", xyz, kInfOrder));

  MeroFunction f = parse_mero("(t+2*z)^4/(2*t+z)", tz, kInfOrder);
  MeroFunction f2 = pullback_integral(f, phi);
  CHECK(f2.num == parse_series("(x*y+2*z)^4", xyz, kInfOrder));
  CHECK(f2.den == parse_series("2*x*y+z", xyz, kInfOrder));

  // degenerate denominator
  SubstitutionMap bad(xyz, tz,
                      {parse_series("x*y", xyz, kInfOrder),
                       parse_series("-2*x*y", xyz, kInfOrder)});
  CHECK_THROWS_AS(pullback_integral(f, bad), Error);

  // holds is preserved under random monomial pull-backs
  DiffForm w = parse_form("d(z^2+t^2) + 5*t*dz", tz, kInfOrder);
  for (int i = 0; i < 20; ++i) {
    std::uniform_int_distribution<int> e(1, 3);
    Expo ef;
    ef[0] = static_cast<int16_t>(e(rng()));
    ef[1] = static_cast<int16_t>(e(rng()));
    SubstitutionMap mono = SubstitutionMap::monomial(xyz, tz, {ef, unit_expo(2)});
    MeroFunction fm = pullback_integral(f, mono);
    CHECK(verify_first_integral(fm, mono.pullback(w)).holds());
  }
}

TEST_CASE("separatrix_family: the alpha=5 fixture") {
  FamilyParams fp = alpha5();

  // C = 0 is exactly z = -2t
  PuiseuxCurve c0 = separatrix_family(fp, Scalar(0), 10);
  CHECK(c0.denominator == 1);
  CHECK(c0.components[0] == parse_series("s", VarSet{"s"}, kInfOrder));
  CHECK(c0.components[1] ==
        parse_series("-2*s", VarSet{"s"}, kInfOrder).truncated(c0.components[1].order()));
  CHECK(verify_separatrix(c0, family_2d_form(fp, 14)).holds());

  // z = -2t into 2t dt + (5t+2z) dz vanishes identically
  VarSet tz{"t", "z"};
  DiffForm w2 = family_2d_form(fp, 14);

  // ten leaf constants annihilate the form through order >= 8 and the
  // tangent direction is -2 = alpha_1 for every C
  for (int ci = 1; ci <= 10; ++ci) {
    Scalar c = Scalar(Rational(ci, 3));
    PuiseuxCurve cur = separatrix_family(fp, c, 12);
    Verdict v = verify_separatrix(cur, w2);
    CHECK(v.holds());
    CHECK((!v.order || *v.order >= 8));
    // tangent: z'(0)/t'(0) = -2
    Scalar t1 = cur.components[0].terms().begin()->second;
    Scalar z1 = cur.components[1].terms().begin()->second;
    CHECK(z1 / t1 == Scalar(Rational(-2)));
  }

  // distinct C give distinct curves (injectivity at the working order)
  PuiseuxCurve a = separatrix_family(fp, Scalar(1), 10);
  PuiseuxCurve b = separatrix_family(fp, Scalar(2), 10);
  CHECK(a.components[1] != b.components[1]);

  // the engine constant matches the level set (t+2z)^4 = C_level (2t+z):
  // the graph coefficient of t^4 equals 81/C_level
  VarSet uv{"s"};
  PuiseuxCurve cur = separatrix_family(fp, Scalar(Rational(27, 5)), 12);
  MeroFunction F = parse_mero("(t+2*z)^4/(2*t+z)", tz, kInfOrder);
  std::vector<TruncSeries> img{cur.components[0], cur.components[1]};
  TruncSeries along_num = F.num.substituted(img);
  TruncSeries along_den = F.den.substituted(img);
  // F is constant along the curve: num = C_level * den
  Scalar c_level = along_num.terms().begin()->second /
                   along_den.terms().begin()->second;
  CHECK(along_num == along_den.scaled(c_level));
  // reparameterize z as a graph over t and compare the t^4 coefficient
  SubstitutionMap surf = separatrix_surface(fp, Scalar(Rational(27, 5)), 12);
  TruncSeries zxy = surf.component(2);  // z(x, y) = -2xy + a (xy)^4 + ...
  Expo e4;
  e4[0] = 4;
  e4[1] = 4;
  Scalar a4 = zxy.terms().count(e4) ? zxy.terms().at(e4) : Scalar(0);
  CHECK(a4 == Scalar(81) / c_level);

  // Dulac class has no dicritical family
  FamilyParams fd = make_family(1, 1, 2, 1, Scalar(5),
                                parse_series("1 + t", VarSet{"t"}, kInfOrder));
  CHECK_THROWS_AS(separatrix_family(fd, Scalar(1), 10), Error);
}

TEST_CASE("separatrix_family: 3D version via composition with f") {
  FamilyParams fp = alpha5();
  DiffForm w3 = family_3d_form(fp, 14);

  SubstitutionMap surf = separatrix_surface(fp, Scalar(1), 12);
  // z(x,y) starts with -2xy
  Expo e11;
  e11[0] = 1;
  e11[1] = 1;
  CHECK(surf.component(2).terms().at(e11) == Scalar(Rational(-2)));
  // the surface is invariant: pullback of Omega vanishes through order >= 8
  DiffForm pulled = surf.pullback(w3);
  CHECK(pulled.is_zero());
  CHECK(pulled.order() >= 8);

  // diagonal Puiseux curve annihilates Omega as well
  PuiseuxCurve diag = separatrix_diagonal_3d(fp, Scalar(1), 12);
  CHECK(verify_separatrix(diag, w3).holds());

  // z = s is not a separatrix of the 2D form
  PuiseuxCurve badc;
  badc.param = "s";
  badc.denominator = 1;
  badc.target = VarSet{"t", "z"};
  VarSet uv{"s"};
  badc.components = {TruncSeries::variable(uv, 0, 10), TruncSeries::variable(uv, 0, 10)};
  badc.order = 10;
  CHECK(verify_separatrix(badc, family_2d_form(fp, 12)).fails());
}

TEST_CASE("separatrix with a genuinely fractional exponent") {
  // model germ with quotient 3/2 at the origin: 3 v dT - 2 T dv
  // leaves v^2 = C T^3: Puiseux with denominator 2
  VarSet tw{"t", "w"};
  FoliationGerm g = make_germ(parse_form("3*w*dt - 2*t*dw", tw, kInfOrder), {0});
  VarSet uv{"s"};
  PuiseuxCurve cur;
  cur.param = "s";
  cur.denominator = 2;
  cur.target = tw;
  cur.components = {TruncSeries::monomial(uv, unit_expo(0, 2), Scalar(1), 20),
                    TruncSeries::monomial(uv, unit_expo(0, 3), Scalar(Rational(5, 7)), 20)};
  cur.order = 20;
  CHECK(verify_separatrix(cur, g.form).holds());
  CHECK(cur.str().find("3/2") != std::string::npos);  // rational exponent display
}

TEST_CASE("rectify: oracle solutions of the transport equation") {
  VarSet tz{"t", "z"};
  // B = 0
  DiffForm w0 = parse_form("dt", tz, kInfOrder);
  CHECK(rectify(w0, 10) == TruncSeries::constant(tz, Scalar(1), 10));

  // B = t: S1 = e^{-z}
  DiffForm w1 = parse_form("dt + t*dz", tz, kInfOrder);
  TruncSeries s1 = rectify(w1, 10);
  TruncSeries expz = (-TruncSeries::variable(tz, 1, 10)).exp(10);
  CHECK(s1 == expz);

  // B = t z: S1 = e^{-z^2/2}
  DiffForm w2 = parse_form("dt + t*z*dz", tz, kInfOrder);
  TruncSeries s2 = rectify(w2, 10);
  TruncSeries arg = parse_series("z^2", tz, 10).scaled(Scalar(Rational(-1, 2)));
  CHECK(s2 == arg.exp(10));

  // post-condition on random polynomial B with t | B
  for (int i = 0; i < 50; ++i) {
    TruncSeries b = (TruncSeries::variable(tz, 0, kInfOrder) * random_poly(tz, 2))
                        .truncated(8);
    DiffForm w(tz, 1, kInfOrder);
    w.coeff(0) = TruncSeries::constant(tz, Scalar(1));
    w.coeff(1) = b;
    TruncSeries s = rectify(w, 8);
    // S^*(dt + B dz) ^ dt = 0 to order
    std::vector<TruncSeries> comps{
        (TruncSeries::variable(tz, 0, 8) * s).truncated(8),
        TruncSeries::variable(tz, 1, 8)};
    SubstitutionMap smap(tz, tz, comps);
    DiffForm res = wedge(smap.pullback(w), DiffForm::differential(tz, 0));
    CHECK(res.is_zero());
  }

  // axis not invariant
  DiffForm wb = parse_form("dt + dz", tz, kInfOrder);
  CHECK_THROWS_WITH_AS(rectify(wb, 8), "axis not invariant; choose other axis convention",
                       Error);
}

TEST_CASE("dicriticalness_section: alpha=5 with f = x*y") {
  FamilyParams fp = alpha5();
  SectionMap s = dicriticalness_section(fp, 10);
  CHECK(s.n1 * s.m2 - s.m1 * s.n2 == 1);
  CHECK(s.m1 == 1);
  CHECK(s.m2 == 3);
  CHECK(s.alpha1 == Scalar(Rational(-2)));
  CHECK(s.certificate_order >= 8);
  CHECK(s.S1.constant_term().is_one());

  // sigma^* Omega != 0 and sigma^* Omega ^ dt = 0 were certified; as an
  // independent numeric path, the curves z -> sigma(t0, z) stay inside leaves:
  // sum_i c_i(sigma) d(sigma_i)/dz vanishes at sample points
  DiffForm w3 = family_3d_form(fp, 14);
  for (double t0 : {0.1, 0.05}) {
    for (double z0 : {0.08, -0.06}) {
      std::vector<std::complex<double>> pt{{t0, 0.0}, {z0, 0.0}};
      std::vector<std::complex<double>> gamma(3), dgamma(3);
      for (int i = 0; i < 3; ++i) {
        gamma[static_cast<size_t>(i)] = s.sigma.component(i).eval(pt);
        dgamma[static_cast<size_t>(i)] = s.sigma.component(i).derivative(1).eval(pt);
      }
      std::complex<double> res(0.0, 0.0);
      for (int i = 0; i < 3; ++i)
        res += w3.coeff_d(i).eval(gamma) * dgamma[static_cast<size_t>(i)];
      CHECK(std::abs(res) < 1e-9);
    }
  }

  // generic alpha is rejected
  FamilyParams f17;
  f17.p = f17.q = 1;
  f17.k = 2;
  f17.n = 1;
  f17.alpha_sq = Scalar(17);
  f17.U = parse_series("1", VarSet{"t"}, kInfOrder);
  CHECK_THROWS_AS(dicriticalness_section(f17, 8), Error);
}

TEST_CASE("dicriticalness_section: f = x^2 y^3 carries fractional unit powers") {
  FamilyParams fp = make_family(2, 3, 2, 1, Scalar(5),
                                parse_series("1", VarSet{"t"}, kInfOrder));
  SectionMap s = dicriticalness_section(fp, 8);
  CHECK(s.certificate_order >= 8);
  // sigma_2 = z^{m1}
  CHECK(s.sigma.component(1) ==
        TruncSeries::monomial(VarSet{"t", "z"}, unit_expo(1, s.m1), Scalar(1), 10));
  // sigma_1 = t^{n1} * unit
  Expo lead = s.sigma.component(0).min_exponents();
  CHECK(lead[0] == s.n1);
  CHECK(lead[1] == 0);
}

TEST_CASE("dicriticalness_section: monomialized f with a unit V") {
  FamilyParams fp = alpha5();
  VarSet xy{"x", "y"};
  TruncSeries v = parse_series("1 + x + x*y", xy, 10);
  SectionMap s = dicriticalness_section_monomialized(fp, 1, 1, v, 8);
  CHECK(s.certificate_order >= 8);
  // sigma_up keeps the pure monomial first components
  Expo lead = s.sigma.component(0).min_exponents();
  CHECK(s.sigma.component(0).terms().size() == 1);
  CHECK(lead[0] == s.n1);

  TruncSeries vzero = parse_series("x + y", xy, 10);
  CHECK_THROWS_AS(dicriticalness_section_monomialized(fp, 1, 1, vzero, 8), Error);
}
