#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicrit/blowup.hpp"
#include "test_util.hpp"

using namespace dicrit;
using namespace dicrit::testing;

static FoliationGerm germ2(const std::string& text, const VarSet& v,
                           std::vector<int> divisor = {}) {
  return make_germ(parse_form(text, v, kInfOrder), divisor);
}

TEST_CASE("blowup_point_2d: examples") {
  VarSet tz{"t", "z"};
  FoliationGerm g = germ2("2*t*dt + (5*t+2*z)*dz", tz);
  TransformResult r = blowup_point_2d(g, BlowupChart2D::main);
  VarSet tw{"t", "w"};
  CHECK(r.form == parse_form("(2*w^2+5*w+2)*dt + t*(2*w+5)*dw", tw, 12));
  CHECK(r.cofactor == parse_series("t", tw, 12));
  CHECK(r.divisor.size() == 1);
  CHECK(r.divisor[0].invariant);

  // pullback identity
  CHECK(r.chart.subst.pullback(g.form) == r.form.multiplied(r.cofactor));

  // radial form: dicritical after one blow-up
  FoliationGerm rad = germ2("t*dz - z*dt", tz);
  TransformResult rr = blowup_point_2d(rad, BlowupChart2D::main);
  CHECK(rr.form == parse_form("dw", tw, 12));
  CHECK(rr.cofactor == parse_series("t^2", tw, 12));
  CHECK_FALSE(rr.divisor[0].invariant);

  // cusp-like exact form
  FoliationGerm cusp = germ2("d(z^2 + t^3)", tz);
  TransformResult rc = blowup_point_2d(cusp, BlowupChart2D::main);
  CHECK(rc.form == parse_form("(2*w^2+3*t)*dt + 2*t*w*dw", tw, 12));
  auto pts = singular_points_on_divisor(rc);
  CHECK(pts.points.size() == 1);
  CHECK(pts.points[0].point[1].is_zero());

  FoliationGerm reg = germ2("dt + z*dz", tz);
  CHECK_THROWS_WITH_AS(blowup_point_2d(reg, BlowupChart2D::main), "nothing to blow up",
                       Error);
}

TEST_CASE("blowup_point_2d: both charts and pullback identity on random fixtures") {
  VarSet tz{"t", "z"};
  for (int i = 0; i < 20; ++i) {
    DiffForm w = random_1form(tz, 3);
    // force a singular origin
    for (int k = 0; k < 2; ++k) {
      TruncSeries c = w.coeff(k);
      TruncSeries c0 = TruncSeries::constant(tz, c.constant_term());
      w.coeff(k) = c - c0;
    }
    if (w.is_zero()) continue;
    FoliationGerm g = make_germ(w);
    if (!g.singular_at_origin()) continue;
    for (auto chart : {BlowupChart2D::main, BlowupChart2D::other}) {
      TransformResult r = blowup_point_2d(g, chart);
      CHECK(r.chart.subst.pullback(g.form) == r.form.multiplied(r.cofactor));
    }
  }
}

TEST_CASE("chart overlap: singular point locations agree under w -> 1/w") {
  VarSet tz{"t", "z"};
  int done = 0;
  while (done < 20) {
    DiffForm w = random_1form(tz, 3);
    for (int k = 0; k < 2; ++k)
      w.coeff(k) =
          w.coeff(k) - TruncSeries::constant(tz, w.coeff(k).constant_term());
    if (w.is_zero()) continue;
    FoliationGerm g = make_germ(w);
    if (!g.singular_at_origin()) continue;
    TransformResult main = blowup_point_2d(g, BlowupChart2D::main);
    TransformResult other = blowup_point_2d(g, BlowupChart2D::other);
    std::vector<Scalar> main_pts, other_pts;
    for (const auto& p : singular_points_on_divisor(main).points)
      if (!p.point[1].is_zero()) main_pts.push_back(p.point[1]);
    for (const auto& p : singular_points_on_divisor(other).points)
      if (!p.point[0].is_zero()) other_pts.push_back(p.point[0]);
    // every nonzero main-chart point w0 appears as 1/w0 in the other chart
    for (const auto& w0 : main_pts) {
      bool found = false;
      for (const auto& v0 : other_pts)
        if ((v0 - Scalar(1) / w0).abs() < 1e-7) found = true;
      CHECK(found);
    }
    CHECK(main_pts.size() == other_pts.size());
    ++done;
  }
}

TEST_CASE("blowup_axis_3d: the displayed family transforms") {
  VarSet xyz{"x", "y", "z"};
  // k = 2n case, p=q=n=1, alpha=5
  FoliationGerm g = make_germ(parse_form("d(z^2+(x*y)^2) + 5*x*y*dz", xyz, 16));
  TransformResult r = blowup_axis_chain(g, 1, 1, "w");
  VarSet xyw{"x", "y", "w"};
  CHECK(r.form ==
        parse_form("(2*w^2+5*w+2)*(y*dx+x*dy) + x*y*(2*w+5)*dw", xyw, 16));
  CHECK(r.cofactor == parse_series("x*y", xyw, 16));
  CHECK(r.divisor.size() == 2);
  CHECK(r.divisor[0].invariant);
  CHECK(r.divisor[1].invariant);
  CHECK(r.chart.subst.component(2) == parse_series("x*y*w", xyw, kInfOrder));

  // 2n < k case: n=1, k=4
  FoliationGerm g2 = make_germ(parse_form("d(z^2+(x*y)^4) + 5*x*y*dz", xyz, 16));
  TransformResult r2 = blowup_axis_chain(g2, 1, 1, "t");
  VarSet xyt{"x", "y", "t"};
  CHECK(r2.form == parse_form(
                       "(2*t^2 + 4*(x*y)^2 + 5*t)*(y*dx+x*dy) + x*y*(2*t+5)*dt",
                       xyt, 16));

  // count = 0 is the identity transform
  TransformResult r0 = blowup_axis_3d(g, Axis3D::x_axis, 0);
  CHECK(r0.form == g.form);
  CHECK(r0.cofactor.is_constant());

  // axis not in singular locus
  FoliationGerm bad = make_germ(parse_form("dz + x*dx", xyz, 16));
  CHECK_THROWS_WITH_AS(blowup_axis_3d(bad, Axis3D::x_axis, 1),
                       "axis not in singular locus", Error);
}

TEST_CASE("divisor_invariant: examples") {
  VarSet tw{"t", "w"};
  DiffForm a = parse_form("(2*w^2+5*w+2)*dt + t*(2*w+5)*dw", tw, 12);
  CHECK(divisor_invariant(a, "t"));
  DiffForm b = parse_form("dw", tw, 12);
  CHECK_FALSE(divisor_invariant(b, "t"));
  VarSet xy{"x", "y"};
  DiffForm c = parse_form("y*dx + x*dy", xy, 12);
  CHECK(divisor_invariant(c, "x"));
  CHECK_THROWS_AS(divisor_invariant(c, "q"), Error);
}

TEST_CASE("singular_points_on_divisor: family fixtures") {
  VarSet xyz{"x", "y", "z"};
  FoliationGerm g = make_germ(parse_form("d(z^2+(x*y)^2) + 5*x*y*dz", xyz, 16));
  TransformResult r = blowup_axis_chain(g, 1, 1, "w");
  auto sing = singular_points_on_divisor(r);
  REQUIRE(sing.points.size() == 2);
  std::vector<Rational> ws;
  for (const auto& p : sing.points) ws.push_back(p.point[2].rational());
  std::sort(ws.begin(), ws.end());
  CHECK(ws[0] == Rational(-2));
  CHECK(ws[1] == Rational(-1, 2));
  CHECK(sing.curves.size() >= 1);  // the corner curve x=y=0

  // alpha = 4: double root w = -1
  FoliationGerm g4 = make_germ(parse_form("d(z^2+(x*y)^2) + 4*x*y*dz", xyz, 16));
  auto s4 = singular_points_on_divisor(blowup_axis_chain(g4, 1, 1, "w"));
  REQUIRE(s4.points.size() == 1);
  CHECK(s4.points[0].point[2].rational() == Rational(-1));

  // Prop 5 transform: points t = 0 and t = -5/2
  FoliationGerm g5 = make_germ(parse_form("d(z^2+(x*y)^4) + 5*x*y*dz", xyz, 16));
  auto s5 = singular_points_on_divisor(blowup_axis_chain(g5, 1, 1, "t"));
  REQUIRE(s5.points.size() == 2);
  std::vector<Rational> ts;
  for (const auto& p : s5.points) ts.push_back(p.point[2].rational());
  std::sort(ts.begin(), ts.end());
  CHECK(ts[0] == Rational(-5, 2));
  CHECK(ts[1] == Rational(0));
}

TEST_CASE("iterated blow-up of an integer-ratio node turns dicritical at step k") {
  VarSet tz{"t", "z"};
  for (int k = 1; k <= 5; ++k) {
    // node with eigenvalue ratio k: leaves z = C t^k
    DiffForm w = parse_form("z*dt", tz, kInfOrder).scaled(Scalar(k)) -
                 parse_form("t*dz", tz, kInfOrder);
    FoliationGerm g = make_germ(w);
    int steps = 0;
    for (;;) {
      TransformResult r = blowup_point_2d(g, BlowupChart2D::main);
      ++steps;
      bool invariant = r.divisor[0].invariant;
      if (!invariant) {
        CHECK(steps == k);
        break;
      }
      REQUIRE(steps <= k);
      auto pts = singular_points_on_divisor(r);
      REQUIRE(pts.points.size() >= 1);
      // continue along the chain at the non-corner point
      bool advanced = false;
      for (const auto& p : pts.points) {
        FoliationGerm next = p.germ;
        if (next.singular_at_origin()) {
          g = next;
          advanced = true;
          break;
        }
      }
      REQUIRE(advanced);
    }
  }
}

TEST_CASE("integrability is preserved by the 3-variable strict transform") {
  VarSet xyz{"x", "y", "z"};
  FoliationGerm g =
      make_germ(parse_form("d(z^2+(x*y)^2) + 3*x*y*(1+x*y)*dz", xyz, 10));
  CHECK(integrability_residual(g.form).is_zero());
  TransformResult r = blowup_axis_chain(g, 1, 1, "w");
  CHECK(integrability_residual(r.form).is_zero());
}
