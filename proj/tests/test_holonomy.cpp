#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicrit/holonomy.hpp"
#include "test_util.hpp"

using namespace dicrit;
using namespace dicrit::testing;

namespace {
constexpr double kPi = 3.14159265358979323846;

FoliationGerm corner_model(int p, int q) {
  // p z dx + q x dz over (x, z); components x=0 and z=0 invariant
  VarSet xz{"x", "z"};
  DiffForm w(xz, 1, kInfOrder);
  w.coeff(0) = TruncSeries::variable(xz, 1).scaled(Scalar(p));
  w.coeff(1) = TruncSeries::variable(xz, 0).scaled(Scalar(q));
  return make_germ(w, {0, 1});
}

SpecialComponent alpha5_component() {
  FamilyParams f5 = make_family(1, 1, 2, 1, Scalar(5),
                                parse_series("1", VarSet{"t"}, kInfOrder));
  return family_special_component(family_2d_form(f5, 16), 1);
}
}  // namespace

TEST_CASE("lift_loop: corner model h(t) = e^{-2 pi i p/q} t") {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {1, 1}, {2, 3}}) {
    FoliationGerm g = corner_model(p, q);
    LoopSpec loop;
    loop.component_var = 1;  // the component z = 0, loop in x around the origin
    loop.center = Scalar(0);
    loop.radius = 1.0;
    loop.basepoint = {1.0, 0.0};
    Scalar out = lift_loop(g, loop, Scalar(0.05));
    std::complex<double> expected =
        0.05 * std::exp(std::complex<double>(0.0, -2.0 * kPi * p / q));
    CHECK(std::abs(out.to_complex() - expected) < 1e-6);
  }
}

TEST_CASE("lift_loop: multiplier at the alpha=5 resonant point") {
  SpecialComponent sc = alpha5_component();
  LoopSpec loop;
  loop.component_var = 0;
  loop.center = Scalar(Rational(-1, 2));
  loop.radius = 0.5;
  loop.basepoint = {0.9, 0.7};
  Scalar out = lift_loop(sc.last.germ(), loop, Scalar(0.05));
  // linear part of the return map is e^{2 pi i mu_tr/mu_div} = e^{-8 pi i/3}
  std::complex<double> lin = 0.05 * std::exp(std::complex<double>(0.0, -8.0 * kPi / 3));
  CHECK(std::abs(out.to_complex() - lin) < 5e-3);  // nonlinear O(t0^2) remainder

  LiftContext ctx(sc.last.germ(), 0, HolonomySettings{});
  HolonomyMap h(std::make_shared<LiftContext>(ctx), loop);
  std::complex<double> mult = h.multiplier(0.05);
  CHECK(std::abs(mult - std::exp(std::complex<double>(0.0, -8.0 * kPi / 3))) < 1e-5);
}

TEST_CASE("homotopy invariance: two radii around the same point agree") {
  SpecialComponent sc = alpha5_component();
  auto ctx = std::make_shared<LiftContext>(sc.last.germ(), 0, HolonomySettings{});
  std::complex<double> t0(0.05, 0.0);
  std::complex<double> r1, r2;
  for (double radius : {0.35, 0.55}) {
    LoopSpec loop;
    loop.component_var = 0;
    loop.center = Scalar(Rational(-1, 2));
    loop.radius = radius;
    loop.basepoint = {0.9, 0.7};
    HolonomyMap h(ctx, loop);
    (radius < 0.5 ? r1 : r2) = h(t0);
  }
  CHECK(std::abs(r1 - r2) < 1e-6);
}

TEST_CASE("composition convention and inverses") {
  SpecialComponent sc = alpha5_component();
  auto ctx = std::make_shared<LiftContext>(sc.last.germ(), 0, HolonomySettings{});
  LoopSpec l1;
  l1.component_var = 0;
  l1.center = Scalar(Rational(-1, 2));
  l1.radius = 0.4;
  l1.basepoint = {0.9, 0.7};
  LoopSpec l2 = l1;
  l2.center = Scalar(Rational(-2));
  l2.radius = 0.5;
  HolonomyMap h1(ctx, l1), h2(ctx, l2);

  std::complex<double> t0(0.05, 0.0);
  // concatenation gamma_1 gamma_2 maps to h_{gamma_2} o h_{gamma_1}
  CHECK(std::abs(h1.then(h2)(t0) - h2(h1(t0))) < 1e-9);
  // h o h^{-1} = id
  CHECK(std::abs(h1.then(h1.inverse())(t0) - t0) < 1e-6);
  CHECK(std::abs(h2.inverse().then(h2)(t0) - t0) < 1e-6);
}

TEST_CASE("holonomy generators for the alpha=5 fixture") {
  SpecialComponent sc = alpha5_component();
  HolonomyGenerators gens = holonomy_generators(sc);
  // two finite points, no singular point at infinity after one blow-up
  REQUIRE(gens.generators.size() == 2);
  // multiplier at the resonant point matches e^{2 pi i CS} within 1e-5
  for (size_t i = 0; i < gens.info.size(); ++i) {
    REQUIRE(gens.info[i].predicted.has_value());
    CHECK(std::abs(gens.info[i].multiplier - *gens.info[i].predicted) < 1e-5);
  }
  // the big circle around everything is trivial (w = infinity is regular)
  LoopSpec big;
  big.component_var = 0;
  big.around_infinity = true;
  big.radius = 6.0;
  big.basepoint = gens.basepoint;
  HolonomyMap hbig(gens.ctx, big);
  std::complex<double> t0(0.05, 0.0);
  CHECK(std::abs(hbig(t0) - t0) < 1e-6);

  // generators commute here (the group is abelian for the fixture)
  HolonomyProbe probe = probe_group(gens);
  CHECK(probe.abelian);
  CHECK(probe.finite_orders);
  std::vector<int> orders = probe.generator_orders;
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<int>{3, 3});
}

TEST_CASE("moussu example: h1^2 = h2^3 = id but no commutation") {
  VarSet xy{"x", "y"};
  FoliationGerm g = make_germ(
      parse_form("d(y^2 + x^3) + x*(2*x*dy - 3*y*dx)", xy, kInfOrder));
  SpecialComponent sc = resolve_to_special_component(g);
  CHECK(sc.blowup_count == 3);
  HolonomyGenerators gens = holonomy_generators(sc);
  HolonomyProbe probe = probe_group(gens);

  std::vector<int> orders = probe.generator_orders;
  std::sort(orders.begin(), orders.end());
  REQUIRE(orders.size() == 3);
  CHECK(orders[0] == 2);
  CHECK(orders[1] == 3);
  CHECK(orders[2] == 6);

  const HolonomyMap* h1 = nullptr;
  const HolonomyMap* h2 = nullptr;
  for (size_t i = 0; i < gens.generators.size(); ++i) {
    if (gens.info[i].order == 2) h1 = &gens.generators[i];
    if (gens.info[i].order == 3) h2 = &gens.generators[i];
  }
  REQUIRE(h1 != nullptr);
  REQUIRE(h2 != nullptr);
  std::complex<double> t0(0.05, 0.0);
  CHECK(std::abs(h1->then(*h1)(t0) - t0) < 1e-4);
  CHECK(std::abs(h2->then(*h2).then(*h2)(t0) - t0) < 1e-4);
  HolonomyMap comm = h1->then(*h2).then(h1->inverse()).then(h2->inverse());
  CHECK(std::abs(comm(t0) - t0) > 1e-3);
  CHECK_FALSE(probe.abelian);
}

TEST_CASE("dulac_map: examples and branch tracking") {
  BranchedValue t = BranchedValue::principal({0.04, 0.0});
  CHECK(std::abs(dulac_map(1, 2, t).value - std::complex<double>(0.2, 0.0)) < 1e-12);
  CHECK(std::abs(dulac_map(1, 1, t).value - t.value) < 1e-15);
  BranchedValue u = BranchedValue::principal({0.1, 0.0});
  CHECK(std::abs(dulac_map(2, 1, u).value - std::complex<double>(0.01, 0.0)) < 1e-15);
  CHECK_THROWS_AS(dulac_map(1, 2, BranchedValue::principal({0.0, 0.0})), Error);

  // branch continuity: argument scales by p/q without mod-2pi jumps
  BranchedValue far{std::polar(0.04, 3.0 * kPi), 3.0 * kPi};
  BranchedValue d = dulac_map(1, 2, far);
  CHECK(d.arg == doctest::Approx(1.5 * kPi));
}

TEST_CASE("adjoin: xi^q = 1 across model corners") {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}) {
    FoliationGerm g = corner_model(p, q);
    auto ctx = std::make_shared<LiftContext>(g, 1, HolonomySettings{});
    LoopSpec loop;
    loop.component_var = 1;
    loop.center = Scalar(0);
    loop.radius = 1.0;
    loop.basepoint = {1.0, 0.0};
    HolonomyMap h(ctx, loop);  // h(t) = e^{-2 pi i p/q} t
    AdjoinedMap hd = adjoin(CornerData{p, q}, h);
    std::complex<double> xi = hd.multiplier(0.05);
    std::complex<double> xiq(1.0, 0.0);
    for (int k = 0; k < q; ++k) xiq *= xi;
    CHECK(std::abs(xiq - std::complex<double>(1.0, 0.0)) < 1e-6);
  }
  // h = id adjoins to the identity
  SpecialComponent sc = alpha5_component();
  auto ctx = std::make_shared<LiftContext>(sc.last.germ(), 0, HolonomySettings{});
  HolonomyMap id;
  AdjoinedMap hid = adjoin(CornerData{1, 2}, id.then(HolonomyMap{}));
  BranchedValue s = BranchedValue::principal({0.03, 0.0});
  CHECK(std::abs(hid.evaluate(s).value - s.value) < 1e-12);
}

TEST_CASE("invariant_rational_test: restriction of the first integral") {
  SpecialComponent sc = alpha5_component();
  HolonomyGenerators gens = holonomy_generators(sc);

  // r(T) = F(T, T w_b) = T^3 (1+2w_b)^4/(2+w_b) on the transversal {w = w_b}
  VarSet tv{"T"};
  std::complex<double> wb = gens.basepoint;
  std::complex<double> cst = std::pow(1.0 + 2.0 * wb, 4) / (2.0 + wb);
  RationalFn r;
  r.num = TruncSeries::monomial(tv, unit_expo(0, 3), Scalar(cst));
  r.den = TruncSeries::constant(tv, Scalar(1));
  std::vector<std::complex<double>> samples{
      {0.05, 0.0}, {0.03, 0.02}, {-0.01, 0.04}, {0.02, -0.03}};
  Verdict v = invariant_rational_test(gens.generators, r, samples);
  CHECK(v.holds());
  CHECK(*v.residual < 1e-6);

  // r(T) = T moves under a generator with non-unit multiplier
  RationalFn rt;
  rt.num = TruncSeries::variable(tv, 0);
  rt.den = TruncSeries::constant(tv, Scalar(1));
  Verdict vt = invariant_rational_test(gens.generators, rt, samples);
  CHECK(vt.fails());

  // constants are invariant under anything
  RationalFn rc;
  rc.num = TruncSeries::constant(tv, Scalar(Rational(7, 3)));
  rc.den = TruncSeries::constant(tv, Scalar(1));
  CHECK(invariant_rational_test(gens.generators, rc, samples).holds());

  // sampling at a pole errors
  RationalFn rp;
  rp.num = TruncSeries::constant(tv, Scalar(1));
  rp.den = TruncSeries::variable(tv, 0);
  std::vector<std::complex<double>> at_pole{{0.0, 0.0}};
  CHECK_THROWS_AS(invariant_rational_test(gens.generators, rp, at_pole), Error);
}

TEST_CASE("series fit of a holonomy map reproduces the multiplier") {
  SpecialComponent sc = alpha5_component();
  HolonomyGenerators gens = holonomy_generators(sc);
  for (size_t i = 0; i < gens.generators.size(); ++i) {
    auto fit = gens.generators[i].series_fit(0.05);
    CHECK(std::abs(fit[0] - gens.info[i].multiplier) < 1e-4);
  }
}
