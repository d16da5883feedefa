#include "dicrit/holonomy.hpp"

#include <cmath>

namespace dicrit {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LiftContext::LiftContext(const FoliationGerm& g, int divisor_var,
                         HolonomySettings settings)
    : divisor_var_(divisor_var), coord_var_(1 - divisor_var), settings_(settings) {
  if (g.vars().size() != 2) throw Error("holonomy lifts need a 2-variable germ");
  if (!divisor_invariant(g.form, divisor_var))
    throw Error("component dicritical: holonomy is not defined");
  auto compile = [&](const TruncSeries& s) {
    std::vector<Term> out;
    for (const auto& [e, c] : s.terms()) {
      Term t;
      t.e = {e[divisor_var_], e[coord_var_]};
      t.c = c.to_complex();
      out.push_back(t);
      scale_ = std::max(scale_, std::abs(t.c));
    }
    return out;
  };
  c_fiber_ = compile(g.form.coeff_d(divisor_var_));
  c_coord_ = compile(g.form.coeff_d(coord_var_));
}

std::complex<double> LiftContext::eval(const std::vector<Term>& p,
                                       std::complex<double> t,
                                       std::complex<double> s) const {
  std::complex<double> acc(0.0, 0.0);
  for (const Term& term : p) {
    std::complex<double> v = term.c;
    for (int k = 0; k < term.e[0]; ++k) v *= t;
    for (int k = 0; k < term.e[1]; ++k) v *= s;
    acc += v;
  }
  return acc;
}

BranchedValue LiftContext::lift_path(
    const std::function<std::complex<double>(double)>& path,
    const std::function<std::complex<double>(double)>& dpath,
    BranchedValue t0) const {
  // Dormand-Prince 5(4) on dt/du = -(c_coord / c_fiber)(t, s(u)) * s'(u).
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto rhs = [&](double u, std::complex<double> t) {
    std::complex<double> s = path(u);
    std::complex<double> denom = eval(c_fiber_, t, s);
    if (std::abs(denom) < 1e-13 * (scale_ + 1.0))
      throw Error("transversality lost along the lift");
    return -(eval(c_coord_, t, s) / denom) * dpath(u);
  };

  double u = 0.0;
  std::complex<double> t = t0.value;
  double arg = t0.arg;
  double h = std::min(settings_.max_step, 1e-3);
  int steps = 0;
  std::complex<double> k1 = rhs(0.0, t);
  while (u < 1.0) {
    if (++steps > 2000000) throw Error("lift did not converge");
    h = std::min(h, 1.0 - u);
    std::complex<double> k2 = rhs(u + c2 * h, t + h * (a21 * k1));
    std::complex<double> k3 = rhs(u + c3 * h, t + h * (a31 * k1 + a32 * k2));
    std::complex<double> k4 = rhs(u + c4 * h, t + h * (a41 * k1 + a42 * k2 + a43 * k3));
    std::complex<double> k5 =
        rhs(u + c5 * h, t + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    std::complex<double> k6 =
        rhs(u + h, t + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    std::complex<double> tn =
        t + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    std::complex<double> k7 = rhs(u + h, tn);
    std::complex<double> err_c =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = std::abs(err_c);
    double tol = settings_.rk_tol * h + settings_.rk_tol * std::abs(tn);
    if (err <= tol || h <= 1e-12) {
      double darg = std::arg(tn / t);
      arg += darg;
      t = tn;
      u += h;
      k1 = k7;
      if (std::abs(t) > settings_.escape_radius)
        throw Error("radius too large: lift escaped the working polydisk");
    }
    double factor = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, factor));
    h = std::min(h, settings_.max_step);
  }
  return {t, arg};
}

BranchedValue LiftContext::lift_loop(const LoopSpec& loop, BranchedValue t0) const {
  std::complex<double> b = loop.basepoint;
  std::complex<double> c = loop.around_infinity
                               ? std::complex<double>(0.0, 0.0)
                               : loop.center.to_complex();
  double r = loop.radius;
  if (!loop.around_infinity && std::abs(b - c) < r * (1.0 - 1e-9))
    throw Error("basepoint inside the loop");
  std::complex<double> dir =
      loop.around_infinity ? b / std::abs(b) : (b - c) / std::abs(b - c);
  std::complex<double> entry = c + r * dir;
  double theta0 = std::arg(dir);
  double sweep = 2.0 * kPi * loop.orientation * (loop.around_infinity ? -1 : 1);

  auto seg = [&](std::complex<double> from, std::complex<double> to) {
    return std::make_pair(
        std::function<std::complex<double>(double)>(
            [from, to](double u) { return from + u * (to - from); }),
        std::function<std::complex<double>(double)>(
            [from, to](double) { return to - from; }));
  };
  auto [p1, d1] = seg(b, entry);
  auto circle = std::function<std::complex<double>(double)>(
      [c, r, theta0, sweep](double u) {
        return c + r * std::exp(std::complex<double>(0.0, theta0 + sweep * u));
      });
  auto dcircle = std::function<std::complex<double>(double)>(
      [c, r, theta0, sweep](double u) {
        return r * sweep *
               std::complex<double>(0.0, 1.0) *
               std::exp(std::complex<double>(0.0, theta0 + sweep * u));
      });
  auto [p2, d2] = seg(entry, b);

  BranchedValue t = lift_path(p1, d1, t0);
  t = lift_path(circle, dcircle, t);
  t = lift_path(p2, d2, t);
  return t;
}

Scalar lift_loop(const FoliationGerm& g, const LoopSpec& loop, const Scalar& t0,
                 const HolonomySettings& settings) {
  LiftContext ctx(g, loop.component_var, settings);
  BranchedValue r = ctx.lift_loop(loop, BranchedValue::principal(t0.to_complex()));
  return Scalar(r.value);
}

HolonomyMap::HolonomyMap(std::shared_ptr<const LiftContext> ctx, LoopSpec loop)
    : ctx_(std::move(ctx)) {
  steps_.push_back({std::move(loop), false});
}

BranchedValue HolonomyMap::evaluate(BranchedValue t0) const {
  BranchedValue t = t0;
  for (const Step& s : steps_) {
    LoopSpec loop = s.loop;
    if (s.inverted) loop.orientation = -loop.orientation;
    t = ctx_->lift_loop(loop, t);
  }
  return t;
}

HolonomyMap HolonomyMap::inverse() const {
  HolonomyMap out;
  out.ctx_ = ctx_;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    Step s = *it;
    s.inverted = !s.inverted;
    out.steps_.push_back(std::move(s));
  }
  return out;
}

HolonomyMap HolonomyMap::then(const HolonomyMap& b) const {
  HolonomyMap out = *this;
  if (!out.ctx_) out.ctx_ = b.ctx_;
  out.steps_.insert(out.steps_.end(), b.steps_.begin(), b.steps_.end());
  return out;
}

std::complex<double> HolonomyMap::multiplier(double t0) const {
  auto m = [&](double h) { return (*this)(std::complex<double>(h, 0.0)) / h; };
  // shrink t0 when the transient of a lift leaves the working polydisk
  for (int attempt = 0; attempt < 8; ++attempt, t0 /= 4) {
    try {
      std::complex<double> a0 = m(t0), a1 = m(t0 / 2), a2 = m(t0 / 4);
      std::complex<double> b0 = 2.0 * a1 - a0;
      std::complex<double> b1 = 2.0 * a2 - a1;
      return (4.0 * b1 - b0) / 3.0;
    } catch (const Error&) {
      if (attempt == 7) throw;
    }
  }
  throw Error("multiplier estimation failed");
}

std::vector<std::complex<double>> HolonomyMap::series_fit(double t0) const {
  // solve Vandermonde least squares for h(t) = m t + c2 t^2 + c3 t^3
  std::vector<double> ts{t0, 0.8 * t0, 0.6 * t0, 0.45 * t0, 0.3 * t0};
  std::vector<std::complex<double>> ys;
  for (double t : ts) ys.push_back((*this)(std::complex<double>(t, 0.0)));
  // normal equations on a 3-parameter model
  std::complex<double> ata[3][3] = {};
  std::complex<double> atb[3] = {};
  for (size_t i = 0; i < ts.size(); ++i) {
    std::complex<double> basis[3] = {ts[i], ts[i] * ts[i], ts[i] * ts[i] * ts[i]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) ata[r][c] += basis[r] * basis[c];
      atb[r] += basis[r] * ys[i];
    }
  }
  // small Gaussian elimination
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(ata[r][c]) > std::abs(ata[piv][c])) piv = r;
    std::swap(ata[c], ata[piv]);
    std::swap(atb[c], atb[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      std::complex<double> f = ata[r][c] / ata[c][c];
      for (int k = c; k < 3; ++k) ata[r][k] -= f * ata[c][k];
      atb[r] -= f * atb[c];
    }
  }
  return {atb[0] / ata[0][0], atb[1] / ata[1][1], atb[2] / ata[2][2]};
}

std::optional<int> HolonomyMap::periodicity_order(double t0, double tol,
                                                  int max_order,
                                                  double* residual) const {
  for (int attempt = 0; attempt < 8; ++attempt, t0 /= 4) {
    try {
      BranchedValue t = BranchedValue::principal(std::complex<double>(t0, 0.0));
      double best = 1e300;
      for (int k = 1; k <= max_order; ++k) {
        t = evaluate(t);
        double res = std::abs(t.value - std::complex<double>(t0, 0.0));
        if (res < best) best = res;
        if (res < tol) {
          if (residual) *residual = res;
          return k;
        }
      }
      if (residual) *residual = best;
      return std::nullopt;
    } catch (const Error&) {
      if (attempt == 7) throw;
    }
  }
  return std::nullopt;
}

HolonomyGenerators holonomy_generators(const SpecialComponent& sc,
                                       const HolonomySettings& settings) {
  const TransformResult& t = sc.last;
  for (const auto& d : t.divisor)
    if (d.var == sc.divisor_var && !d.invariant)
      throw Error("component dicritical: holonomy is not defined");

  HolonomyGenerators out;
  out.ctx = std::make_shared<LiftContext>(t.germ(), sc.divisor_var, settings);

  // finite marked points
  std::vector<std::complex<double>> centers;
  for (const auto& m : sc.points)
    if (!m.at_infinity) centers.push_back(m.location.to_complex());

  // Basepoint: keep both the markers and every lasso segment clear of the
  // other marked points (the lift grows sharply near a singular point).
  auto seg_dist = [](std::complex<double> p, std::complex<double> a,
                     std::complex<double> bb) {
    std::complex<double> ab = bb - a;
    double len2 = std::norm(ab);
    double u = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0)
                        : 0.0;
    return std::abs(p - (a + u * ab));
  };
  std::complex<double> base(0.0, 1.0);
  {
    std::vector<std::complex<double>> candidates{
        {0.0, 1.0}, {0.9, 0.7}, {1.0, 0.0}, {-0.8, 0.8},
        {0.3, -1.0}, {1.6, 0.3}, {0.5, -0.6}, {-0.4, -0.9}};
    double best = -1.0;
    for (const auto& cand : candidates) {
      double score = 1e300;
      for (const auto& c : centers) score = std::min(score, std::abs(cand - c));
      for (const auto& c : centers) {
        double dmin = std::abs(cand - c);
        for (const auto& o : centers)
          if (std::abs(o - c) > 1e-9) dmin = std::min(dmin, std::abs(o - c));
        std::complex<double> entry = c + 0.4 * dmin * (cand - c) / std::abs(cand - c);
        for (const auto& o : centers)
          if (std::abs(o - c) > 1e-9)
            score = std::min(score, seg_dist(o, cand, entry));
      }
      if (score > best) {
        best = score;
        base = cand;
      }
    }
  }
  out.basepoint = base;

  for (const auto& m : sc.points) {
    GeneratorInfo gi;
    gi.at_infinity = m.at_infinity;
    LoopSpec loop;
    loop.basepoint = base;
    if (m.at_infinity) {
      double rmax = std::abs(base);
      for (const auto& c : centers) rmax = std::max(rmax, std::abs(c));
      loop.around_infinity = true;
      loop.radius = 2.0 * rmax + 1.0;
      gi.label = "infinity";
    } else {
      std::complex<double> c = m.location.to_complex();
      double dmin = std::abs(base - c);
      for (const auto& other : centers)
        if (std::abs(other - c) > 1e-9) dmin = std::min(dmin, std::abs(other - c));
      loop.center = m.location;
      loop.radius = 0.4 * dmin;
      gi.label = "around " + m.location.str();
      gi.center = m.location;
    }
    HolonomyMap h(out.ctx, loop);
    gi.multiplier = h.multiplier(settings.probe_t0);
    // predicted multiplier from the local eigenvalue data, when available
    if (!m.at_infinity) {
      SingularityClass cls = classify_simple_type(m.germ, 6);
      if (cls.cs_residue) {
        std::complex<double> cs = cls.cs_residue->to_complex();
        gi.predicted =
            std::exp(std::complex<double>(0.0, 2.0 * kPi) * cs);
      }
    }
    out.generators.push_back(std::move(h));
    out.info.push_back(std::move(gi));
  }
  return out;
}

HolonomyProbe probe_group(HolonomyGenerators& gens) {
  HolonomyProbe probe;
  const HolonomySettings& st = gens.ctx->settings();
  probe.available = true;
  probe.tol_hold = st.tol_hold;
  probe.tol_fail = st.tol_fail;
  probe.finite_orders = true;
  double worst_order_res = 0.0;
  for (size_t i = 0; i < gens.generators.size(); ++i) {
    double res = 0.0;
    auto ord = gens.generators[i].periodicity_order(st.probe_t0, st.tol_hold * 10,
                                                    st.max_order, &res);
    gens.info[i].order = ord;
    gens.info[i].order_residual = res;
    if (ord) {
      probe.generator_orders.push_back(*ord);
    } else {
      probe.finite_orders = false;
      probe.generator_orders.push_back(0);
    }
    worst_order_res = std::max(worst_order_res, res);
  }
  probe.order_residual = worst_order_res;

  double worst = 0.0;
  for (size_t i = 0; i < gens.generators.size(); ++i) {
    for (size_t j = i + 1; j < gens.generators.size(); ++j) {
      HolonomyMap comm = gens.generators[i]
                             .then(gens.generators[j])
                             .then(gens.generators[i].inverse())
                             .then(gens.generators[j].inverse());
      double t0 = st.probe_t0;
      for (int attempt = 0; attempt < 8; ++attempt, t0 /= 4) {
        try {
          std::complex<double> z0(t0, 0.0);
          worst = std::max(worst, std::abs(comm(z0) - z0));
          break;
        } catch (const Error&) {
          if (attempt == 7) throw;
        }
      }
    }
  }
  probe.commutator_residual = worst;
  probe.abelian = worst < st.tol_hold;
  return probe;
}

BranchedValue dulac_map(int p, int q, const BranchedValue& t) {
  if (t.value == std::complex<double>(0.0, 0.0)) throw Error("Dulac map at t = 0");
  double mod = std::abs(t.value);
  double ratio = static_cast<double>(p) / static_cast<double>(q);
  double new_arg = t.arg * ratio;
  return {std::pow(mod, ratio) * std::exp(std::complex<double>(0.0, new_arg)),
          new_arg};
}

BranchedValue AdjoinedMap::evaluate(const BranchedValue& s) const {
  BranchedValue down = dulac_map(corner.p, corner.q, s);
  BranchedValue mid = h.evaluate(down);
  return dulac_map(corner.q, corner.p, mid);
}

std::complex<double> AdjoinedMap::multiplier(double t0) const {
  std::vector<std::complex<double>> ratios;
  for (double s : {t0, t0 / 2, t0 / 4}) {
    BranchedValue in = BranchedValue::principal(std::complex<double>(s, 0.0));
    ratios.push_back(evaluate(in).value / s);
  }
  // branch certificate: successive estimates must agree to first order
  if (std::abs(ratios[2] - ratios[1]) > 0.5 * std::abs(ratios[1]) + 1e-6)
    throw Error("branch ambiguity not resolvable on the sampled disk");
  std::complex<double> b0 = 2.0 * ratios[1] - ratios[0];
  std::complex<double> b1 = 2.0 * ratios[2] - ratios[1];
  return (4.0 * b1 - b0) / 3.0;
}

AdjoinedMap adjoin(const CornerData& corner, const HolonomyMap& h) {
  AdjoinedMap out;
  out.corner = corner;
  out.h = h;
  return out;
}

std::complex<double> RationalFn::eval(std::complex<double> t) const {
  std::vector<std::complex<double>> pt{t};
  std::complex<double> d = den.eval(pt);
  if (std::abs(d) < 1e-300) throw Error("sample at a pole of the rational function");
  return num.eval(pt) / d;
}

bool RationalFn::near_pole(std::complex<double> t, double tol) const {
  std::vector<std::complex<double>> pt{t};
  double mx = 1.0;
  for (const auto& [e, c] : den.terms()) mx = std::max(mx, c.abs());
  return std::abs(den.eval(pt)) < tol * mx;
}

Verdict invariant_rational_test(const std::vector<HolonomyMap>& gens,
                                const RationalFn& r,
                                const std::vector<std::complex<double>>& samples,
                                double tol_hold, double tol_fail) {
  double worst = 0.0;
  for (const auto& s : samples) {
    if (r.near_pole(s)) throw Error("sample at a pole of the rational function");
    std::complex<double> rs = r.eval(s);
    for (const auto& h : gens) {
      std::complex<double> hs = h(s);
      double res = std::abs(r.eval(hs) - rs) / (1.0 + std::abs(rs));
      worst = std::max(worst, res);
    }
  }
  Verdict v = Verdict::make(Outcome::inconclusive, "invariant-rational", "");
  v.residual = worst;
  if (worst < tol_hold) {
    v.outcome = Outcome::holds;
    v.reason = "rational function invariant under all computed generators";
  } else if (worst > tol_fail) {
    v.outcome = Outcome::fails;
    v.reason = "rational function moved by a holonomy generator";
  } else {
    v.reason = "invariance residual in the inconclusive band";
  }
  return v;
}

}  // namespace dicrit
