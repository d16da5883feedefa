#include "dicrit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dicrit {

std::string label_str(SingLabel l) {
  switch (l) {
    case SingLabel::regular: return "regular";
    case SingLabel::simple_a: return "simple-A";
    case SingLabel::simple_b_resonant: return "simple-B-resonant";
    case SingLabel::saddle_node: return "saddle-node";
    case SingLabel::dulac_c: return "dulac-C";
    case SingLabel::resonant_linearizable_candidate:
      return "resonant-linearizable-candidate";
    case SingLabel::dicritical_radial: return "dicritical-radial";
    default: return "unclassified";
  }
}

std::optional<Rational> rational_reconstruct(double x, double tol, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  double target = x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    if (fl > 1e17 || fl < -1e17) break;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - target) <= tol * (1.0 + std::abs(target)))
      return Rational(p1, q1);
    double rem = v - fl;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  return std::nullopt;
}

static std::optional<Rational> scalar_rational(const Scalar& s) {
  if (s.is_exact()) {
    if (!s.is_rational()) return std::nullopt;
    return s.rational();
  }
  std::complex<double> v = s.to_complex();
  if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real()))) return std::nullopt;
  return rational_reconstruct(v.real(), 1e-12, 10000);
}

static Scalar linear_coeff(const TruncSeries& s, int var) {
  auto it = s.terms().find(unit_expo(var));
  return it == s.terms().end() ? Scalar(0) : it->second;
}

static bool scalar_zero(const Scalar& s, double tol = 1e-10) {
  return s.is_exact() ? s.is_zero() : s.abs() < tol;
}

LinearPart2D linear_part_2d(const FoliationGerm& g) {
  if (g.vars().size() != 2) throw Error("linear part needs a 2-variable germ");
  if (!g.singular_at_origin()) throw Error("germ is not singular");
  VectorField x = dual_field_2d(g.form);
  LinearPart2D lp;
  lp.exact = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      lp.m[i][j] = linear_coeff(x.component(i), j);
      if (!lp.m[i][j].is_exact()) lp.exact = false;
    }
  Scalar tr = lp.m[0][0] + lp.m[1][1];
  Scalar det = lp.m[0][0] * lp.m[1][1] - lp.m[0][1] * lp.m[1][0];
  lp.nilpotent = scalar_zero(tr) && scalar_zero(det);
  Scalar disc = tr * tr - Scalar(4) * det;
  Scalar s = disc.sqrt();
  lp.eigenvalues = {(tr + s) / Scalar(2), (tr - s) / Scalar(2)};
  return lp;
}

std::vector<Scalar> log_residues(const DiffForm& logform) {
  if (!logform.logarithmic()) throw Error("form is not in logarithmic presentation");
  std::vector<Scalar> r;
  for (int i = 0; i < logform.vars().size(); ++i)
    r.push_back(logform.pole_flags()[static_cast<size_t>(i)]
                    ? logform.coeff(i).constant_term()
                    : Scalar(0));
  return r;
}

// ---------------------------------------------------------------------------
// small exact/float linear algebra over Scalar

static int kernel_basis(std::vector<std::vector<Scalar>> m,
                        std::vector<std::vector<Scalar>>* basis_out) {
  if (m.empty()) {
    if (basis_out) basis_out->clear();
    return 0;
  }
  size_t rows = m.size(), cols = m[0].size();
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t best = r;
    double best_abs = -1;
    for (size_t i = r; i < rows; ++i) {
      double a = m[i][c].abs();
      if (a > best_abs) { best_abs = a; best = i; }
    }
    if (scalar_zero(m[best][c], 1e-12)) continue;
    std::swap(m[r], m[best]);
    Scalar inv = Scalar(1) / m[r][c];
    for (size_t j = 0; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Scalar f = m[i][c];
      for (size_t j = 0; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  if (basis_out) {
    basis_out->clear();
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    for (size_t free_c = 0; free_c < cols; ++free_c) {
      if (is_pivot[free_c]) continue;
      std::vector<Scalar> v(cols, Scalar(0));
      v[free_c] = Scalar(1);
      for (size_t pr = 0; pr < pivot_col.size(); ++pr)
        v[static_cast<size_t>(pivot_col[pr])] = -m[pr][free_c];
      basis_out->push_back(std::move(v));
    }
  }
  return static_cast<int>(r);
}

// ---------------------------------------------------------------------------
// Poincare-Dulac normal form

static VectorField conjugate_field_2d(const VectorField& x, const SubstitutionMap& phi,
                                      int order) {
  std::vector<TruncSeries> xo;
  for (int i = 0; i < 2; ++i)
    xo.push_back(phi.pullback(x.component(i)).truncated(order));
  TruncSeries j00 = phi.component(0).derivative(0).truncated(order);
  TruncSeries j01 = phi.component(0).derivative(1).truncated(order);
  TruncSeries j10 = phi.component(1).derivative(0).truncated(order);
  TruncSeries j11 = phi.component(1).derivative(1).truncated(order);
  TruncSeries det = (j00 * j11 - j01 * j10).truncated(order);
  TruncSeries idet = det.inverse(order);
  TruncSeries c0 = ((j11 * xo[0] - j01 * xo[1]) * idet).truncated(order);
  TruncSeries c1 = ((j00 * xo[1] - j10 * xo[0]) * idet).truncated(order);
  return VectorField(phi.domain(), {c0, c1});
}

NormalForm2D poincare_dulac_normal_form(const FoliationGerm& g, int order) {
  LinearPart2D lp = linear_part_2d(g);
  if (lp.nilpotent) throw Error("nilpotent linear part has no Poincare-Dulac form");
  bool diagonal = scalar_zero(lp.m[0][1]) && scalar_zero(lp.m[1][0]);
  Scalar l1 = lp.eigenvalues.first, l2 = lp.eigenvalues.second;
  if (scalar_zero(l1 - l2) && !diagonal)
    throw Error("non-diagonalizable linear part");

  const VarSet& vars = g.vars();
  bool exact = lp.exact && l1.is_exact() && l2.is_exact() && g.form.is_exact_data();
  VectorField x = dual_field_2d(exact ? g.form : g.form.to_float());

  NormalForm2D nf;
  nf.order = order;
  nf.exact = exact;

  SubstitutionMap to_germ = SubstitutionMap::identity(vars);
  if (diagonal) {
    l1 = lp.m[0][0];
    l2 = lp.m[1][1];
  } else {
    auto eigvec = [&](const Scalar& l) -> std::pair<Scalar, Scalar> {
      if (!scalar_zero(lp.m[0][1]) || !scalar_zero(l - lp.m[0][0]))
        return {lp.m[0][1], l - lp.m[0][0]};
      return {l - lp.m[1][1], lp.m[1][0]};
    };
    auto [a0, a1] = eigvec(l1);
    auto [b0, b1] = eigvec(l2);
    TruncSeries u = TruncSeries::variable(vars, 0);
    TruncSeries v = TruncSeries::variable(vars, 1);
    std::vector<TruncSeries> comps{u.scaled(a0) + v.scaled(b0),
                                   u.scaled(a1) + v.scaled(b1)};
    to_germ = SubstitutionMap(vars, vars, comps);
    x = conjugate_field_2d(x, to_germ, order);
  }
  if (!exact) {
    l1 = l1.to_float();
    l2 = l2.to_float();
  }
  nf.eigenvalues = {l1, l2};

  double scale = l1.abs() + l2.abs() + 1.0;
  for (int d = 2; d <= order; ++d) {
    std::vector<TruncSeries> p(2, TruncSeries::zero(vars, kInfOrder));
    bool nontrivial = false;
    for (int comp = 0; comp < 2; ++comp) {
      for (const auto& [e, c] : x.component(comp).terms()) {
        if (e.total() != d) continue;
        Scalar delta = Scalar(Rational(e[0])) * l1 + Scalar(Rational(e[1])) * l2 -
                       (comp == 0 ? l1 : l2);
        bool resonant =
            delta.is_exact() ? delta.is_zero() : delta.abs() < 1e-9 * scale * d;
        if (resonant) continue;
        p[static_cast<size_t>(comp)].add_term(e, c / delta);
        nontrivial = true;
      }
    }
    if (!nontrivial) continue;
    std::vector<TruncSeries> comps;
    for (int i = 0; i < 2; ++i)
      comps.push_back(
          (TruncSeries::variable(vars, i) + p[static_cast<size_t>(i)]).truncated(order));
    SubstitutionMap phi(vars, vars, comps);
    x = conjugate_field_2d(x, phi, order);
    to_germ = compose(to_germ, phi);
  }

  for (int comp = 0; comp < 2; ++comp)
    for (const auto& [e, c] : x.component(comp).terms())
      if (e.total() >= 2 && e.total() <= order)
        nf.resonant.emplace_back(comp, e, c);
  nf.field = x;
  nf.to_germ = to_germ;
  return nf;
}

// ---------------------------------------------------------------------------
// saddle-node center reduction

static std::optional<int> saddle_node_center_order(const FoliationGerm& g, int order) {
  LinearPart2D lp = linear_part_2d(g);
  Scalar l1 = lp.eigenvalues.first, l2 = lp.eigenvalues.second;
  Scalar strong = scalar_zero(l1) ? l2 : l1;

  const VarSet& vars = g.vars();
  bool exact = lp.exact && g.form.is_exact_data() && strong.is_exact();
  VectorField x = dual_field_2d(exact ? g.form : g.form.to_float());

  auto eigvec = [&](const Scalar& l) -> std::pair<Scalar, Scalar> {
    if (!scalar_zero(lp.m[0][1]) || !scalar_zero(l - lp.m[0][0]))
      return {lp.m[0][1], l - lp.m[0][0]};
    return {l - lp.m[1][1], lp.m[1][0]};
  };
  auto [s0, s1] = eigvec(strong);
  auto [c0, c1] = eigvec(Scalar(0));
  Scalar det = s0 * c1 - s1 * c0;
  if (scalar_zero(det)) throw Error("saddle-node eigenbasis is degenerate");
  TruncSeries u = TruncSeries::variable(vars, 0);
  TruncSeries v = TruncSeries::variable(vars, 1);
  std::vector<TruncSeries> comps{u.scaled(s0) + v.scaled(c0),
                                 u.scaled(s1) + v.scaled(c1)};
  SubstitutionMap lmap(vars, vars, comps);
  x = conjugate_field_2d(x, lmap, order);

  // center manifold u = psi(v), psi = O(v^2)
  TruncSeries psi = TruncSeries::zero(vars, order);
  for (int k = 2; k <= order; ++k) {
    std::vector<TruncSeries> graph{psi, TruncSeries::variable(vars, 1, order)};
    TruncSeries xs = x.component(0).substituted(graph).truncated(order);
    TruncSeries xc = x.component(1).substituted(graph).truncated(order);
    TruncSeries res = xs - (psi.derivative(1) * xc).truncated(order);
    auto it = res.terms().find(unit_expo(1, k));
    if (it != res.terms().end() && !scalar_zero(it->second))
      psi += TruncSeries::monomial(vars, unit_expo(1, k), -(it->second) / strong, order);
  }
  std::vector<TruncSeries> graph{psi, TruncSeries::variable(vars, 1, order)};
  TruncSeries reduced = x.component(1).substituted(graph).truncated(order);
  int best = kInfOrder;
  double mag = x.component(1).max_coeff_abs() + 1.0;
  for (const auto& [e, c] : reduced.terms()) {
    if (!c.is_exact() && c.abs() < 1e-9 * mag) continue;
    best = std::min(best, e.total());
  }
  if (best == kInfOrder) return std::nullopt;
  return best;
}

// ---------------------------------------------------------------------------
// adapted invariants

static bool point_blowup_dicritical(const FoliationGerm& g) {
  int n = g.vars().size();
  if (n == 2) {
    TransformResult t = blowup_point_2d(g, BlowupChart2D::main);
    return !t.divisor[0].invariant;
  }
  for (int k = 0; k < n; ++k) {
    std::vector<Expo> expos;
    for (int j = 0; j < n; ++j) {
      Expo e = unit_expo(j);
      if (j != k) e[k] = 1;
      expos.push_back(e);
    }
    SubstitutionMap subst = SubstitutionMap::monomial(g.vars(), g.vars(), expos);
    DiffForm pulled = subst.pullback(g.form);
    if (pulled.is_zero()) continue;
    DiffForm satf = saturate(pulled).form;
    if (!divisor_invariant(satf, k)) return true;
  }
  return false;
}

AdaptedInvariants adapted_invariants(const FoliationGerm& g, int jet_order) {
  const VarSet& vars = g.vars();
  int n = vars.size();
  std::vector<bool> flags = g.divisor_flags();
  AdaptedCoefficients ac = adapted_coefficients(g.form, flags);

  AdaptedInvariants inv;
  inv.jet_order = jet_order;
  int nu = kInfOrder, mu = kInfOrder;
  for (int i = 0; i < n; ++i) {
    const TruncSeries& a = ac.a[static_cast<size_t>(i)];
    if (a.is_zero()) continue;
    int v = a.valuation();
    nu = std::min(nu, v);
    mu = std::min(mu, flags[static_cast<size_t>(i)] ? v : v + 1);
  }
  inv.nu = nu;
  inv.mu = mu;

  inv.rs = 0;
  if (g.singular_at_origin()) {
    // weight search for the cancellation invariant (needs nu == mu)
    if (nu == mu) {
      std::vector<int> avars;
      for (int i = 0; i < n; ++i)
        if (flags[static_cast<size_t>(i)]) avars.push_back(i);
      if (!avars.empty()) {
        std::vector<TruncSeries> init;
        for (int i : avars) {
          TruncSeries in(vars, kInfOrder);
          for (const auto& [e, c] : ac.a[static_cast<size_t>(i)].terms())
            if (e.total() == nu) in.add_term(e, c);
          init.push_back(std::move(in));
        }
        std::vector<int> w(avars.size(), 1);
        auto combo_zero = [&]() {
          TruncSeries s(vars, kInfOrder);
          for (size_t k = 0; k < init.size(); ++k)
            s += init[k].scaled(Scalar(w[k]));
          return s.is_zero();
        };
        std::function<bool(size_t)> rec = [&](size_t idx) {
          if (idx == w.size()) return combo_zero();
          for (w[idx] = 1; w[idx] <= 20; ++w[idx])
            if (rec(idx + 1)) return true;
          return false;
        };
        if (rec(0)) {
          inv.rs = 2;
        } else {
          std::map<Expo, size_t> rows;
          for (const auto& s : init)
            for (const auto& [e, c] : s.terms()) rows.emplace(e, rows.size());
          if (!rows.empty()) {
            std::vector<std::vector<Scalar>> m(
                rows.size(), std::vector<Scalar>(init.size(), Scalar(0)));
            for (size_t k = 0; k < init.size(); ++k)
              for (const auto& [e, c] : init[k].terms()) m[rows[e]][k] = c;
            std::vector<std::vector<Scalar>> basis;
            kernel_basis(std::move(m), &basis);
            if (!basis.empty()) inv.note = "no weight <= 20";
          }
        }
      }
    }
    if (inv.rs == 0 && point_blowup_dicritical(g)) inv.rs = 1;
  }

  // dimensional type bounds via the jet-level solution of omega(X) = 0
  {
    std::vector<Expo> monos;
    std::function<void(Expo, int, int)> rec = [&](Expo e, int var, int left) {
      if (var == n) {
        monos.push_back(e);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        Expo e2 = e;
        e2[var] = static_cast<int16_t>(k);
        rec(e2, var + 1, left - k);
      }
    };
    rec(Expo{}, 0, jet_order);
    std::map<Expo, size_t> eq_index;
    for (const auto& e : monos) eq_index.emplace(e, eq_index.size());
    size_t cols = monos.size() * static_cast<size_t>(n);
    std::vector<std::vector<Scalar>> m(eq_index.size(),
                                       std::vector<Scalar>(cols, Scalar(0)));
    for (int i = 0; i < n; ++i) {
      const TruncSeries& c = g.form.coeff_d(i);
      for (size_t km = 0; km < monos.size(); ++km) {
        size_t col = static_cast<size_t>(i) * monos.size() + km;
        for (const auto& [e, cc] : c.terms()) {
          Expo sum;
          for (int t = 0; t < kMaxVars; ++t)
            sum[t] = static_cast<int16_t>(e[t] + monos[km][t]);
          if (sum.total() > jet_order) continue;
          m[eq_index[sum]][col] += cc;
        }
      }
    }
    std::vector<std::vector<Scalar>> basis;
    kernel_basis(std::move(m), &basis);
    std::vector<std::vector<Scalar>> proj;
    for (const auto& b : basis) {
      std::vector<Scalar> row;
      for (int i = 0; i < n; ++i)
        row.push_back(b[static_cast<size_t>(i) * monos.size()]);
      proj.push_back(std::move(row));
    }
    int d = proj.empty() ? 0 : kernel_basis(std::move(proj), nullptr);
    int upper = 0;
    for (int i = 0; i < n; ++i) {
      bool active = !g.form.coeff_d(i).is_zero();
      for (int j = 0; j < n && !active; ++j)
        if (g.form.coeff_d(j).max_exponent(i) > 0) active = true;
      if (active) ++upper;
    }
    int lower = std::max(1, n - d);
    inv.dimensional_type_bounds = {std::min(lower, upper), upper};
  }

  // pre-simple test
  bool e_ok = true;
  for (const auto& d : g.divisor)
    if (!d.invariant) e_ok = false;
  if (e_ok) {
    if (nu == 0) {
      inv.pre_simple = true;
    } else if (nu == 1 && mu == 1 && inv.rs == 0) {
      std::vector<std::vector<Scalar>> lin;
      for (int i = 0; i < n; ++i) {
        if (!flags[static_cast<size_t>(i)]) continue;
        std::vector<Scalar> row;
        bool nonzero = false;
        for (int j = 0; j < n; ++j) {
          row.push_back(linear_coeff(ac.a[static_cast<size_t>(i)], j));
          if (!scalar_zero(row.back())) nonzero = true;
        }
        if (nonzero) lin.push_back(std::move(row));
      }
      if (!lin.empty()) {
        auto lin_copy = lin;
        int rank = kernel_basis(std::move(lin_copy), nullptr);
        if (rank == 1) {
          bool nc = true;
          for (int i = 0; i < n; ++i) {
            if (!flags[static_cast<size_t>(i)]) continue;
            bool prop = !scalar_zero(lin[0][static_cast<size_t>(i)]);
            for (int j = 0; j < n; ++j)
              if (j != i && !scalar_zero(lin[0][static_cast<size_t>(j)])) prop = false;
            if (prop) nc = false;
          }
          inv.pre_simple = nc;
        }
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// family collapse

std::optional<FamilyShadow> collapse_family_germ(const FoliationGerm& g) {
  if (g.vars().size() != 3) return std::nullopt;
  const VarSet& vars = g.vars();
  for (int fib = 0; fib < 3; ++fib) {
    std::vector<int> base;
    for (int i = 0; i < 3; ++i)
      if (i != fib) base.push_back(i);
    int a = base[0], b = base[1];
    const TruncSeries& ca = g.form.coeff_d(a);
    const TruncSeries& cb = g.form.coeff_d(b);
    const TruncSeries& cf = g.form.coeff_d(fib);
    if (ca.is_zero() || cb.is_zero()) continue;
    Expo eb = unit_expo(b), ea = unit_expo(a), eab;
    eab[a] = 1;
    eab[b] = 1;
    if (!ca.divisible_by(eb) || !cb.divisible_by(ea)) continue;
    if (!cf.is_zero() && !cf.divisible_by(eab)) continue;
    TruncSeries pa = ca * TruncSeries::variable(vars, a);
    TruncSeries pb = cb * TruncSeries::variable(vars, b);
    const auto& lead_a = *pa.terms().begin();
    auto itb = pb.terms().find(lead_a.first);
    if (itb == pb.terms().end()) continue;
    Scalar r = lead_a.second / itb->second;  // p/q
    auto rq = scalar_rational(r);
    if (!rq || *rq <= 0) continue;
    long p = boost::multiprecision::numerator(*rq).convert_to<long>();
    long q = boost::multiprecision::denominator(*rq).convert_to<long>();
    if (pa.scaled(Scalar(Rational(q))) != pb.scaled(Scalar(Rational(p)))) continue;

    std::string tname = "t";
    for (const std::string& cand : {"t", "s", "m", "b"})
      if (cand != vars.name(fib)) { tname = cand; break; }
    VarSet sub{tname, vars.name(fib)};
    auto collapse = [&](const TruncSeries& s) -> std::optional<TruncSeries> {
      TruncSeries out(sub, s.order());
      for (const auto& [e, c] : s.terms()) {
        long xa = e[a], xb = e[b];
        if (xa % p != 0 || xb % q != 0) return std::nullopt;
        if (xa / p != xb / q) return std::nullopt;
        Expo ne;
        ne[0] = static_cast<int16_t>(xa / p);
        ne[1] = e[fib];
        out.add_term(ne, c);
      }
      return out;
    };
    auto G = collapse(ca.divided_by_monomial(eb).scaled(Scalar(1) / Scalar(Rational(p))));
    auto H = cf.is_zero() ? std::optional<TruncSeries>(TruncSeries::zero(sub))
                          : collapse(cf.divided_by_monomial(eab));
    if (!G || !H) continue;
    FamilyShadow fs;
    DiffForm shadow(sub, 1, g.form.order());
    shadow.coeff(0) = *G;
    shadow.coeff(1) = (*H) * TruncSeries::variable(sub, 0);
    std::vector<int> div;
    if (g.on_divisor(a) || g.on_divisor(b)) div.push_back(0);
    fs.shadow = make_germ(shadow, div);
    fs.p = static_cast<int>(p);
    fs.q = static_cast<int>(q);
    fs.fiber_var = fib;
    return fs;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// classification

static SingularityClass classify_2d(const FoliationGerm& g, int order) {
  SingularityClass cls;
  cls.evidence_order = order;
  if (!g.singular_at_origin()) {
    cls.label = SingLabel::regular;
    return cls;
  }
  LinearPart2D lp = linear_part_2d(g);
  if (lp.nilpotent) {
    cls.label = SingLabel::unclassified;
    cls.note = "nilpotent linear part: continue reduction";
    return cls;
  }
  Scalar l1 = lp.eigenvalues.first, l2 = lp.eigenvalues.second;
  cls.parameters = {l1, l2};

  std::optional<int> div_var;
  for (const auto& d : g.divisor)
    if (d.invariant) { div_var = d.var; break; }
  if (div_var) {
    int d = *div_var;
    int f = 1 - d;
    Scalar mu_div = lp.m[f][f];
    Scalar mu_tr = lp.m[d][d];
    if (!scalar_zero(mu_tr)) cls.ratio = mu_div / mu_tr;
    if (!scalar_zero(mu_div)) cls.cs_residue = mu_tr / mu_div;
  }

  bool z1 = scalar_zero(l1), z2 = scalar_zero(l2);
  if (z1 && z2) {
    cls.label = SingLabel::unclassified;
    return cls;
  }
  if (z1 != z2) {
    auto k = saddle_node_center_order(g, order);
    if (k) {
      cls.label = SingLabel::saddle_node;
      cls.obstruction_order = *k;
    } else {
      cls.label = SingLabel::unclassified;
      cls.note = "one zero eigenvalue, center dynamics vanish to order " +
                 std::to_string(order);
    }
    return cls;
  }

  bool diag = scalar_zero(lp.m[0][1]) && scalar_zero(lp.m[1][0]);
  if (scalar_zero(l1 - l2)) {
    if (diag) {
      cls.label = SingLabel::dicritical_radial;
      return cls;
    }
    cls.label = SingLabel::dulac_c;
    cls.obstruction_order = 1;
    cls.note = "equal eigenvalues with nilpotent part (improper node)";
    return cls;
  }

  Scalar r0 = cls.ratio ? *cls.ratio : l2 / l1;
  auto rq = scalar_rational(r0);
  if (!rq) {
    cls.label = SingLabel::simple_a;
    cls.note = "irrational or non-real eigenvalue ratio";
    return cls;
  }
  if (*rq < 0) {
    cls.label = SingLabel::simple_b_resonant;
    cls.note = "negative rational eigenvalue ratio " + rational_str(*rq);
    return cls;
  }

  Integer num = boost::multiprecision::numerator(*rq);
  Integer den = boost::multiprecision::denominator(*rq);
  bool res_possible = (num == 1 || den == 1);
  NormalForm2D nf = poincare_dulac_normal_form(g, order);
  double nf_scale = 1.0;
  for (int c = 0; c < 2; ++c)
    nf_scale = std::max(nf_scale, dual_field_2d(g.form).component(c).max_coeff_abs());
  std::optional<int> obst;
  for (const auto& [comp, e, c] : nf.resonant) {
    bool significant = c.is_exact() ? !c.is_zero() : c.abs() > 1e-8 * nf_scale;
    if (significant && (!obst || e.total() < *obst)) obst = e.total();
  }
  cls.normal_form = std::move(nf);
  if (obst) {
    cls.label = SingLabel::dulac_c;
    cls.obstruction_order = obst;
    cls.note = "resonant normal-form obstruction";
  } else {
    cls.label = SingLabel::resonant_linearizable_candidate;
    cls.note = res_possible
                   ? "resonant ratio, linearizable to order " + std::to_string(order)
                   : "non-resonant positive ratio: linearizable";
  }
  return cls;
}

static std::optional<TruncSeries> collapse_to_monomial_series(const TruncSeries& s,
                                                              const Expo& u,
                                                              const VarSet& out_vars) {
  TruncSeries out(out_vars, s.order());
  for (const auto& [e, c] : s.terms()) {
    long k = -1;
    for (int i = 0; i < kMaxVars; ++i) {
      if (u[i] == 0) {
        if (e[i] != 0) return std::nullopt;
        continue;
      }
      if (e[i] % u[i] != 0) return std::nullopt;
      long kk = e[i] / u[i];
      if (k >= 0 && kk != k) return std::nullopt;
      k = kk;
    }
    if (k < 0) k = 0;
    out.add_term(unit_expo(0, static_cast<int>(k)), c);
  }
  return out;
}

SingularityClass classify_log_model(const DiffForm& logform, int order) {
  SingularityClass cls;
  cls.evidence_order = order;
  const VarSet& vars = logform.vars();
  int n = vars.size();

  std::vector<TruncSeries> at;
  for (int i = 0; i < n; ++i) {
    TruncSeries a = logform.coeff(i);
    if (logform.logarithmic() && !logform.pole_flags()[static_cast<size_t>(i)] &&
        !a.is_zero())
      a = a * TruncSeries::variable(vars, i);
    at.push_back(std::move(a));
  }
  std::vector<Scalar> res;
  bool all_units = true;
  for (const auto& a : at) {
    Scalar c = a.constant_term();
    res.push_back(c);
    if (scalar_zero(c)) all_units = false;
  }
  if (all_units) {
    cls.label = SingLabel::simple_a;
    cls.parameters = res;
    for (int i = 0; i < n; ++i)
      cls.named.emplace_back("lambda_" + std::to_string(i + 1),
                             res[static_cast<size_t>(i)]);
    return cls;
  }

  // model B
  {
    std::vector<int> heads, tails;
    for (int i = 0; i < n; ++i)
      (scalar_zero(res[static_cast<size_t>(i)]) ? tails : heads).push_back(i);
    bool b_ok = !heads.empty() && !tails.empty();
    Expo u;
    for (int i : heads) {
      auto p = scalar_rational(res[static_cast<size_t>(i)]);
      if (!p || *p <= 0 || boost::multiprecision::denominator(*p) != 1)
        b_ok = false;
      else
        u[i] = static_cast<int16_t>(p->convert_to<long>());
    }
    if (b_ok) {
      TruncSeries psi_raw;
      int tail0 = -1;
      for (int i : tails)
        if (!at[static_cast<size_t>(i)].is_zero()) {
          psi_raw = at[static_cast<size_t>(i)];
          tail0 = i;
          break;
        }
      if (tail0 >= 0) {
        VarSet uv{"u"};
        auto psi1 = collapse_to_monomial_series(psi_raw, u, uv);
        if (psi1) {
          Scalar lead = psi_raw.terms().begin()->second;
          TruncSeries psi_hat = psi_raw.scaled(Scalar(1) / lead);
          std::vector<Scalar> alpha(static_cast<size_t>(n), Scalar(0));
          alpha[static_cast<size_t>(tail0)] = lead;
          bool match = true;
          for (int i : tails) {
            if (i == tail0) continue;
            const TruncSeries& ai = at[static_cast<size_t>(i)];
            if (ai.is_zero()) continue;
            Scalar ratio = ai.terms().begin()->second /
                           psi_hat.terms().begin()->second;
            if (ai != psi_hat.scaled(ratio)) match = false;
            else alpha[static_cast<size_t>(i)] = ratio;
          }
          for (int i : heads) {
            TruncSeries rem = at[static_cast<size_t>(i)] -
                              TruncSeries::constant(vars, res[static_cast<size_t>(i)]);
            if (rem.is_zero()) continue;
            Scalar ratio = rem.terms().begin()->second /
                           psi_hat.terms().begin()->second;
            if (rem != psi_hat.scaled(ratio)) match = false;
            else alpha[static_cast<size_t>(i)] = ratio;
          }
          if (match) {
            int k = static_cast<int>(heads.size());
            for (int i : heads)
              cls.named.emplace_back("p_" + std::to_string(i + 1),
                                     res[static_cast<size_t>(i)]);
            for (int i = 0; i < n; ++i)
              cls.named.emplace_back("alpha_" + std::to_string(i + 1),
                                     alpha[static_cast<size_t>(i)]);
            cls.parameters = res;
            if (k == 2) {
              cls.label = SingLabel::saddle_node;
              cls.note = "model B with k = 2";
            } else if (k == 1 && tails.size() == 2) {
              Scalar a2 = alpha[static_cast<size_t>(tails[0])];
              Scalar a3 = alpha[static_cast<size_t>(tails[1])];
              std::optional<Rational> ratio;
              if (!scalar_zero(a3)) ratio = scalar_rational(a2 / a3);
              if (ratio && *ratio < 0) {
                cls.label = SingLabel::simple_b_resonant;
                cls.note = "model B, resonant residual spectrum";
              } else {
                cls.label = SingLabel::simple_a;
                cls.note = "model B, non-resonant residual spectrum: simple";
              }
            } else {
              cls.label = SingLabel::simple_a;
              cls.note = "model B with k = 3: simple";
            }
            return cls;
          }
        }
      }
    }
  }

  // model C
  for (int j = 0; j < n; ++j) {
    Scalar cj = linear_coeff(at[static_cast<size_t>(j)], j);
    if (scalar_zero(cj)) continue;
    Expo u;
    bool ok = true;
    std::vector<Scalar> ps(static_cast<size_t>(n), Scalar(0));
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      Scalar pi = -(linear_coeff(at[static_cast<size_t>(i)], j) / cj);
      auto pq = scalar_rational(pi);
      if (!pq || *pq < 0 || boost::multiprecision::denominator(*pq) != 1) {
        ok = false;
      } else {
        ps[static_cast<size_t>(i)] = pi;
        u[i] = static_cast<int16_t>(pq->convert_to<long>());
      }
    }
    if (!ok || u.total() == 0) continue;
    std::vector<Scalar> alpha(static_cast<size_t>(n), Scalar(0));
    for (int i = 0; i < n; ++i) {
      auto it = at[static_cast<size_t>(i)].terms().find(u);
      if (it != at[static_cast<size_t>(i)].terms().end())
        alpha[static_cast<size_t>(i)] = it->second / cj;
    }
    cls.label = SingLabel::dulac_c;
    cls.parameters = res;
    for (int i = 0; i < n; ++i) {
      if (i != j)
        cls.named.emplace_back("p_" + std::to_string(i + 1),
                               ps[static_cast<size_t>(i)]);
      cls.named.emplace_back("alpha_" + std::to_string(i + 1),
                             alpha[static_cast<size_t>(i)]);
    }
    cls.note = "model C (Dulac)";
    return cls;
  }
  cls.note = "no formal model matched";
  return cls;
}

SingularityClass classify_simple_type(const FoliationGerm& g, int order) {
  if (g.vars().size() == 2) return classify_2d(g, order);
  if (g.form.logarithmic()) return classify_log_model(g.form, order);

  if (auto fs = collapse_family_germ(g)) {
    SingularityClass cls = classify_2d(fs->shadow, order);
    cls.note = (cls.note.empty() ? "" : cls.note + "; ") +
               std::string("via 2D shadow of the pulled-back family germ");
    return cls;
  }

  std::vector<bool> all(static_cast<size_t>(g.vars().size()), true);
  AdaptedCoefficients ac = adapted_coefficients(g.form, all);
  DiffForm norm = DiffForm::logarithmic_1form(g.vars(), ac.a, all);
  return classify_log_model(norm, order);
}

Verdict first_integral_local_verdict(const SingularityClass& cls) {
  switch (cls.label) {
    case SingLabel::regular:
      return Verdict::make(Outcome::holds, "local-first-integral",
                           "regular point: level sets of a submersion");
    case SingLabel::simple_a: {
      const auto& l = cls.parameters;
      if (l.size() < 2)
        return Verdict::make(Outcome::inconclusive, "local-first-integral",
                             "missing eigenvalue data");
      std::vector<Rational> ratios;
      for (size_t i = 0; i < l.size(); ++i) {
        auto r = scalar_rational(l[i] / l[0]);
        if (!r)
          return Verdict::make(Outcome::fails, "local-first-integral",
                               "irrational eigenvalue ratio: holonomy not periodic");
        ratios.push_back(*r);
      }
      Integer lcm = 1;
      for (const auto& r : ratios) {
        Integer d = boost::multiprecision::denominator(r);
        lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
      }
      std::string monomial;
      for (size_t i = 0; i < ratios.size(); ++i) {
        Rational p = ratios[i] * Rational(lcm);
        if (i) monomial += "*";
        monomial += "x" + std::to_string(i + 1) + "^" + rational_str(p);
      }
      Verdict v = Verdict::make(Outcome::holds, "local-first-integral",
                                "rational eigenvalue ratios: monomial first integral");
      v.with("witness", monomial);
      return v;
    }
    case SingLabel::simple_b_resonant:
      return Verdict::make(Outcome::fails, "local-first-integral",
                           "resonant model B: reduction produces a saddle-node");
    case SingLabel::saddle_node:
      return Verdict::make(Outcome::fails, "local-first-integral",
                           "saddle-node: leaves are not closed");
    case SingLabel::dulac_c: {
      if (cls.named.empty() && cls.obstruction_order) {
        Verdict v = Verdict::make(Outcome::fails, "local-first-integral",
                                  "Dulac type: resonant obstruction at order " +
                                      std::to_string(*cls.obstruction_order));
        v.order = cls.evidence_order;
        return v;
      }
      Scalar a2(0), a3(0);
      for (const auto& [k, v] : cls.named) {
        if (k == "alpha_2") a2 = v;
        if (k == "alpha_3") a3 = v;
      }
      if (!scalar_zero(a2) || !scalar_zero(a3))
        return Verdict::make(Outcome::fails, "local-first-integral",
                             "Dulac model with (alpha_2, alpha_3) != (0, 0)");
      Verdict v = Verdict::make(Outcome::inconclusive, "local-first-integral",
                                "Dulac model with vanishing alpha_2, alpha_3");
      v.order = cls.evidence_order;
      return v;
    }
    case SingLabel::resonant_linearizable_candidate: {
      Verdict v = Verdict::make(Outcome::holds, "local-first-integral",
                                "linearizable to the working order: monomial level sets");
      v.order = cls.evidence_order;
      return v;
    }
    case SingLabel::dicritical_radial:
      return Verdict::make(Outcome::holds, "local-first-integral",
                           "radial point: ratio of linear forms");
    default:
      return Verdict::make(Outcome::inconclusive, "local-first-integral",
                           "unclassified germ: continue reduction");
  }
}

}  // namespace dicrit
