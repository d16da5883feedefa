#pragma once

#include <functional>
#include <random>

#include "dicrit/parser.hpp"

namespace dicrit::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed5eedULL);
  return gen;
}

inline Rational random_rational(int max_num = 9, int max_den = 9) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(num(rng()), den(rng()));
}

inline Scalar random_exact_scalar() { return Scalar(random_rational()); }

inline TruncSeries random_poly(const VarSet& vars, int deg, double density = 0.5,
                               bool nonzero_needed = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TruncSeries s(vars, kInfOrder);
  for (;;) {
    std::vector<Expo> expos;
    std::function<void(Expo, int, int)> rec = [&](Expo e, int var, int left) {
      if (var == vars.size()) {
        expos.push_back(e);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        Expo e2 = e;
        e2[var] = static_cast<int16_t>(k);
        rec(e2, var + 1, left - k);
      }
    };
    rec(Expo{}, 0, deg);
    for (const auto& e : expos)
      if (u(rng()) < density) s.add_term(e, random_exact_scalar());
    if (!nonzero_needed || !s.is_zero()) return s;
  }
}

inline DiffForm random_1form(const VarSet& vars, int deg, double density = 0.5) {
  DiffForm f(vars, 1, kInfOrder);
  for (;;) {
    for (int i = 0; i < vars.size(); ++i)
      f.coeff(i) = random_poly(vars, deg, density, false);
    if (!f.is_zero()) return f;
  }
}

inline double form_dist(const DiffForm& a, const DiffForm& b) {
  double m = 0.0;
  DiffForm d = a - b;
  for (int k = 0; k < d.basis_size(); ++k) m = std::max(m, d.coeff(k).max_coeff_abs());
  return m;
}

}  // namespace dicrit::testing
