#pragma once

#include <random>
#include <string>

#include "srmag/scenario.hpp"

namespace srmag::testing {

inline ContactData& heisenberg_data() {
  static ContactData data = derive_contact_data(heisenberg_x1(), heisenberg_x2());
  return data;
}

inline MagneticScenario make_scenario(const char* a1, const char* a2,
                                      const char* b1, const char* b2,
                                      double q = 1.0) {
  MagneticScenario s;
  s.data = heisenberg_data();
  s.potential = HOneForm{parse_expr(a1), parse_expr(a2)};
  s.field = HTwoForm{parse_expr(b1), parse_expr(b2)};
  s.charge = q;
  certify_scenario(s);
  return s;
}

inline MagneticScenario engel_scenario(double q = 1.0) {
  return make_scenario("0", "x^2/2", "1", "0", q);
}

inline MagneticScenario gauge_pair_scenario(double q = 1.0) {
  return make_scenario("-(z/2 + x*y/12)", "x^2/12", "1", "0", q);
}

inline MagneticScenario rank1_scenario() {
  return make_scenario("0", "2*z*x^2 + 2*x^3*y/3", "4*z", "x^2");
}

inline MagneticScenario rank2_scenario() {
  return make_scenario("-y^3/6", "x^3/6", "x", "y");
}

// Anisotropic rescaling of the Heisenberg frame by 1 + z^2: same contact
// form and Reeb field, but nonzero structure functions, Christoffels and
// torsion (still rational, so exact arithmetic applies).
inline ContactData& warped_data() {
  static ContactData data = [] {
    Expr lam = parse_expr("1 + z^2");
    VectorField x1 = lam * heisenberg_x1();
    VectorField x2 = divide(Expr::constant(1), lam) * heisenberg_x2();
    return derive_contact_data(x1, x2);
  }();
  return data;
}

// Pointwise rotation of the Heisenberg frame by angle z: exercises the
// non-polynomial (float-tolerance) paths.
inline ContactData& rotated_data() {
  static ContactData data = [] {
    Expr c = cos(Expr::variable(2)), s = sin(Expr::variable(2));
    VectorField x1 = c * heisenberg_x1() + s * heisenberg_x2();
    VectorField x2 = (-s) * heisenberg_x1() + c * heisenberg_x2();
    return derive_contact_data(x1, x2);
  }();
  return data;
}

// Random polynomial of total degree <= deg with small rational coefficients.
inline Expr random_polynomial(std::mt19937_64& rng, int deg = 4, int terms = 6) {
  std::uniform_int_distribution<int> exp_pick(0, deg);
  std::uniform_int_distribution<long> coeff(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::vector<Expr> monomials;
  for (int t = 0; t < terms; ++t) {
    int ex = exp_pick(rng), ey = exp_pick(rng), ez = exp_pick(rng);
    while (ex + ey + ez > deg) {
      if (ex > 0) --ex;
      else if (ey > 0) --ey;
      else --ez;
    }
    Expr m = Expr::constant(coeff(rng), den(rng));
    m = m * pow(Expr::variable(0), ex) * pow(Expr::variable(1), ey) *
        pow(Expr::variable(2), ez);
    monomials.push_back(m);
  }
  return sum(std::move(monomials));
}

inline double sup_distance(const Trajectory& a, const Trajectory& b) {
  double worst = 0;
  std::size_t n = std::min(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(a.samples[i].s.p[static_cast<std::size_t>(c)] -
                                       b.samples[i].s.p[static_cast<std::size_t>(c)]));
  return worst;
}

inline std::string scenario_path(const std::string& name) {
#ifdef SRMAG_SCENARIO_DIR
  return std::string(SRMAG_SCENARIO_DIR) + "/" + name + ".scn";
#else
  return "scenarios/" + name + ".scn";
#endif
}

}  // namespace srmag::testing
