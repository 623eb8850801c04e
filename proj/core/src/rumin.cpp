#include "srmag/rumin.hpp"

#include <cmath>

namespace srmag {

HOneForm dh0(const Expr& f, const ContactData& data) {
  return {data.x1.apply(f), data.x2.apply(f)};
}

Expr potential_zeta(const HOneForm& a, const ContactData& data) {
  return data.x1.apply(a.a2) - data.x2.apply(a.a1) - data.c12_1 * a.a1 -
         data.c12_2 * a.a2;
}

HTwoForm dh1(const HOneForm& a, const ContactData& data) {
  Expr zeta = potential_zeta(a, data);
  Expr b1 = data.x1.apply(zeta) - data.reeb.apply(a.a1) - data.c10_1 * a.a1 -
            data.c10_2 * a.a2;
  Expr b2 = data.x2.apply(zeta) - data.reeb.apply(a.a2) - data.c20_1 * a.a1 -
            data.c20_2 * a.a2;
  return {b1, b2};
}

HTwoForm dh1_exterior(const HOneForm& a, const ContactData& data) {
  // Coordinate route: A = a1 nu1 + a2 nu2 as a coordinate one-form.
  OneForm acoord;
  for (int j = 0; j < 3; ++j)
    acoord.c[j] = a.a1 * data.nu1.c[j] + a.a2 * data.nu2.c[j];

  TwoForm da = exterior_derivative(acoord);
  Expr zeta = da.contract(data.x1, data.x2);

  OneForm aprime;
  for (int j = 0; j < 3; ++j) aprime.c[j] = acoord.c[j] + zeta * data.omega.c[j];

  TwoForm daprime = exterior_derivative(aprime);
  return {daprime.contract(data.x1, data.reeb),
          daprime.contract(data.x2, data.reeb)};
}

HThreeForm dh2(const HTwoForm& b, const ContactData& data) {
  return {data.x1.apply(b.b2) - data.x2.apply(b.b1) - data.c12_1 * b.b1 -
          data.c12_2 * b.b2};
}

ClosednessReport is_closed(const HTwoForm& b, const ContactData& data,
                           const SampleGrid& grid, double tol) {
  ClosednessReport rep;
  Expr dbeta = dh2(b, data).c;
  VectorField maxwell = (-b.b2) * data.x1 + b.b1 * data.x2;
  Expr div = popp_divergence(maxwell, data);

  for (const Vec3& p : grid.points()) {
    double r1 = evaluate(dbeta, p);
    double r2 = evaluate(div, p);
    rep.worst_residual = std::max(rep.worst_residual, std::abs(r1));
    rep.worst_divergence = std::max(rep.worst_divergence, std::abs(r2));
    rep.worst_mismatch = std::max(rep.worst_mismatch, std::abs(r1 + r2));
  }

  bool data_exact = data.polynomial && dbeta.is_polynomial() && div.is_polynomial();
  if (data_exact) {
    rep.exact = true;
    rep.closed = probably_zero(dbeta) && probably_zero(div);
    if (!probably_zero(dbeta + div))
      throw CertificationError(
          "Maxwell equivalence violated: d(beta) and divergence do not agree up to sign");
  } else {
    rep.closed = rep.worst_residual <= tol && rep.worst_divergence <= tol;
    if (rep.worst_mismatch > tol)
      throw CertificationError(
          "Maxwell equivalence violated: d(beta) and divergence do not agree up to sign");
  }
  return rep;
}

}  // namespace srmag
