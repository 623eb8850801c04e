#pragma once

#include "srmag/contact.hpp"

namespace srmag {

/// Horizontal one-form A = a1 nu1 + a2 nu2.
struct HOneForm {
  Expr a1, a2;
};

/// Horizontal two-form B = b1 nu1^omega + b2 nu2^omega. A magnetic field is
/// such a form certified closed (see is_closed).
struct HTwoForm {
  Expr b1, b2;
};

/// Horizontal three-form C * nu1^nu2^omega.
struct HThreeForm {
  Expr c;
};

/// d_H^0 f = (X1 f) nu1 + (X2 f) nu2.
HOneForm dh0(const Expr& f, const ContactData& data);

/// zeta = dA(X1,X2) = X1(A2) - X2(A1) - c12^1 A1 - c12^2 A2.
Expr potential_zeta(const HOneForm& a, const ContactData& data);

/// Second-order horizontal differential of a one-form, computed through the
/// frame-side expansion
///   beta_i = X_i(dA(X1,X2)) - X0(A_i) - c_i0^1 A1 - c_i0^2 A2.
HTwoForm dh1(const HOneForm& a, const ContactData& data);

/// Independent route for the same operator: d(A + dA(X1,X2) omega) as a full
/// coordinate exterior derivative, frame coefficients extracted by
/// contraction. Must agree with dh1 (path-agreement invariant).
HTwoForm dh1_exterior(const HOneForm& a, const ContactData& data);

/// d_H^2 B = (X1 b2 - X2 b1 - c12^1 b1 - c12^2 b2) nu1^nu2^omega.
HThreeForm dh2(const HTwoForm& b, const ContactData& data);

struct ClosednessReport {
  bool closed = false;
  bool exact = false;            // decided in exact rational arithmetic
  double worst_residual = 0;     // max |d(beta) coefficient| over samples
  double worst_divergence = 0;   // max |div_mu(-b2 X1 + b1 X2)| over samples
  double worst_mismatch = 0;     // max |dbeta + div| (the lemma's equivalence)
};

/// Certifies d(beta) = 0 via BOTH the dh2 coefficient and the Maxwell
/// divergence div_mu(-b2 X1 + b1 X2); the two must agree up to sign at every
/// sample. Exact on polynomial data, else residuals <= tol on the grid.
ClosednessReport is_closed(const HTwoForm& b, const ContactData& data,
                           const SampleGrid& grid = {},
                           double tol = Tolerances{}.closedness);

}  // namespace srmag
