#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srmag/flow_types.hpp"
#include "srmag/geometry.hpp"

namespace srmag {

/// Derived geometric package of a declared-orthonormal contact frame:
/// contact form, Reeb field, structure functions, Tanno Christoffels,
/// torsion and J operators, and the dual coframe.
///
/// Conventions (positively oriented frame):
///   [X1,X2] = c12_1 X1 + c12_2 X2 + X0      (the X0 coefficient is
///   [X1,X0] = c10_1 X1 + c10_2 X2            certified == 1 at derivation)
///   [X2,X0] = c20_1 X1 + c20_2 X2
///   Gamma_ij^k = (c_ij^k + c_ki^j + c_kj^i)/2          i,j,k in {1,2}
///   tau(X_j)  = sum_k tau[k][j] X_k,  tau_kj = (c_k0^j + c_j0^k)/2
///   J(X_j)    = sum_k jmat[k][j] X_k  (J X1 = X2, J X2 = -X1 after
///                                      certification of c12_0 == 1)
struct ContactData {
  VectorField x1, x2, reeb;
  OneForm omega, nu1, nu2;

  Expr c12_1, c12_2, c10_1, c10_2, c20_1, c20_2;
  Expr c12_0;  // certified identically 1
  Expr gamma[2][2][2];  // gamma[i][j][k] = Gamma_ij^k
  Expr tau[2][2];       // tau[k][j]: coefficient of X_k in tau(X_j)
  Expr jmat[2][2];      // jmat[k][j]: coefficient of X_k in J(X_j)

  Expr frame_det;  // det[X1|X2|X0]; its zero set bounds the admissible chart
  bool polynomial = false;

  /// Structure function c_ij^k for i,j in {1,2,0} (0 denoting the Reeb
  /// index) and k in {1,2,0}; antisymmetric in (i,j).
  Expr c(int i, int j, int k) const;
};

struct SampleGrid {
  int lattice_n = 5;          // lattice_n^3 points over [-1,1]^3
  int random_points = 50;
  double half_width = 1.0;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;

  std::vector<Vec3> points() const;
};

struct FrameValidationReport {
  bool pass = false;
  double worst_residual = 0;
  Vec3 witness{0, 0, 0};
  std::string detail;
};

/// Grid validation of a declared-orthonormal frame:
///  (a) pointwise independence of X1, X2, [X1,X2];
///  (b) -d(omega_ref)(X1,X2) = 1 for the chart-normalized annihilator
///      omega_ref = (X1 x X2)/(X1 x X2)_z, which is invariant under frame
///      order and scale. This is the normalization making the declared
///      frame orthonormal and positively oriented; conformal frames (the
///      check value a non-constant function) are rejected, not renormalized.
FrameValidationReport validate_frame(const VectorField& x1,
                                     const VectorField& x2,
                                     const SampleGrid& grid = {},
                                     double tol = Tolerances{}.frame);

/// Full derivation; throws CertificationError when the frame is degenerate
/// on the validation sample or an internal identity fails.
ContactData derive_contact_data(const VectorField& x1, const VectorField& x2,
                                const SampleGrid& grid = {},
                                double tol = Tolerances{}.frame);

/// Divergence with respect to the Popp volume. V is given in coordinate
/// components; frame coefficients are recovered internally.
Expr popp_divergence(const VectorField& v, const ContactData& data);

/// Tanno covariant acceleration of a horizontal curve, frame components
/// (a1, a2) with a_k = du_k/dt + sum_ij u_i u_j Gamma_ij^k. Time derivative
/// by order-2 centered differences (one-sided at the ends).
std::vector<std::array<double, 2>> covariant_acceleration(
    const Trajectory& traj, const ContactData& data);

/// Max residual of the Jacobi identity expressed through the derived
/// structure functions, over the sample grid.
double jacobi_residual(const ContactData& data, const SampleGrid& grid = {});

/// Heisenberg frame X1 = dx - y/2 dz, X2 = dy + x/2 dz.
VectorField heisenberg_x1();
VectorField heisenberg_x2();

}  // namespace srmag
