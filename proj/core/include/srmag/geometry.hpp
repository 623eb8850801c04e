#pragma once

#include <array>

#include "srmag/expr.hpp"

namespace srmag {

/// Vector field on the chart, components in the coordinate basis dx,dy,dz.
struct VectorField {
  std::array<Expr, 3> c;

  /// Directional derivative V(f) = sum_i V^i d_i f.
  Expr apply(const Expr& f) const;

  Vec3 eval(const Vec3& p) const;
  RVec3 eval_exact(const RVec3& p) const;
};

/// One-form on the chart, components in dx, dy, dz.
struct OneForm {
  std::array<Expr, 3> c;

  Expr pair(const VectorField& v) const;  // <omega, V>
};

/// Coordinate two-form, components (C_xy, C_xz, C_yz).
struct TwoForm {
  std::array<Expr, 3> c;

  Expr contract(const VectorField& v, const VectorField& w) const;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& v);

/// [V, W]^i = sum_j (V^j d_j W^i - W^j d_j V^i).
VectorField lie_bracket(const VectorField& v, const VectorField& w);

TwoForm exterior_derivative(const OneForm& a);

/// Coefficient of d(two-form) with respect to dx^dy^dz, i.e. the exterior
/// derivative of C_xy dx^dy + C_xz dx^dz + C_yz dy^dz.
Expr exterior_derivative_coefficient(const TwoForm& b);

/// Euclidean-cross-product annihilator of the pair (a one-form vanishing on
/// both fields); its pairing with [V,W] equals det[V|W|[V,W]].
OneForm cross_annihilator(const VectorField& v, const VectorField& w);

struct Mat3 {
  std::array<std::array<Expr, 3>, 3> m;  // m[row][col]
};

Expr det3(const Mat3& a);
Mat3 adjugate3(const Mat3& a);
Mat3 frame_matrix(const VectorField& c0, const VectorField& c1,
                  const VectorField& c2);

/// Coefficients (a0,a1,a2) with v = a0*cols[0] + a1*cols[1] + a2*cols[2],
/// computed as adj(M) v / det(M).
std::array<Expr, 3> solve_in_frame(const Mat3& frame, const Expr& det,
                                   const std::array<Expr, 3>& v);

/// Lifted-space (4-D) vector field; components in dx,dy,dz,dw are still
/// functions on the base chart (nothing depends on w).
struct VectorField4 {
  std::array<Expr, 4> c;
};

VectorField4 operator+(const VectorField4& a, const VectorField4& b);
VectorField4 operator-(const VectorField4& a, const VectorField4& b);
VectorField4 operator*(const Expr& f, const VectorField4& v);
VectorField4 lie_bracket(const VectorField4& v, const VectorField4& w);

}  // namespace srmag
