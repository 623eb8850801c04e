#include "srmag/geometry.hpp"

namespace srmag {

Expr VectorField::apply(const Expr& f) const {
  return c[0] * differentiate(f, 0) + c[1] * differentiate(f, 1) +
         c[2] * differentiate(f, 2);
}

Vec3 VectorField::eval(const Vec3& p) const {
  return {evaluate(c[0], p), evaluate(c[1], p), evaluate(c[2], p)};
}

RVec3 VectorField::eval_exact(const RVec3& p) const {
  return {evaluate_exact(c[0], p), evaluate_exact(c[1], p),
          evaluate_exact(c[2], p)};
}

Expr OneForm::pair(const VectorField& v) const {
  return c[0] * v.c[0] + c[1] * v.c[1] + c[2] * v.c[2];
}

Expr TwoForm::contract(const VectorField& v, const VectorField& w) const {
  Expr xy = v.c[0] * w.c[1] - v.c[1] * w.c[0];
  Expr xz = v.c[0] * w.c[2] - v.c[2] * w.c[0];
  Expr yz = v.c[1] * w.c[2] - v.c[2] * w.c[1];
  return c[0] * xy + c[1] * xz + c[2] * yz;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]}};
}
VectorField operator-(const VectorField& a, const VectorField& b) {
  return {{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]}};
}
VectorField operator*(const Expr& f, const VectorField& v) {
  return {{f * v.c[0], f * v.c[1], f * v.c[2]}};
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  VectorField r;
  for (int i = 0; i < 3; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < 3; ++j) {
      terms.push_back(v.c[j] * differentiate(w.c[i], j));
      terms.push_back(-(w.c[j] * differentiate(v.c[i], j)));
    }
    r.c[i] = sum(std::move(terms));
  }
  return r;
}

TwoForm exterior_derivative(const OneForm& a) {
  // (dA)_ij = d_i A_j - d_j A_i, ordered (xy, xz, yz).
  return {{differentiate(a.c[1], 0) - differentiate(a.c[0], 1),
           differentiate(a.c[2], 0) - differentiate(a.c[0], 2),
           differentiate(a.c[2], 1) - differentiate(a.c[1], 2)}};
}

Expr exterior_derivative_coefficient(const TwoForm& b) {
  // d(C_xy dx^dy + C_xz dx^dz + C_yz dy^dz)
  //   = (d_z C_xy - d_y C_xz + d_x C_yz) dx^dy^dz
  return differentiate(b.c[0], 2) - differentiate(b.c[1], 1) +
         differentiate(b.c[2], 0);
}

OneForm cross_annihilator(const VectorField& v, const VectorField& w) {
  return {{v.c[1] * w.c[2] - v.c[2] * w.c[1],
           v.c[2] * w.c[0] - v.c[0] * w.c[2],
           v.c[0] * w.c[1] - v.c[1] * w.c[0]}};
}

Expr det3(const Mat3& a) {
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

Mat3 adjugate3(const Mat3& a) {
  auto cof = [&](int r, int c) {
    int r1 = (r + 1) % 3, r2 = (r + 2) % 3;
    int c1 = (c + 1) % 3, c2 = (c + 2) % 3;
    // cyclic index choice keeps the sign pattern implicit
    return a.m[r1][c1] * a.m[r2][c2] - a.m[r1][c2] * a.m[r2][c1];
  };
  Mat3 adj;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) adj.m[r][c] = cof(c, r);  // transpose of cofactors
  return adj;
}

Mat3 frame_matrix(const VectorField& c0, const VectorField& c1,
                  const VectorField& c2) {
  Mat3 f;
  for (int i = 0; i < 3; ++i) {
    f.m[i][0] = c0.c[i];
    f.m[i][1] = c1.c[i];
    f.m[i][2] = c2.c[i];
  }
  return f;
}

std::array<Expr, 3> solve_in_frame(const Mat3& frame, const Expr& det,
                                   const std::array<Expr, 3>& v) {
  Mat3 adj = adjugate3(frame);
  Expr inv_det = divide(Expr::constant(1), det);
  std::array<Expr, 3> out;
  for (int i = 0; i < 3; ++i) {
    Expr s = adj.m[i][0] * v[0] + adj.m[i][1] * v[1] + adj.m[i][2] * v[2];
    out[i] = s * inv_det;
  }
  return out;
}

VectorField4 operator+(const VectorField4& a, const VectorField4& b) {
  return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]}};
}
VectorField4 operator-(const VectorField4& a, const VectorField4& b) {
  return {{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2], a.c[3] - b.c[3]}};
}
VectorField4 operator*(const Expr& f, const VectorField4& v) {
  return {{f * v.c[0], f * v.c[1], f * v.c[2], f * v.c[3]}};
}

VectorField4 lie_bracket(const VectorField4& v, const VectorField4& w) {
  VectorField4 r;
  for (int i = 0; i < 4; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < 3; ++j) {  // d_w of chart functions vanishes
      terms.push_back(v.c[j] * differentiate(w.c[i], j));
      terms.push_back(-(w.c[j] * differentiate(v.c[i], j)));
    }
    r.c[i] = sum(std::move(terms));
  }
  return r;
}

}  // namespace srmag
