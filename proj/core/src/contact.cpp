#include "srmag/contact.hpp"

#include <cmath>
#include <random>

namespace srmag {

namespace {

Expr half() { return Expr::constant(1, 2); }

double vec_norm(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

std::vector<Vec3> SampleGrid::points() const {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(lattice_n) * lattice_n * lattice_n +
              random_points);
  for (int i = 0; i < lattice_n; ++i)
    for (int j = 0; j < lattice_n; ++j)
      for (int k = 0; k < lattice_n; ++k) {
        auto coord = [&](int a) {
          return lattice_n == 1
                     ? 0.0
                     : -half_width + 2.0 * half_width * a / (lattice_n - 1);
        };
        pts.push_back({coord(i), coord(j), coord(k)});
      }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half_width, half_width);
  for (int i = 0; i < random_points; ++i) pts.push_back({u(rng), u(rng), u(rng)});
  return pts;
}

VectorField heisenberg_x1() {
  return {{Expr::constant(1), Expr::constant(0),
           -divide(Expr::variable(1), Expr::constant(2))}};
}

VectorField heisenberg_x2() {
  return {{Expr::constant(0), Expr::constant(1),
           divide(Expr::variable(0), Expr::constant(2))}};
}

Expr ContactData::c(int i, int j, int k) const {
  if (i == j) return Expr::constant(0);
  bool flip = false;
  int a = i, b = j;
  if ((a == 2 && b == 1) || (a == 0 && (b == 1 || b == 2))) {
    std::swap(a, b);
    flip = true;
  }
  Expr out;
  if (a == 1 && b == 2)
    out = k == 1 ? c12_1 : (k == 2 ? c12_2 : c12_0);
  else if (a == 1 && b == 0)
    out = k == 1 ? c10_1 : (k == 2 ? c10_2 : Expr::constant(0));
  else
    out = k == 1 ? c20_1 : (k == 2 ? c20_2 : Expr::constant(0));
  return flip ? -out : out;
}

FrameValidationReport validate_frame(const VectorField& x1,
                                     const VectorField& x2,
                                     const SampleGrid& grid, double tol) {
  FrameValidationReport rep;
  VectorField bracket = lie_bracket(x1, x2);
  Expr det = det3(frame_matrix(x1, x2, bracket));

  OneForm raw = cross_annihilator(x1, x2);
  // -d(omega_ref)(X1,X2) - 1 with omega_ref = raw / raw_z, evaluated
  // pointwise to avoid symbolic division blowup.
  Expr rz = raw.c[2];

  std::vector<Vec3> pts = grid.points();
  double worst = 0;
  Vec3 witness{0, 0, 0};
  bool ok = true;
  std::string detail = "ok";

  // Normalization is applied numerically per point: omega_ref = raw / rz.
  TwoForm draw = exterior_derivative(raw);
  Expr draw_contracted = draw.contract(x1, x2);  // d(raw)(X1,X2)
  // d(raw/rz) = (1/rz) d(raw) - (1/rz^2) d(rz) ^ raw; contract with X1,X2:
  OneForm drz{{differentiate(rz, 0), differentiate(rz, 1), differentiate(rz, 2)}};
  Expr wedge_contracted = drz.pair(x1) * raw.pair(x2) - drz.pair(x2) * raw.pair(x1);

  for (const Vec3& p : pts) {
    double d = evaluate(det, p);
    double scale = 1.0 + vec_norm(x1.eval(p)) * vec_norm(x2.eval(p)) *
                             vec_norm(bracket.eval(p));
    if (std::abs(d) <= 1e-12 * scale) {
      rep.pass = false;
      rep.worst_residual = std::abs(d);
      rep.witness = p;
      rep.detail = "frame degenerate: det[X1|X2|[X1,X2]] vanishes";
      return rep;
    }
    double rzv = evaluate(rz, p);
    double raw_norm = vec_norm({evaluate(raw.c[0], p), evaluate(raw.c[1], p), rzv});
    if (std::abs(rzv) <= 1e-12 * raw_norm) {
      rep.pass = false;
      rep.worst_residual = std::abs(rzv);
      rep.witness = p;
      rep.detail = "chart normalization undefined: annihilator has zero dz component";
      return rep;
    }
    // value = -d(raw/rz)(X1,X2) = -(draw(X1,X2) - wedge/rz)/rz
    double value = -(evaluate(draw_contracted, p) -
                     evaluate(wedge_contracted, p) / rzv) / rzv;
    double r = std::abs(value - 1.0);
    if (r > worst) {
      worst = r;
      witness = p;
    }
    if (r > tol) {
      ok = false;
      detail = "orientation/normalization check -d(omega)(X1,X2) = 1 failed, value " +
               std::to_string(value);
    }
  }
  rep.pass = ok;
  rep.worst_residual = worst;
  rep.witness = witness;
  rep.detail = detail;
  return rep;
}

namespace {

// Probabilistic certification helper; exact-rational on polynomial data,
// float sampling otherwise (probably_zero selects the mode itself).
void certify_zero(const Expr& e, bool, const char* what) {
  if (!probably_zero(e))
    throw CertificationError(std::string("contact derivation self-check failed: ") + what);
}

}  // namespace

ContactData derive_contact_data(const VectorField& x1, const VectorField& x2,
                                const SampleGrid& grid, double tol) {
  FrameValidationReport v = validate_frame(x1, x2, grid, tol);
  if (!v.pass)
    throw CertificationError("frame validation failed: " + v.detail +
                             " (worst residual " + std::to_string(v.worst_residual) + ")");

  ContactData d;
  d.x1 = x1;
  d.x2 = x2;

  VectorField bracket = lie_bracket(x1, x2);
  Mat3 mb = frame_matrix(x1, x2, bracket);
  Expr detb = det3(mb);
  Mat3 adjb = adjugate3(mb);
  Expr inv_detb = divide(Expr::constant(1), detb);
  for (int j = 0; j < 3; ++j) d.omega.c[j] = adjb.m[2][j] * inv_detb;

  // Reeb: X0 = W / <omega, W>, W the curl of omega (iota_W d(omega) == 0).
  TwoForm domega = exterior_derivative(d.omega);
  VectorField w{{domega.c[2], -domega.c[1], domega.c[0]}};
  Expr s = d.omega.pair(w);
  Expr inv_s = divide(Expr::constant(1), s);
  d.reeb = inv_s * w;

  Mat3 mf = frame_matrix(x1, x2, d.reeb);
  d.frame_det = det3(mf);
  Mat3 adjf = adjugate3(mf);
  Expr inv_detf = divide(Expr::constant(1), d.frame_det);
  for (int j = 0; j < 3; ++j) {
    d.nu1.c[j] = adjf.m[0][j] * inv_detf;
    d.nu2.c[j] = adjf.m[1][j] * inv_detf;
  }

  auto expand = [&](const VectorField& f) {
    return solve_in_frame(mf, d.frame_det, f.c);
  };
  auto b12 = expand(bracket);
  d.c12_1 = b12[0];
  d.c12_2 = b12[1];
  d.c12_0 = b12[2];
  auto b10 = expand(lie_bracket(x1, d.reeb));
  d.c10_1 = b10[0];
  d.c10_2 = b10[1];
  auto b20 = expand(lie_bracket(x2, d.reeb));
  d.c20_1 = b20[0];
  d.c20_2 = b20[1];

  d.polynomial = true;
  for (const Expr* e :
       {&x1.c[0], &x1.c[1], &x1.c[2], &x2.c[0], &x2.c[1], &x2.c[2]})
    d.polynomial = d.polynomial && e->is_polynomial();

  // Derivation self-checks; failures signal implementation bugs, not bad
  // input (input problems are caught by validate_frame above).
  certify_zero(d.omega.pair(x1), d.polynomial, "<omega, X1> != 0");
  certify_zero(d.omega.pair(x2), d.polynomial, "<omega, X2> != 0");
  certify_zero(d.omega.pair(d.reeb) - Expr::constant(1), d.polynomial,
               "<omega, X0> != 1");
  certify_zero(d.c12_0 - Expr::constant(1), d.polynomial, "c12^0 != 1");
  certify_zero(b10[2], d.polynomial, "c10^0 != 0");
  certify_zero(b20[2], d.polynomial, "c20^0 != 0");
  {
    // iota_{X0} d(omega) == 0, componentwise.
    Expr ix0[3] = {
        -(domega.c[0] * d.reeb.c[1]) - domega.c[1] * d.reeb.c[2],
        domega.c[0] * d.reeb.c[0] - domega.c[2] * d.reeb.c[2],
        domega.c[1] * d.reeb.c[0] + domega.c[2] * d.reeb.c[1]};
    certify_zero(ix0[0], d.polynomial, "iota_X0 d(omega) (dx) != 0");
    certify_zero(ix0[1], d.polynomial, "iota_X0 d(omega) (dy) != 0");
    certify_zero(ix0[2], d.polynomial, "iota_X0 d(omega) (dz) != 0");
  }

  // Tanno Christoffels, torsion and J from the structure functions.
  auto cfun = [&](int i, int j, int k) -> Expr {
    if (i == j) return Expr::constant(0);
    bool flip = false;
    int a = i, b = j;
    if ((a == 2 && b == 1) || (a == 0 && (b == 1 || b == 2))) {
      std::swap(a, b);
      flip = true;
    }
    Expr out;
    if (a == 1 && b == 2)
      out = (k == 1 ? d.c12_1 : (k == 2 ? d.c12_2 : d.c12_0));
    else if (a == 1 && b == 0)
      out = (k == 1 ? d.c10_1 : (k == 2 ? d.c10_2 : Expr::constant(0)));
    else
      out = (k == 1 ? d.c20_1 : (k == 2 ? d.c20_2 : Expr::constant(0)));
    return flip ? -out : out;
  };

  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        d.gamma[i - 1][j - 1][k - 1] =
            half() * (cfun(i, j, k) + cfun(k, i, j) + cfun(k, j, i));

  for (int k = 1; k <= 2; ++k)
    for (int j = 1; j <= 2; ++j) {
      d.tau[k - 1][j - 1] = half() * (cfun(k, 0, j) + cfun(j, 0, k));
      d.jmat[k - 1][j - 1] = cfun(j, k, 0);
    }

  return d;
}

Expr popp_divergence(const VectorField& v, const ContactData& data) {
  Mat3 mf = frame_matrix(data.x1, data.x2, data.reeb);
  auto coeff = solve_in_frame(mf, data.frame_det, v.c);
  // div X1 = -c12^2, div X2 = c12^1, div X0 = 0, plus the Leibniz rule.
  return data.x1.apply(coeff[0]) + data.x2.apply(coeff[1]) +
         data.reeb.apply(coeff[2]) - coeff[0] * data.c12_2 +
         coeff[1] * data.c12_1;
}

std::vector<std::array<double, 2>> covariant_acceleration(
    const Trajectory& traj, const ContactData& data) {
  const std::size_t n = traj.samples.size();
  if (n < 3) throw DomainError("covariant_acceleration needs at least 3 samples");
  const double dt = traj.dt;

  CompiledExpr gamma[2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) gamma[i][j][k] = CompiledExpr(data.gamma[i][j][k]);

  std::vector<std::array<double, 2>> out(n);
  auto u = [&](std::size_t i, int k) {
    return k == 0 ? traj.samples[i].u1 : traj.samples[i].u2;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      double du;
      if (i == 0)
        du = (-3 * u(0, k) + 4 * u(1, k) - u(2, k)) / (2 * dt);
      else if (i + 1 == n)
        du = (3 * u(n - 1, k) - 4 * u(n - 2, k) + u(n - 3, k)) / (2 * dt);
      else
        du = (u(i + 1, k) - u(i - 1, k)) / (2 * dt);
      double quad = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          quad += u(i, a) * u(i, b) * gamma[a][b][k].eval(traj.samples[i].s.p);
      out[i][static_cast<std::size_t>(k)] = du + quad;
    }
  }
  return out;
}

double jacobi_residual(const ContactData& data, const SampleGrid& grid) {
  // Frame-coefficient bracket: for U = sum u_i X_i, V = sum v_i X_i
  // (i in {1,2,0}), [U,V]_k = U(v_k) - V(u_k) + sum_ij u_i v_j c_ij^k.
  struct FrameVec {
    std::array<Expr, 3> a;  // coefficients on X1, X2, X0
  };
  auto dirder = [&](const FrameVec& u, const Expr& f) {
    return u.a[0] * data.x1.apply(f) + u.a[1] * data.x2.apply(f) +
           u.a[2] * data.reeb.apply(f);
  };
  auto cfun = [&](int i, int j, int k) { return data.c(i == 2 ? 0 : i + 1, j == 2 ? 0 : j + 1, k == 2 ? 0 : k + 1); };
  auto fbracket = [&](const FrameVec& u, const FrameVec& v) {
    FrameVec r;
    for (int k = 0; k < 3; ++k) {
      std::vector<Expr> terms;
      terms.push_back(dirder(u, v.a[k]));
      terms.push_back(-dirder(v, u.a[k]));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          terms.push_back(u.a[i] * v.a[j] * cfun(i, j, k));
      r.a[k] = sum(std::move(terms));
    }
    return r;
  };
  FrameVec basis[3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      basis[i].a[k] = Expr::constant(i == k ? 1 : 0);

  double worst = 0;
  std::vector<Vec3> pts = grid.points();
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    FrameVec lhs = fbracket(fbracket(basis[i], basis[j]), basis[k]);
    FrameVec mid = fbracket(fbracket(basis[j], basis[k]), basis[i]);
    FrameVec rhs = fbracket(fbracket(basis[k], basis[i]), basis[j]);
    for (int a = 0; a < 3; ++a) {
      Expr total = lhs.a[a] + mid.a[a] + rhs.a[a];
      for (const Vec3& p : pts)
        worst = std::max(worst, std::abs(evaluate(total, p)));
    }
  }
  return worst;
}

}  // namespace srmag
