#include "srmag/lift.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

namespace srmag {

namespace {

// Exact/float evaluation switch at a fixed point.
struct Probe {
  const ChartPoint& p;
  bool exact;
  double tol;

  bool is_zero(const Expr& e) const {
    if (exact && e.is_polynomial())
      return evaluate_exact(e, *p.exact) == 0;
    return std::abs(evaluate(e, p.f)) <= tol;
  }
  double value(const Expr& e) const { return evaluate(e, p.f); }
};

bool use_exact(const MagneticScenario& s, const ChartPoint& p) {
  return s.mode == EvalMode::ExactRational && p.exact.has_value() &&
         s.data.polynomial && s.field.b1.is_polynomial() &&
         s.field.b2.is_polynomial();
}

std::string derivative_word(const std::vector<int>& idx) {
  // idx = (i_0, i_1, ..., i_k): the word X_{i_k}...X_{i_1} beta_{i_0}
  std::string w;
  for (std::size_t j = idx.size(); j-- > 1;) w += "X" + std::to_string(idx[j]);
  w += "b" + std::to_string(idx[0]);
  return w;
}

// Incremental rank over Q^4 by row reduction; keeps normalized pivots.
struct ExactBasis {
  std::vector<std::array<Rational, 4>> rows;
  std::vector<int> pivots;

  bool add(std::array<Rational, 4> v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational& c = v[static_cast<std::size_t>(pivots[r])];
      if (c != 0)
        for (int j = 0; j < 4; ++j)
          v[static_cast<std::size_t>(j)] -= c * rows[r][static_cast<std::size_t>(j)];
    }
    int pivot = -1;
    for (int j = 0; j < 4; ++j)
      if (v[static_cast<std::size_t>(j)] != 0) {
        pivot = j;
        break;
      }
    if (pivot < 0) return false;
    Rational inv = v[static_cast<std::size_t>(pivot)];
    for (int j = 0; j < 4; ++j) v[static_cast<std::size_t>(j)] /= inv;
    rows.push_back(v);
    pivots.push_back(pivot);
    return true;
  }
  int rank() const { return static_cast<int>(rows.size()); }
};

}  // namespace

LiftedFrame build_lift(const MagneticScenario& s) {
  const HOneForm& a = s.require_potential();
  const ContactData& d = s.data;
  LiftedFrame lf;
  lf.y1 = {{d.x1.c[0], d.x1.c[1], d.x1.c[2], a.a1}};
  lf.y2 = {{d.x2.c[0], d.x2.c[1], d.x2.c[2], a.a2}};
  lf.da12 = potential_zeta(a, d);
  lf.y0 = {{d.reeb.c[0], d.reeb.c[1], d.reeb.c[2], lf.da12}};

  auto coeff = expand_in_lifted_frame(lie_bracket(lf.y1, lf.y2), lf, d);
  bool ok = probably_equal(coeff[0], d.c12_1) && probably_equal(coeff[1], d.c12_2) &&
            probably_equal(coeff[2], Expr::constant(1)) && probably_zero(coeff[3]);
  if (!ok)
    throw CertificationError(
        "lifted bracket identity [Y1,Y2] = c12^1 Y1 + c12^2 Y2 + Y0 failed "
        "(contact-data derivation bug)");
  return lf;
}

std::array<Expr, 4> expand_in_lifted_frame(const VectorField4& v,
                                           const LiftedFrame& lf,
                                           const ContactData& data) {
  // The base part determines the Y-coefficients; dw absorbs the rest.
  Mat3 mf = frame_matrix(data.x1, data.x2, data.reeb);
  auto base = solve_in_frame(mf, data.frame_det, {v.c[0], v.c[1], v.c[2]});
  Expr aw = v.c[3] - base[0] * lf.y1.c[3] - base[1] * lf.y2.c[3] -
            base[2] * lf.y0.c[3];
  return {base[0], base[1], base[2], aw};
}

StepReport step_via_derivatives(const MagneticScenario& s, const ChartPoint& p,
                                int budget) {
  s.require_certified();
  if (budget < 3) throw DomainError("step budget must be at least 3");
  if (budget - 3 > kDerivativeBudget)
    throw DomainError("step budget exceeds the derivative-order budget");

  Probe probe{p, use_exact(s, p), s.tol.zero_locus};

  StepReport rep;
  rep.point = p.f;
  rep.method = StepMethod::Derivatives;
  rep.budget = budget;
  rep.exact = probe.exact;

  struct Word {
    std::vector<int> idx;
    Expr e;
  };
  std::vector<Word> level = {{{1}, s.field.b1}, {{2}, s.field.b2}};
  for (int order = 0; order + 3 <= budget; ++order) {
    if (order > 0) {
      std::vector<Word> next;
      next.reserve(level.size() * 2);
      for (const Word& w : level)
        for (int i = 1; i <= 2; ++i) {
          Word nw;
          nw.idx = w.idx;
          nw.idx.push_back(i);
          nw.e = (i == 1 ? s.data.x1 : s.data.x2).apply(w.e);
          next.push_back(std::move(nw));
        }
      level = std::move(next);
    }
    for (const Word& w : level) {
      if (!probe.is_zero(w.e)) {
        rep.bounded = true;
        rep.step = order + 3;
        rep.witness = derivative_word(w.idx);
        return rep;
      }
    }
  }
  rep.bounded = false;
  rep.step = budget + 1;
  rep.witness = "";
  return rep;
}

StepReport step_via_brackets(const MagneticScenario& s, const ChartPoint& p,
                             int budget) {
  s.require_certified();
  if (budget < 1) throw DomainError("step budget must be positive");
  LiftedFrame lf = build_lift(s);

  Probe probe{p, use_exact(s, p), s.tol.zero_locus};
  StepReport rep;
  rep.point = p.f;
  rep.method = StepMethod::Brackets;
  rep.budget = budget;
  rep.exact = probe.exact;

  struct Word {
    std::string name;
    VectorField4 v;
    int head = 0;  // leading generator index (prunes [Y_a, Y_a] at length 2)
  };

  auto eval4 = [&](const VectorField4& v) {
    std::array<double, 4> out;
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = evaluate(v.c[i], p.f);
    return out;
  };
  auto eval4_exact = [&](const VectorField4& v) {
    std::array<Rational, 4> out;
    for (int i = 0; i < 4; ++i)
      out[static_cast<std::size_t>(i)] = evaluate_exact(v.c[i], *p.exact);
    return out;
  };

  ExactBasis exact_basis;
  std::vector<Eigen::Vector4d> float_vectors;
  std::string witness;

  auto add_vector = [&](const Word& w) -> int {  // returns current rank
    if (probe.exact) {
      if (exact_basis.add(eval4_exact(w.v)) && exact_basis.rank() == 4)
        witness = w.name;
      return exact_basis.rank();
    }
    auto v = eval4(w.v);
    float_vectors.emplace_back(v[0], v[1], v[2], v[3]);
    Eigen::MatrixXd m(4, static_cast<Eigen::Index>(float_vectors.size()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = float_vectors[static_cast<std::size_t>(c)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double cutoff = s.tol.rank_svd * svd.singularValues()(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > cutoff) ++rank;
    if (rank == 4 && witness.empty()) witness = w.name;
    return rank;
  };

  std::vector<Word> level = {{"Y1", lf.y1, 1}, {"Y2", lf.y2, 2}};
  for (const Word& w : level)
    if (add_vector(w) == 4) {
      rep.bounded = true;
      rep.step = 1;
      rep.witness = witness;
      return rep;
    }

  for (int len = 2; len <= budget; ++len) {
    std::vector<Word> next;
    for (const Word& w : level)
      for (int a = 1; a <= 2; ++a) {
        if (len == 2 && a >= w.head) continue;  // [Y_a,Y_a] = 0, [Y2,Y1] = -[Y1,Y2]
        Word nw;
        nw.name = "[Y" + std::to_string(a) + "," + w.name + "]";
        nw.v = lie_bracket(a == 1 ? lf.y1 : lf.y2, w.v);
        nw.head = a;
        next.push_back(std::move(nw));
      }
    level = std::move(next);
    int rank = 0;
    for (const Word& w : level) rank = add_vector(w);
    if (rank == 4) {
      rep.bounded = true;
      rep.step = len;
      rep.witness = witness;
      return rep;
    }
  }
  rep.bounded = false;
  rep.step = budget + 1;
  return rep;
}

RankReport rank_classify(const MagneticScenario& s, const ChartPoint& p) {
  s.require_certified();
  Probe probe{p, use_exact(s, p), s.tol.zero_locus};

  if (!probe.is_zero(s.field.b1) || !probe.is_zero(s.field.b2))
    throw DomainError("rank_classify: point is not in the zero locus of beta");

  RankReport rep;
  rep.point = p.f;
  rep.exact = probe.exact;

  Expr entries[2][3];
  const Expr* betas[2] = {&s.field.b1, &s.field.b2};
  for (int b = 0; b < 2; ++b) {
    entries[b][0] = s.data.x1.apply(*betas[b]);
    entries[b][1] = s.data.x2.apply(*betas[b]);
    entries[b][2] = s.data.reeb.apply(*betas[b]);
  }
  bool zero[2][3];
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 3; ++a) {
      rep.matrix[b][a] = probe.value(entries[b][a]);
      zero[b][a] = probe.is_zero(entries[b][a]);
    }

  if (probe.exact) {
    // Rank of a 2x3 rational matrix by direct minor inspection.
    RVec3 q = *p.exact;
    Rational m[2][3];
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 3; ++a) m[b][a] = evaluate_exact(entries[b][a], q);
    bool any = false, rank2 = false;
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 3; ++a) any = any || m[b][a] != 0;
    for (int a = 0; a < 3; ++a)
      for (int c = a + 1; c < 3; ++c)
        rank2 = rank2 || (m[0][a] * m[1][c] - m[0][c] * m[1][a]) != 0;
    rep.rank = rank2 ? 2 : (any ? 1 : 0);
  } else {
    Eigen::Matrix<double, 2, 3> m;
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 3; ++a) m(b, a) = rep.matrix[b][a];
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(m);
    double cutoff = s.tol.rank_svd * svd.singularValues()(0);
    rep.rank = 0;
    if (svd.singularValues()(0) > 0)
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cutoff) ++rep.rank;
  }

  if (rep.rank == 2) {
    rep.predicted_steps = {4};
    rep.refined_step = 4;
  } else if (rep.rank == 0) {
    rep.unbounded_prediction = true;  // step >= 5
  } else {
    rep.predicted_steps = {4, 5};
    // Up to switching indices, choose i with d(beta_i) != 0.
    int i = (!zero[0][0] || !zero[0][1] || !zero[0][2]) ? 0 : 1;
    rep.sigma_index = i + 1;
    rep.x0_only = zero[0][0] && zero[0][1] && zero[1][0] && zero[1][1];
    bool characteristic = zero[i][0] && zero[i][1];
    rep.characteristic_point = characteristic;
    rep.refined_step = characteristic ? 5 : 4;
  }
  return rep;
}

bool is_characteristic_point(const ContactData& data, const Expr& f,
                             const ChartPoint& p, double tol) {
  bool exact = data.polynomial && f.is_polynomial() && p.exact.has_value();
  Probe probe{p, exact, tol};
  if (!probe.is_zero(f))
    throw DomainError("is_characteristic_point: f(p) != 0");
  Expr grad[3] = {differentiate(f, 0), differentiate(f, 1), differentiate(f, 2)};
  if (probe.is_zero(grad[0]) && probe.is_zero(grad[1]) && probe.is_zero(grad[2]))
    throw DomainError("is_characteristic_point: df(p) = 0, surface not regular at p");
  return probe.is_zero(data.x1.apply(f)) && probe.is_zero(data.x2.apply(f));
}

LiftedState lifted_state_from_base(const MagneticScenario& s,
                                   const FlowState& base, double w0) {
  const HOneForm& a = s.require_potential();
  LiftedState out;
  out.p = {base.p[0], base.p[1], base.p[2], w0};
  double a1 = evaluate(a.a1, base.p), a2 = evaluate(a.a2, base.p);
  double zeta = evaluate(potential_zeta(a, s.data), base.p);
  out.z1 = base.h1 + s.charge * a1;
  out.z2 = base.h2 + s.charge * a2;
  out.z0 = base.h0 + s.charge * zeta;
  out.zw = s.charge;
  return out;
}

LiftedTrajectory integrate_lifted_flow(const MagneticScenario& s,
                                       const LiftedState& init, double T,
                                       double dt) {
  s.require_certified();
  const HOneForm& a = s.require_potential();
  if (!(dt > 0) || !(T > 0))
    throw DomainError("integrate_lifted_flow: T, dt must be positive");
  if (T / dt > 1e7) throw DomainError("T/dt exceeds 1e7");

  CompiledExpr x1[3], x2[3];
  for (int i = 0; i < 3; ++i) {
    x1[i] = CompiledExpr(s.data.x1.c[i]);
    x2[i] = CompiledExpr(s.data.x2.c[i]);
  }
  CompiledExpr a1(a.a1), a2(a.a2);
  CompiledExpr c12_1(s.data.c12_1), c12_2(s.data.c12_2);
  CompiledExpr c10_1(s.data.c10_1), c10_2(s.data.c10_2);
  CompiledExpr c20_1(s.data.c20_1), c20_2(s.data.c20_2);
  CompiledExpr b1(s.field.b1), b2(s.field.b2);

  const double zw = init.zw;
  // y = (x, y, z, w, z1, z2, z0)
  auto rhs = [&](const double* y, double* dy) {
    const double* p = y;
    double z1 = y[4], z2 = y[5], z0 = y[6];
    for (int i = 0; i < 3; ++i) dy[i] = z1 * x1[i].eval(p) + z2 * x2[i].eval(p);
    dy[3] = z1 * a1.eval(p) + z2 * a2.eval(p);
    double braket12 = c12_1.eval(p) * z1 + c12_2.eval(p) * z2 + z0;
    dy[4] = -z2 * braket12;
    dy[5] = z1 * braket12;
    dy[6] = z1 * (c10_1.eval(p) * z1 + c10_2.eval(p) * z2 + b1.eval(p) * zw) +
            z2 * (c20_1.eval(p) * z1 + c20_2.eval(p) * z2 + b2.eval(p) * zw);
  };

  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  double y[7] = {init.p[0], init.p[1], init.p[2], init.p[3],
                 init.z1,  init.z2,  init.z0};

  LiftedTrajectory traj;
  traj.dt = dt;
  traj.samples.reserve(steps + 1);
  auto energy = [&](const double* yy) { return 0.5 * (yy[4] * yy[4] + yy[5] * yy[5]); };
  double e0 = energy(y), eprev = e0;
  double drift_floor = std::max(std::abs(e0), 1e-12);

  auto push = [&](double t) {
    LiftedSample sm;
    sm.t = t;
    sm.s.p = {y[0], y[1], y[2], y[3]};
    sm.s.z1 = y[4];
    sm.s.z2 = y[5];
    sm.s.z0 = y[6];
    sm.s.zw = zw;
    sm.energy = energy(y);
    traj.samples.push_back(sm);
  };
  push(0.0);

  double k1[7], k2[7], k3[7], k4[7], tmp[7];
  for (std::size_t k = 1; k <= steps; ++k) {
    rhs(y, k1);
    for (int i = 0; i < 7; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (int i = 0; i < 7; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (int i = 0; i < 7; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(tmp, k4);
    for (int i = 0; i < 7; ++i) y[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    for (double v : y)
      if (!std::isfinite(v)) throw NumericError("non-finite lifted flow state");
    double e = energy(y);
    if (std::abs(e - eprev) > s.tol.energy_drift * drift_floor)
      throw NumericError("lifted flow: per-step energy drift exceeds tolerance");
    eprev = e;
    push(static_cast<double>(k) * dt);
  }
  return traj;
}

AbnormalReport abnormal_certificate(const MagneticScenario& s,
                                    const Trajectory& traj) {
  s.require_certified();
  CompiledExpr b1(s.field.b1), b2(s.field.b2);

  AbnormalReport rep;
  rep.pass = true;
  int prev_type = 0;
  for (const TrajectorySample& sm : traj.samples) {
    double v1 = b1.eval(sm.s.p), v2 = b2.eval(sm.s.p);
    double bnorm = std::sqrt(v1 * v1 + v2 * v2);
    double speed = std::sqrt(sm.u1 * sm.u1 + sm.u2 * sm.u2);
    double bval = std::abs(v1 * sm.u1 + v2 * sm.u2);
    int type;
    if (bnorm <= s.tol.zero_locus) {
      type = 2;
    } else {
      double scale = std::max(bnorm * speed, 1e-300);
      double violation = bval / scale;
      if (violation <= s.tol.char_certificate) {
        type = 1;
      } else {
        type = 1;
        rep.pass = false;
        rep.worst_violation = std::max(rep.worst_violation, violation);
      }
    }
    if (type != prev_type) {
      rep.segments.push_back({type, sm.t, sm.t});
      prev_type = type;
    } else {
      rep.segments.back().t_end = sm.t;
    }
  }
  return rep;
}

SurfaceFamilyReport surface_family_predict(const ContactData& data,
                                           const Expr& f, const Expr& b1,
                                           const Expr& b2, int n,
                                           const ChartPoint& p) {
  if (n < 1) throw DomainError("surface_family_predict: n must be >= 1");
  if (3 + 2 * n > kDerivativeBudget + 3)
    throw DomainError("surface_family_predict: 2n exceeds the derivative budget");

  bool exact = data.polynomial && f.is_polynomial() && b1.is_polynomial() &&
               b2.is_polynomial() && p.exact.has_value();
  Probe probe{p, exact, Tolerances{}.zero_locus};

  double bnorm = std::hypot(probe.value(b1), probe.value(b2));
  if (bnorm <= Tolerances{}.zero_locus)
    throw DomainError("surface_family_predict: b1^2 + b2^2 vanishes at p");

  // Assemble beta = f^n/n! (b1 nu1 + b2 nu2) ^ omega.
  Rational nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= i;
  Expr scale = divide(pow(f, n), Expr::constant(nfact));
  HTwoForm beta{scale * b1, scale * b2};

  auto closed = is_closed(beta, data);
  if (!closed.closed)
    throw CertificationError("surface_family_predict: field is not closed");

  // Closedness-derived identity V2 f + div(V2) f/n = 0 (holds by continuity
  // on Sigma as well).
  VectorField v2field = (-b2) * data.x1 + b1 * data.x2;
  Expr identity = v2field.apply(f) +
                  divide(popp_divergence(v2field, data) * f, Expr::constant(n));
  if (!probably_zero(identity))
    throw CertificationError(
        "surface_family_predict: closedness identity V2 f + div(V2) f/n = 0 "
        "failed; input is not in the surface-family class");

  SurfaceFamilyReport rep;
  rep.f_value = probe.value(f);
  Expr v1f = b1 * data.x1.apply(f) + b2 * data.x2.apply(f);
  Expr v2f = v2field.apply(f);
  rep.v1f_value = probe.value(v1f);
  rep.v2f_value = probe.value(v2f);
  rep.x0f_value = probe.value(data.reeb.apply(f));

  if (!probe.is_zero(f)) {
    rep.location = SurfaceLocation::OffSigma;
    rep.predicted_step = 3;
  } else {
    Expr grad[3] = {differentiate(f, 0), differentiate(f, 1), differentiate(f, 2)};
    if (probe.is_zero(grad[0]) && probe.is_zero(grad[1]) && probe.is_zero(grad[2]))
      throw DomainError("surface_family_predict: df(p) = 0 on Sigma");
    if (probe.is_zero(v1f)) {
      rep.location = SurfaceLocation::Characteristic;
      rep.predicted_step = 2 * n + 3;
    } else {
      rep.location = SurfaceLocation::SigmaNonCharacteristic;
      rep.predicted_step = n + 3;
    }
  }

  MagneticScenario tmp;
  tmp.data = data;
  tmp.field = beta;
  tmp.charge = 1.0;
  tmp.mode = exact ? EvalMode::ExactRational : EvalMode::Float64;
  tmp.field_certified = true;  // closedness certified above
  rep.cross_check = step_via_derivatives(tmp, p, 2 * n + 3);
  if (rep.cross_check.bounded && rep.cross_check.step != rep.predicted_step)
    throw CertificationError(
        "surface_family_predict: derivative method disagrees with the "
        "predicted step");
  return rep;
}

}  // namespace srmag
