#pragma once

#include <optional>
#include <set>
#include <string>

#include "srmag/magnetic.hpp"

namespace srmag {

/// Chart point carrying an optional exact-rational representation. Step and
/// rank operations run in exact arithmetic when the point is rational, the
/// scenario data is polynomial, and the scenario mode allows it.
struct ChartPoint {
  Vec3 f{0, 0, 0};
  std::optional<RVec3> exact;

  static ChartPoint from_rational(const RVec3& p) {
    return {{to_double(p[0]), to_double(p[1]), to_double(p[2])}, p};
  }
  static ChartPoint from_double(const Vec3& p) { return {p, std::nullopt}; }
  static ChartPoint from_long(long x, long y, long z) {
    return from_rational({make_rational(x), make_rational(y), make_rational(z)});
  }
};

/// Generators of the lifted rank-two distribution on M x R:
///   Y_i = X_i + A(X_i) dw,  Y_0 = X_0 + dA(X1,X2) dw.
struct LiftedFrame {
  VectorField4 y1, y2, y0;
  Expr da12;  // dA(X1,X2)
};

/// Builds the lifted frame and certifies the bracket identity
/// [Y1,Y2] = c12^1 Y1 + c12^2 Y2 + Y0 exactly (a failed identity signals a
/// contact-data derivation bug).
LiftedFrame build_lift(const MagneticScenario& s);

/// Coefficients of v on {Y1, Y2, Y0, dw}.
std::array<Expr, 4> expand_in_lifted_frame(const VectorField4& v,
                                           const LiftedFrame& lf,
                                           const ContactData& data);

enum class StepMethod { Derivatives, Brackets };

struct StepReport {
  Vec3 point{0, 0, 0};  // base point; the step holds on all of {p} x R
  bool bounded = false;  // false: all words vanished up to the budget
  int step = 0;          // valid when bounded; >= budget+1 otherwise
  StepMethod method = StepMethod::Derivatives;
  std::string witness;  // nonvanishing derivative word or bracket word
  int budget = 0;
  bool exact = false;  // decided in exact rational arithmetic
};

/// Step of the lifted distribution over a base point by the derivative
/// criterion: step k+3 iff some word X_{i_k}...X_{i_1} beta_{i_0}(p) is
/// nonzero and all shorter words vanish; step 3 iff beta(p) != 0. Exhausted
/// budgets report step >= budget+1, not bracket-generating certified.
StepReport step_via_derivatives(const MagneticScenario& s, const ChartPoint& p,
                                int budget = kDerivativeBudget);

/// Step at a lifted point by accumulating left-normed brackets of Y1, Y2 and
/// ranking their evaluations (exact row reduction, or SVD with relative
/// threshold tol.rank_svd in float mode).
StepReport step_via_brackets(const MagneticScenario& s, const ChartPoint& p,
                             int budget = kDerivativeBudget);

struct RankReport {
  Vec3 point{0, 0, 0};
  int rank = 0;                    // of (d beta_1, d beta_2) at p
  double matrix[2][3]{};           // rows d(beta_b), columns X1, X2, X0
  std::set<int> predicted_steps;   // {4}, {4,5} or {} meaning ">= 5"
  bool unbounded_prediction = false;  // rank 0: step >= 5
  int refined_step = 0;            // rank 1 refinement (4 or 5); else 0
  bool characteristic_point = false;
  int sigma_index = 0;   // which beta_i defines Sigma ("up to switching indices")
  bool x0_only = false;  // rank from the X0 column alone (flagged case)
  bool exact = false;
};

/// Rank classification over a zero-locus point, with the characteristic
/// point refinement in the rank-1 case.
RankReport rank_classify(const MagneticScenario& s, const ChartPoint& p);

/// True iff X1 f(p) = 0 and X2 f(p) = 0 on the regular surface {f = 0}.
/// Requires f(p) = 0 and df(p) != 0.
bool is_characteristic_point(const ContactData& data, const Expr& f,
                             const ChartPoint& p,
                             double tol = Tolerances{}.zero_locus);

struct LiftedState {
  Vec4 p{0, 0, 0, 0};
  double z1 = 0, z2 = 0, z0 = 0, zw = 0;
};

struct LiftedSample {
  double t = 0;
  LiftedState s;
  double energy = 0;
};

struct LiftedTrajectory {
  double t0 = 0, dt = 0;
  std::vector<LiftedSample> samples;
};

/// Covector init over a base flow state: z_i = h_i + q A_i(p),
/// z_0 = h_0 + q dA(X1,X2)(p), z_w = q.
LiftedState lifted_state_from_base(const MagneticScenario& s,
                                   const FlowState& base, double w0 = 0);

/// RK4 on the lifted Hamiltonian H = (z1^2 + z2^2)/2 in frame-covector form;
/// z_w is a constant of motion (the charge of the projected particle).
LiftedTrajectory integrate_lifted_flow(const MagneticScenario& s,
                                       const LiftedState& init, double T,
                                       double dt);

struct AbnormalSegment {
  int type = 0;  // 1 = characteristic (|beta|>0, iota_{gamma'}beta = 0), 2 = zero locus
  double t_begin = 0, t_end = 0;
};

struct AbnormalReport {
  bool pass = false;
  std::vector<AbnormalSegment> segments;
  double worst_violation = 0;  // max normalized |iota_{gamma'} beta| over
                               // samples outside the zero locus
};

/// Per-sample certificate that a horizontal trajectory is abnormal for the
/// lifted structure: each sample is either a characteristic sample or a
/// zero-locus sample; concatenations are reported as segment structure.
AbnormalReport abnormal_certificate(const MagneticScenario& s,
                                    const Trajectory& traj);

enum class SurfaceLocation { OffSigma, SigmaNonCharacteristic, Characteristic };

struct SurfaceFamilyReport {
  SurfaceLocation location = SurfaceLocation::OffSigma;
  int predicted_step = 0;  // 3, n+3, or 2n+3
  double f_value = 0, v1f_value = 0, v2f_value = 0, x0f_value = 0;
  StepReport cross_check;  // step_via_derivatives at the same point
};

/// Step prediction for fields beta = f^n/n! (b1 nu1 + b2 nu2) ^ omega with
/// b1^2 + b2^2 != 0: verifies the closedness identity
/// V2 f + div_mu(V2) f / n = 0, classifies p against Sigma = f^{-1}(0) and
/// Char(Sigma), and cross-checks the prediction with the derivative method.
SurfaceFamilyReport surface_family_predict(const ContactData& data,
                                           const Expr& f, const Expr& b1,
                                           const Expr& b2, int n,
                                           const ChartPoint& p);

}  // namespace srmag
