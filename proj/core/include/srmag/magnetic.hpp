#pragma once

#include <optional>

#include "srmag/flow_types.hpp"
#include "srmag/rumin.hpp"

namespace srmag {

/// A contact package plus a certified-closed horizontal magnetic field,
/// optional potential, and particle charge.
struct MagneticScenario {
  ContactData data;
  std::optional<HOneForm> potential;  // A with d_H A = field
  HTwoForm field;                     // beta, certified closed at load
  double charge = 1.0;
  EvalMode mode = EvalMode::ExactRational;
  Tolerances tol;
  // Set by certify_scenario (scenario load always runs it); field-consuming
  // operations refuse to run without it.
  bool field_certified = false;

  bool has_potential() const { return potential.has_value(); }
  const HOneForm& require_potential() const;
  void require_certified() const;
};

/// RK4 integration of the magnetic Hamiltonian flow in frame-covector form:
///   dx/dt  = sum_i (h_i + q A_i) X_i
///   dh_j/dt = sum_i (h_i + q A_i)[ sum_k c_ij^k h_k + c_ij^0 h_0 - q X_j(A_i) ]
/// Energy H_A is recorded per sample; a per-step drift beyond
/// tol.energy_drift * H_A(0) or a non-finite state raises NumericError.
Trajectory integrate_magnetic_flow(const MagneticScenario& s,
                                   const FlowState& init, double T, double dt);

/// The beta = 0 sub-Riemannian geodesic flow of a bare contact package
/// (the q = 0 reduction; also the flow behind the shooting distance).
Trajectory integrate_geodesic_flow(const ContactData& data,
                                   const FlowState& init, double T, double dt,
                                   double energy_drift_tol = Tolerances{}.energy_drift);

struct ResidualReport {
  std::vector<double> r1, r2;  // per-sample
  double max_r1 = 0, max_r2 = 0;
  double l2_r1 = 0, l2_r2 = 0;  // rms
};

/// Residuals of the intrinsic magnetic-geodesic equations along an
/// integrated trajectory, by finite differences (a cross-check independent
/// of the integrator's right-hand sides):
///   r1 = |nabla_{gamma'} gamma' - alpha J gamma'|
///   r2 = |d(alpha)/dt - g(tau gamma', gamma') - q b(gamma')|
ResidualReport geodesic_residuals(const Trajectory& traj,
                                  const MagneticScenario& s);

/// Sub-Riemannian geodesic curvature at time t of a unit-speed trajectory:
/// d/dt[g(nabla_{gamma'} gamma', J gamma')] - g(tau gamma', gamma').
/// Along magnetic flows this equals q * b(gamma') up to integrator order.
double ksr_value(const Trajectory& traj, const MagneticScenario& s, double t);

struct CharacteristicOptions {
  bool normalize = false;  // integrate the unit-speed characteristic field
  // Frame direction for trajectories declared to live in the zero locus
  // (where the characteristic field vanishes identically).
  std::optional<std::array<double, 2>> zero_locus_direction;
  double zero_threshold = 1e-8;
};

/// RK4 integration of gamma' = -b2 X1 + b1 X2. Halts (with a flag on the
/// trajectory) when |beta| falls below the threshold mid-flight; per-sample
/// certificate values iota_{gamma'} beta are stored in the zeta slot.
Trajectory characteristic_flow(const MagneticScenario& s, const Vec3& p0,
                               double T, double dt,
                               const CharacteristicOptions& opts = {});

/// Initial-covector shift realizing gauge freedom: flows under
/// A' = A - d_H f from `init` project like flows under A from the shifted
/// covector h_i -> h_i - q X_i f(p0), h_0 -> h_0 - q X_0 f(p0).
FlowState gauge_shift(const MagneticScenario& s, const Expr& f,
                      const FlowState& init);

struct ShootingOptions {
  double h0_min = -8.0, h0_max = 8.0, h0_step = 0.1;
  double coarse_dt = 1e-2, fine_dt = 2e-3;
  double jacobian_step = 1e-6;
  double convergence = 1e-9;
  int max_iterations = 30;
  double max_separation = 0.3;
};

/// Local sub-Riemannian distance by geodesic shooting: damped Newton on the
/// time-1 endpoint map, seeded from the Euclidean-horizontal guess plus a
/// vertical-covector scan; returns the minimum constant-speed length over
/// converged branches. NumericError when no branch converges.
double sr_distance_local(const ContactData& data, const Vec3& p, const Vec3& r,
                         const ShootingOptions& opts = {});

struct ExpansionOptions {
  std::vector<double> epsilons{0.05, 0.075, 0.1, 0.125, 0.15};
  double fit_residual_tol = 1e-6;
  ShootingOptions shooting;
};

/// |k_SR| recovered from the sixth-order distance expansion
/// d^2(gamma(t+eps), gamma(t)) = eps^2 - k^2/6! eps^6 + o(eps^6),
/// least-squares over the eps grid (the expansion determines k^2 only).
double ksr_from_expansion(const ContactData& data, const Trajectory& traj,
                          double t, const ExpansionOptions& opts = {});

}  // namespace srmag
