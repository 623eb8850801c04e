#pragma once

#include <vector>

#include "srmag/common.hpp"

namespace srmag {

/// Base point plus frame-covector components (h_i = <lambda, X_i>).
struct FlowState {
  Vec3 p{0, 0, 0};
  double h1 = 0, h2 = 0, h0 = 0;
};

enum class TrajectoryKind { Magnetic, Characteristic, LiftedProjection };

struct TrajectorySample {
  double t = 0;
  FlowState s;
  // Derived per-sample quantities: u_i = h_i + q A_i, zeta = dA(X1,X2),
  // alpha = q*zeta + h0, energy = H_A.
  double u1 = 0, u2 = 0, zeta = 0, alpha = 0, energy = 0;
};

struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Magnetic;
  double charge = 0;
  double t0 = 0, dt = 0;  // uniform grid
  std::vector<TrajectorySample> samples;
  // Set when a characteristic flow halted at the zero-locus threshold.
  bool halted_at_zero_locus = false;
  double halt_time = 0;

  std::size_t size() const { return samples.size(); }
  double t_end() const { return samples.empty() ? t0 : samples.back().t; }
};

}  // namespace srmag
