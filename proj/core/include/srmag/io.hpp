#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "srmag/lift.hpp"
#include "srmag/scenario.hpp"

namespace srmag {

/// 17 significant digits; round-trips doubles bit-exactly.
std::string format_double(double v);

/// Header: t,x,y,z,h1,h2,h0,u1,u2,alpha,energy
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Header: t,x,y,z,w,z1,z2,z0,zw,energy
void write_lifted_csv(std::ostream& out, const LiftedTrajectory& traj);

struct StepRow {
  Vec3 p{0, 0, 0};
  std::string step;      // integer, or ">=N" when the budget was exhausted
  std::string method;    // "derivatives" | "brackets" | "both"
  std::string witness;
  std::string rank;      // empty outside the zero locus
  std::string char_flag; // "0"/"1", empty when not applicable
};

/// Header: x,y,z,step,method,witness_word,rank,char_flag
void write_step_table_csv(std::ostream& out, const std::vector<StepRow>& rows);

/// Inverse of write_trajectory_csv; charge and kind are not stored in the
/// CSV and must be supplied by the caller.
Trajectory read_trajectory_csv(std::istream& in, double charge);

std::uint64_t fnv1a64(std::string_view bytes);

/// Deterministic run manifest: scenario hash, tolerances, seed, version.
std::string manifest_json(const ScenarioFile& file, std::uint64_t seed);

}  // namespace srmag
