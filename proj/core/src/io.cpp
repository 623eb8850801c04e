#include "srmag/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>

namespace srmag {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,z,h1,h2,h0,u1,u2,alpha,energy\n";
  for (const TrajectorySample& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.s.p[0]) << ','
        << format_double(s.s.p[1]) << ',' << format_double(s.s.p[2]) << ','
        << format_double(s.s.h1) << ',' << format_double(s.s.h2) << ','
        << format_double(s.s.h0) << ',' << format_double(s.u1) << ','
        << format_double(s.u2) << ',' << format_double(s.alpha) << ','
        << format_double(s.energy) << '\n';
  }
}

void write_lifted_csv(std::ostream& out, const LiftedTrajectory& traj) {
  out << "t,x,y,z,w,z1,z2,z0,zw,energy\n";
  for (const LiftedSample& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.s.p[0]) << ','
        << format_double(s.s.p[1]) << ',' << format_double(s.s.p[2]) << ','
        << format_double(s.s.p[3]) << ',' << format_double(s.s.z1) << ','
        << format_double(s.s.z2) << ',' << format_double(s.s.z0) << ','
        << format_double(s.s.zw) << ',' << format_double(s.energy) << '\n';
  }
}

void write_step_table_csv(std::ostream& out, const std::vector<StepRow>& rows) {
  out << "x,y,z,step,method,witness_word,rank,char_flag\n";
  for (const StepRow& r : rows) {
    out << format_double(r.p[0]) << ',' << format_double(r.p[1]) << ','
        << format_double(r.p[2]) << ',' << r.step << ',' << r.method << ','
        << r.witness << ',' << r.rank << ',' << r.char_flag << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, double charge) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,y,z,h1", 0) != 0)
    throw SyntaxError("trajectory CSV: missing or wrong header", 0);
  Trajectory traj;
  traj.kind = TrajectoryKind::Magnetic;
  traj.charge = charge;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TrajectorySample s;
    double cols[11];
    char* cur = line.data();
    for (int i = 0; i < 11; ++i) {
      char* end = nullptr;
      cols[i] = std::strtod(cur, &end);
      if (end == cur) throw SyntaxError("trajectory CSV: bad row", 0);
      cur = (*end == ',') ? end + 1 : end;
    }
    s.t = cols[0];
    s.s.p = {cols[1], cols[2], cols[3]};
    s.s.h1 = cols[4];
    s.s.h2 = cols[5];
    s.s.h0 = cols[6];
    s.u1 = cols[7];
    s.u2 = cols[8];
    s.alpha = cols[9];
    s.energy = cols[10];
    traj.samples.push_back(s);
  }
  if (traj.samples.size() >= 2) {
    traj.t0 = traj.samples.front().t;
    traj.dt = traj.samples[1].t - traj.samples[0].t;
  }
  return traj;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_json(const ScenarioFile& file, std::uint64_t seed) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(file.raw)));
  std::string out = "{";
  out += "\"scenario\":\"" + file.name + "\",";
  out += "\"scenario_hash\":\"" + std::string(hash) + "\",";
  out += "\"tolerances\":{";
  out += "\"frame\":" + format_double(file.tol.frame) + ",";
  out += "\"closedness\":" + format_double(file.tol.closedness) + ",";
  out += "\"zero_locus\":" + format_double(file.tol.zero_locus) + ",";
  out += "\"rank_svd\":" + format_double(file.tol.rank_svd) + ",";
  out += "\"energy_drift\":" + format_double(file.tol.energy_drift) + ",";
  out += "\"char_certificate\":" + format_double(file.tol.char_certificate);
  out += "},";
  out += "\"seed\":" + std::to_string(seed) + ",";
  out += "\"version\":\"" + std::string(kVersion) + "\"";
  out += "}\n";
  return out;
}

}  // namespace srmag
