// srmag: scenario-driven CLI for horizontal magnetic fields on contact
// sub-Riemannian chart structures. Subcommands: validate, flow, step,
// abnormal, ksr. Exit codes: 0 pass, 1 certification failure, 2 input
// error, 3 numeric failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "srmag/io.hpp"
#include "srmag/parallel.hpp"
#include "srmag/scenario.hpp"

namespace {

using namespace srmag;

enum ExitCode { kOk = 0, kCertification = 1, kInput = 2, kNumeric = 3 };

std::vector<double> parse_numbers(const std::string& text, std::size_t count,
                                  const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    out.push_back(std::strtod(item.c_str(), &end));
    if (end == item.c_str()) throw SyntaxError(std::string("bad number in ") + what, 0);
  }
  if (out.size() != count)
    throw SyntaxError(std::string(what) + ": expected " + std::to_string(count) +
                          " comma-separated values",
                      0);
  return out;
}

Rational parse_rational_literal(const std::string& text) {
  Expr e = parse_expr(text);
  if (!e.is_constant()) throw SyntaxError("expected a numeric literal: " + text, 0);
  return e.value();
}

std::vector<ChartPoint> parse_grid(const std::string& spec) {
  std::stringstream ss(spec);
  std::string axis;
  std::array<std::vector<Rational>, 3> coords;
  int a = 0;
  while (std::getline(ss, axis, ',')) {
    if (a >= 3) throw SyntaxError("grid spec has more than 3 axes", 0);
    std::stringstream as(axis);
    std::string lo, hi, n;
    if (!std::getline(as, lo, ':') || !std::getline(as, hi, ':') || !std::getline(as, n, ':'))
      throw SyntaxError("grid axis must be lo:hi:n", 0);
    long count = std::strtol(n.c_str(), nullptr, 10);
    if (count < 1) throw SyntaxError("grid axis count must be >= 1 (empty grid)", 0);
    Rational r0 = parse_rational_literal(lo), r1 = parse_rational_literal(hi);
    for (long i = 0; i < count; ++i) {
      Rational t = count == 1 ? r0 : Rational(r0 + (r1 - r0) * Rational(i, count - 1));
      t.canonicalize();
      coords[static_cast<std::size_t>(a)].push_back(t);
    }
    ++a;
  }
  if (a != 3) throw SyntaxError("grid spec needs 3 axes", 0);
  std::vector<ChartPoint> pts;
  for (const Rational& x : coords[0])
    for (const Rational& y : coords[1])
      for (const Rational& z : coords[2]) pts.push_back(ChartPoint::from_rational({x, y, z}));
  return pts;
}

std::vector<ChartPoint> parse_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SyntaxError("cannot open points file " + path, 0);
  std::vector<ChartPoint> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string item;
    RVec3 p;
    int i = 0;
    while (std::getline(ss, item, ',') && i < 3)
      p[static_cast<std::size_t>(i++)] = parse_rational_literal(item);
    if (i != 3) throw SyntaxError("points file row needs 3 coordinates", 0);
    pts.push_back(ChartPoint::from_rational(p));
  }
  if (pts.empty()) throw SyntaxError("points file is empty", 0);
  return pts;
}

struct OutputTarget {
  std::string path;  // empty = stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SyntaxError("cannot open output file " + path, 0);
    out << content;
  }
};

void emit_manifest(const ScenarioFile& file, std::uint64_t seed,
                   const std::string& out_path, const std::string& manifest_path) {
  std::string path = manifest_path;
  if (path.empty() && !out_path.empty()) path = out_path + ".manifest.json";
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SyntaxError("cannot open manifest file " + path, 0);
  out << manifest_json(file, seed);
}

int cmd_validate(const std::string& scenario_path, std::uint64_t seed) {
  ScenarioFile file = load_scenario_file(scenario_path);
  (void)seed;
  LoadResult result = build_scenario(file);
  for (const auto& c : result.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << " residual=" << format_double(c.residual) << " " << c.detail << "\n";
  }
  return result.all_pass() ? kOk : kCertification;
}

int cmd_flow(const std::string& scenario_path, const std::string& init_text,
             double T, double dt, bool lifted, const std::string& out_path,
             const std::string& manifest_path, std::uint64_t seed) {
  ScenarioFile file = load_scenario_file(scenario_path);
  MagneticScenario s = [&] {
    LoadResult r = build_scenario(file);
    if (!r.scenario) throw CertificationError("scenario failed certification");
    return std::move(*r.scenario);
  }();

  std::ostringstream csv;
  if (lifted) {
    auto v = parse_numbers(init_text, 8, "--init (lifted: x,y,z,w,z1,z2,z0,zw)");
    LiftedState init;
    init.p = {v[0], v[1], v[2], v[3]};
    init.z1 = v[4];
    init.z2 = v[5];
    init.z0 = v[6];
    init.zw = v[7];
    LiftedTrajectory traj = integrate_lifted_flow(s, init, T, dt);
    write_lifted_csv(csv, traj);
  } else {
    auto v = parse_numbers(init_text, 6, "--init (x,y,z,h1,h2,h0)");
    FlowState init{{v[0], v[1], v[2]}, v[3], v[4], v[5]};
    Trajectory traj = integrate_magnetic_flow(s, init, T, dt);
    write_trajectory_csv(csv, traj);
  }
  OutputTarget{out_path}.write(csv.str());
  emit_manifest(file, seed, out_path, manifest_path);
  return kOk;
}

int cmd_step(const std::string& scenario_path, const std::string& grid_spec,
             const std::string& points_path, int budget, const std::string& method,
             const std::string& out_path, const std::string& manifest_path,
             std::uint64_t seed) {
  ScenarioFile file = load_scenario_file(scenario_path);
  MagneticScenario s = [&] {
    LoadResult r = build_scenario(file);
    if (!r.scenario) throw CertificationError("scenario failed certification");
    return std::move(*r.scenario);
  }();

  std::vector<ChartPoint> pts;
  if (!grid_spec.empty())
    pts = parse_grid(grid_spec);
  else if (!points_path.empty())
    pts = parse_points_file(points_path);
  else
    throw SyntaxError("step: one of --grid or --points is required", 0);

  bool derivatives = method != "brackets";
  bool brackets = method == "brackets" || method == "both";
  if (brackets) s.require_potential();

  std::vector<StepRow> rows(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    StepRow row;
    row.p = pts[i].f;
    StepReport rd, rb;
    if (derivatives) rd = step_via_derivatives(s, pts[i], budget);
    if (brackets) rb = step_via_brackets(s, pts[i], budget);
    const StepReport& primary = derivatives ? rd : rb;
    if (derivatives && brackets) {
      if (rd.bounded != rb.bounded || (rd.bounded && rd.step != rb.step))
        throw NumericError("step methods disagree at (" + format_double(row.p[0]) + "," +
                           format_double(row.p[1]) + "," + format_double(row.p[2]) + ")");
      row.method = "both";
    } else {
      row.method = derivatives ? "derivatives" : "brackets";
    }
    row.step = primary.bounded ? std::to_string(primary.step)
                               : (">=" + std::to_string(primary.step));
    row.witness = primary.witness;
    try {
      RankReport rank = rank_classify(s, pts[i]);
      row.rank = std::to_string(rank.rank);
      row.char_flag = rank.rank == 1 ? (rank.characteristic_point ? "1" : "0") : "";
    } catch (const DomainError&) {
      // not a zero-locus point; rank columns stay empty
    }
    rows[i] = std::move(row);
  });

  std::ostringstream csv;
  write_step_table_csv(csv, rows);
  OutputTarget{out_path}.write(csv.str());
  emit_manifest(file, seed, out_path, manifest_path);
  return kOk;
}

int cmd_abnormal(const std::string& scenario_path, const std::string& init_text,
                 double T, double dt, bool normalize, const std::string& zero_dir,
                 const std::string& out_path) {
  ScenarioFile file = load_scenario_file(scenario_path);
  MagneticScenario s = [&] {
    LoadResult r = build_scenario(file);
    if (!r.scenario) throw CertificationError("scenario failed certification");
    return std::move(*r.scenario);
  }();

  auto v = parse_numbers(init_text, 3, "--init (x,y,z)");
  CharacteristicOptions opts;
  opts.normalize = normalize;
  if (!zero_dir.empty()) {
    auto d = parse_numbers(zero_dir, 2, "--zero-dir (u1,u2)");
    opts.zero_locus_direction = {{d[0], d[1]}};
  }
  Trajectory traj = characteristic_flow(s, {v[0], v[1], v[2]}, T, dt, opts);
  AbnormalReport rep = abnormal_certificate(s, traj);

  std::cout << "certificate: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  std::cout << "worst_violation: " << format_double(rep.worst_violation) << "\n";
  std::cout << "halted_at_zero_locus: "
            << (traj.halted_at_zero_locus ? ("yes t=" + format_double(traj.halt_time))
                                          : std::string("no"))
            << "\n";
  std::cout << "segments:\n";
  for (const auto& seg : rep.segments)
    std::cout << "  " << (seg.type == 1 ? "characteristic" : "zero-locus") << " ["
              << format_double(seg.t_begin) << ", " << format_double(seg.t_end) << "]\n";

  if (!out_path.empty()) {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    OutputTarget{out_path}.write(csv.str());
  }
  return rep.pass ? kOk : kCertification;
}

int cmd_ksr(const std::string& scenario_path, const std::string& traj_path, double t) {
  ScenarioFile file = load_scenario_file(scenario_path);
  MagneticScenario s = [&] {
    LoadResult r = build_scenario(file);
    if (!r.scenario) throw CertificationError("scenario failed certification");
    return std::move(*r.scenario);
  }();

  std::ifstream in(traj_path);
  if (!in) throw SyntaxError("cannot open trajectory file " + traj_path, 0);
  Trajectory traj = read_trajectory_csv(in, s.charge);

  double k = ksr_value(traj, s, t);
  auto idx = static_cast<std::size_t>(std::llround((t - traj.t0) / traj.dt));
  const TrajectorySample& sm = traj.samples.at(idx);
  double b = evaluate(s.field.b1, sm.s.p) * sm.u1 + evaluate(s.field.b2, sm.s.p) * sm.u2;
  std::cout << "ksr_value: " << format_double(k) << "\n";
  std::cout << "q_b: " << format_double(s.charge * b) << "\n";
  double khat = ksr_from_expansion(s.data, traj, t);
  std::cout << "ksr_from_expansion: " << format_double(khat) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horizontal magnetic fields on contact sub-Riemannian chart structures"};
  app.require_subcommand(1);

  std::string scenario, init_text, out_path, manifest_path, grid_spec, points_path;
  std::string method = "both", zero_dir, traj_path;
  double T = 1.0, dt = 1e-3, t_eval = 0.0;
  int budget = kDerivativeBudget;
  bool lifted = false, normalize = false;
  std::uint64_t seed = 42;

  CLI::App* validate = app.add_subcommand("validate", "run scenario certifications");
  validate->add_option("scenario", scenario)->required();
  validate->add_option("--seed", seed);

  CLI::App* flow = app.add_subcommand("flow", "integrate a magnetic (or lifted) flow");
  flow->add_option("scenario", scenario)->required();
  flow->add_option("--init", init_text)->required();
  flow->add_option("--T", T);
  flow->add_option("--dt", dt);
  flow->add_flag("--lifted", lifted);
  flow->add_option("--out", out_path);
  flow->add_option("--manifest", manifest_path);
  flow->add_option("--seed", seed);

  CLI::App* step = app.add_subcommand("step", "step/rank table over points");
  step->add_option("scenario", scenario)->required();
  step->add_option("--grid", grid_spec);
  step->add_option("--points", points_path);
  step->add_option("--budget", budget);
  step->add_option("--method", method)
      ->check(CLI::IsMember({"both", "derivatives", "brackets"}));
  step->add_option("--out", out_path);
  step->add_option("--manifest", manifest_path);
  step->add_option("--seed", seed);

  CLI::App* abnormal = app.add_subcommand("abnormal", "characteristic flow + abnormal certificate");
  abnormal->add_option("scenario", scenario)->required();
  abnormal->add_option("--init", init_text)->required();
  abnormal->add_option("--T", T);
  abnormal->add_option("--dt", dt);
  abnormal->add_flag("--normalize", normalize);
  abnormal->add_option("--zero-dir", zero_dir);
  abnormal->add_option("--out", out_path);

  CLI::App* ksr = app.add_subcommand("ksr", "geodesic curvature along a trajectory");
  ksr->add_option("scenario", scenario)->required();
  ksr->add_option("--traj", traj_path)->required();
  ksr->add_option("--t", t_eval);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(scenario, seed);
    if (flow->parsed())
      return cmd_flow(scenario, init_text, T, dt, lifted, out_path, manifest_path, seed);
    if (step->parsed())
      return cmd_step(scenario, grid_spec, points_path, budget, method, out_path,
                      manifest_path, seed);
    if (abnormal->parsed())
      return cmd_abnormal(scenario, init_text, T, dt, normalize, zero_dir, out_path);
    if (ksr->parsed()) return cmd_ksr(scenario, traj_path, t_eval);
  } catch (const SyntaxError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const CertificationError& e) {
    std::cerr << "certification error: " << e.what() << "\n";
    return kCertification;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
