#include "srmag/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace srmag {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::array<std::string, 3> split3(const std::string& v, std::size_t offset) {
  std::array<std::string, 3> out;
  std::stringstream ss(v);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw SyntaxError("expected exactly 3 components", offset);
    out[static_cast<std::size_t>(i++)] = trim(item);
  }
  if (i != 3) throw SyntaxError("expected exactly 3 components", offset);
  return out;
}

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text,
                                 const std::string& name) {
  ScenarioFile f;
  f.raw = text;
  f.name = name;

  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    std::size_t line_offset = offset;
    offset += line.size() + 1;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw SyntaxError("unterminated section header", line_offset);
      section = t.substr(1, t.size() - 2);
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw SyntaxError("expected key = value", line_offset);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty()) throw SyntaxError("key outside any [section]", line_offset);
    kv[section + "." + key] = {value, line_offset};
  }

  auto get = [&](const std::string& k) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const std::string& k) {
    auto v = get(k);
    if (!v) throw SyntaxError("missing required key " + k, 0);
    return *v;
  };

  auto x1 = require("frame.X1");
  auto x2 = require("frame.X2");
  f.x1_text = split3(x1.first, x1.second);
  f.x2_text = split3(x2.first, x2.second);

  bool has_a = get("potential.A1").has_value() || get("potential.A2").has_value();
  bool has_b = get("field.B1").has_value() || get("field.B2").has_value();
  if (!has_a && !has_b)
    throw SyntaxError("scenario needs a [potential] or a [field] section", 0);
  if (has_a)
    f.potential_text = {{require("potential.A1").first, require("potential.A2").first}};
  if (has_b) f.field_text = {{require("field.B1").first, require("field.B2").first}};

  if (auto q = get("charge.q")) {
    try {
      f.charge = std::stod(q->first);
    } catch (const std::exception&) {
      throw SyntaxError("charge.q is not a number", q->second);
    }
  }
  if (auto m = get("eval.mode")) {
    if (m->first == "exact")
      f.mode = EvalMode::ExactRational;
    else if (m->first == "float")
      f.mode = EvalMode::Float64;
    else
      throw SyntaxError("eval.mode must be 'exact' or 'float'", m->second);
  }
  auto tolkey = [&](const std::string& k, double& slot) {
    if (auto v = get("tolerances." + k)) {
      try {
        slot = std::stod(v->first);
      } catch (const std::exception&) {
        throw SyntaxError("tolerances." + k + " is not a number", v->second);
      }
    }
  };
  tolkey("frame", f.tol.frame);
  tolkey("closedness", f.tol.closedness);
  tolkey("zero_locus", f.tol.zero_locus);
  tolkey("rank_svd", f.tol.rank_svd);
  tolkey("energy_drift", f.tol.energy_drift);
  tolkey("char_certificate", f.tol.char_certificate);
  return f;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyntaxError("cannot open scenario file " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos)
    name = name.substr(0, dot);
  return parse_scenario_text(ss.str(), name);
}

namespace {

double grid_residual(const Expr& e, const SampleGrid& grid) {
  double worst = 0;
  for (const Vec3& p : grid.points())
    worst = std::max(worst, std::abs(evaluate(e, p)));
  return worst;
}

// Shared certification core used by build_scenario and certify_scenario.
void run_certifications(MagneticScenario& s, const SampleGrid& grid,
                        std::vector<CertificationCheck>* checks) {
  auto record = [&](const std::string& name, bool pass, double residual,
                    const std::string& detail) {
    if (checks) checks->push_back({name, pass, residual, detail});
    if (!pass && !checks)
      throw CertificationError(name + " failed: " + detail);
  };

  bool ok = true;

  if (s.has_potential()) {
    HTwoForm derived = dh1(*s.potential, s.data);
    Expr d1 = derived.b1 - s.field.b1;
    Expr d2 = derived.b2 - s.field.b2;
    bool exactable = d1.is_polynomial() && d2.is_polynomial() && s.data.polynomial;
    bool pass = exactable ? (probably_zero(d1) && probably_zero(d2))
                          : (grid_residual(d1, grid) <= s.tol.closedness &&
                             grid_residual(d2, grid) <= s.tol.closedness);
    double res = std::max(grid_residual(d1, grid), grid_residual(d2, grid));
    record("potential_consistency", pass, res,
           pass ? "d_H A = B" : "d_H A does not reproduce the declared field");
    ok = ok && pass;

    HTwoForm other = dh1_exterior(*s.potential, s.data);
    Expr p1 = other.b1 - derived.b1;
    Expr p2 = other.b2 - derived.b2;
    bool agree = exactable ? (probably_zero(p1) && probably_zero(p2))
                           : (grid_residual(p1, grid) <= s.tol.closedness &&
                              grid_residual(p2, grid) <= s.tol.closedness);
    record("dh1_path_agreement", agree,
           std::max(grid_residual(p1, grid), grid_residual(p2, grid)),
           agree ? "frame and exterior routes agree"
                 : "second-order formula and exterior derivative disagree");
    ok = ok && agree;
  }

  {
    bool pass = false;
    double res = 0;
    std::string detail;
    try {
      ClosednessReport rep = is_closed(s.field, s.data, grid, s.tol.closedness);
      pass = rep.closed;
      res = std::max(rep.worst_residual, rep.worst_divergence);
      detail = pass ? (rep.exact ? "closed (exact)" : "closed")
                    : "d(beta) != 0; not a magnetic field";
    } catch (const CertificationError& e) {
      detail = e.what();
      res = 0;
    }
    record("closedness", pass, res, detail);
    ok = ok && pass;
  }

  if (s.has_potential()) {
    bool pass = true;
    std::string detail = "[Y1,Y2] = c12^1 Y1 + c12^2 Y2 + Y0";
    try {
      build_lift(s);
    } catch (const CertificationError& e) {
      pass = false;
      detail = e.what();
    }
    record("lift_identity", pass, 0, detail);
    ok = ok && pass;
  }

  s.field_certified = ok;
  if (!ok && !checks) throw CertificationError("scenario certification failed");
}

}  // namespace

LoadResult build_scenario(const ScenarioFile& file) {
  LoadResult result;

  VectorField x1{{parse_expr(file.x1_text[0]), parse_expr(file.x1_text[1]),
                  parse_expr(file.x1_text[2])}};
  VectorField x2{{parse_expr(file.x2_text[0]), parse_expr(file.x2_text[1]),
                  parse_expr(file.x2_text[2])}};

  SampleGrid grid;
  FrameValidationReport frame = validate_frame(x1, x2, grid, file.tol.frame);
  result.checks.push_back({"frame_validation", frame.pass, frame.worst_residual,
                           frame.detail});
  if (!frame.pass) return result;

  MagneticScenario s;
  try {
    s.data = derive_contact_data(x1, x2, grid, file.tol.frame);
    result.checks.push_back({"contact_derivation", true, 0, "ok"});
  } catch (const CertificationError& e) {
    result.checks.push_back({"contact_derivation", false, 0, e.what()});
    return result;
  }

  s.charge = file.charge;
  s.mode = file.mode;
  s.tol = file.tol;
  if (file.potential_text)
    s.potential = HOneForm{parse_expr((*file.potential_text)[0]),
                           parse_expr((*file.potential_text)[1])};
  if (file.field_text)
    s.field = HTwoForm{parse_expr((*file.field_text)[0]),
                       parse_expr((*file.field_text)[1])};
  else
    s.field = dh1(*s.potential, s.data);

  run_certifications(s, grid, &result.checks);
  if (s.field_certified) result.scenario = std::move(s);
  return result;
}

MagneticScenario load_certified_scenario(const std::string& path) {
  LoadResult r = build_scenario(load_scenario_file(path));
  if (!r.scenario) {
    std::string why;
    for (const auto& c : r.checks)
      if (!c.pass) why += (why.empty() ? "" : "; ") + c.name + ": " + c.detail;
    throw CertificationError("scenario " + path + " failed certification: " + why);
  }
  return std::move(*r.scenario);
}

void certify_scenario(MagneticScenario& s, const SampleGrid& grid) {
  run_certifications(s, grid, nullptr);
}

}  // namespace srmag
