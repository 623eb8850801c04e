#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srmag/lift.hpp"

namespace srmag {

/// Parsed scenario document (sectioned key = value text; see the bundled
/// scenarios/ directory for the format). Holds the raw bytes for hashing.
struct ScenarioFile {
  std::array<std::string, 3> x1_text, x2_text;
  std::optional<std::array<std::string, 2>> potential_text;  // A1, A2
  std::optional<std::array<std::string, 2>> field_text;      // B1, B2
  double charge = 1.0;
  EvalMode mode = EvalMode::ExactRational;
  Tolerances tol;
  std::string raw;
  std::string name;
};

/// Throws SyntaxError on malformed documents (missing sections, bad keys).
ScenarioFile parse_scenario_text(const std::string& text,
                                 const std::string& name = "");
ScenarioFile load_scenario_file(const std::string& path);

struct CertificationCheck {
  std::string name;
  bool pass = false;
  double residual = 0;
  std::string detail;
};

struct LoadResult {
  std::optional<MagneticScenario> scenario;  // set iff every check passed
  std::vector<CertificationCheck> checks;

  bool all_pass() const { return scenario.has_value(); }
};

/// Derives the contact package and runs the load-time certifications:
/// frame validation, potential consistency d_H A = B, field closedness via
/// both routes, dh1 path agreement, and the lifted bracket identity.
LoadResult build_scenario(const ScenarioFile& file);

/// build_scenario + throw CertificationError on any failed check.
MagneticScenario load_certified_scenario(const std::string& path);

/// Certification entry point for scenarios assembled in code (tests):
/// closedness, potential consistency and lift identity; sets
/// field_certified or throws.
void certify_scenario(MagneticScenario& s, const SampleGrid& grid = {});

}  // namespace srmag
