#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace srmag {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: SyntaxError/DomainError -> 2, CertificationError -> 1,
// NumericError -> 3.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

// Tolerances with the defaults pinned by the artifact contract. Scenario
// files may override individual entries.
struct Tolerances {
  double frame = 1e-10;        // frame validation residual
  double closedness = 1e-9;    // is_closed sample residual (float mode)
  double zero_locus = 1e-10;   // |beta| membership threshold
  double rank_svd = 1e-8;      // relative singular-value cutoff
  double energy_drift = 1e-6;  // per-step relative energy drift
  double char_certificate = 1e-8;  // |iota_{gamma'} beta| <= tol*|beta||gamma'|
};

inline constexpr int kDerivativeBudget = 12;       // 2n+3 with n<=4 plus margin
inline constexpr int kRationalDigitLimit = 1000000;
inline constexpr const char* kVersion = "0.1.0";

}  // namespace srmag
