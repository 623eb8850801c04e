#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <random>
#include <string>

#include "srmag/common.hpp"

namespace srmag {

using Rational = mpq_class;
using RVec3 = std::array<Rational, 3>;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Total decimal digits of numerator and denominator; guards exact evaluation
// against runaway growth (reported, never truncated).
inline std::size_t rational_digits(const Rational& r) {
  return mpz_sizeinbase(r.get_num().get_mpz_t(), 10) +
         mpz_sizeinbase(r.get_den().get_mpz_t(), 10);
}

inline void check_rational_size(const Rational& r,
                                int limit = kRationalDigitLimit) {
  if (static_cast<int>(rational_digits(r)) > limit)
    throw NumericError("exact rational exceeds digit bound (" +
                       std::to_string(rational_digits(r)) + " > " +
                       std::to_string(limit) + " digits)");
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

// Small random rationals for probabilistic identity testing.
inline Rational random_rational(std::mt19937_64& rng, long num_bound = 12,
                                long den_bound = 7) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long> den(1, den_bound);
  return make_rational(num(rng), den(rng));
}

inline RVec3 random_rational_point(std::mt19937_64& rng) {
  return {random_rational(rng), random_rational(rng), random_rational(rng)};
}

}  // namespace srmag
