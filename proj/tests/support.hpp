#pragma once

#include "oracle.hpp"

#include <melnikov/core/family.hpp>

#include <random>
#include <string>

namespace support {

using melnikov::core::PerturbCoeffs;
using melnikov::core::SystemFamily;
using melnikov::exactalg::Integer;
using melnikov::exactalg::Rational;

inline std::string source_path(const std::string& rel) { return std::string(MELNIKOV_SOURCE_DIR) + "/" + rel; }

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Nonzero rational p/q with q <= 9 and |p/q| <= 2.
inline Rational random_alpha(std::mt19937_64& rng) {
  const long q = uniform(rng, 1, 9);
  long p = 0;
  while (p == 0) p = uniform(rng, -2 * q, 2 * q);
  return {p, q};
}

// Rational in [-1, 1] with denominator 1000.
inline Rational random_unit(std::mt19937_64& rng) { return {uniform(rng, -1000, 1000), 1000}; }

inline PerturbCoeffs random_coeffs(std::mt19937_64& rng, int n, double density = 1.0) {
  PerturbCoeffs c(n, Rational(1));
  std::bernoulli_distribution keep(density);
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) {
      if (keep(rng)) c.set_a(d - j, j, random_unit(rng));
      if (keep(rng)) c.set_b(d - j, j, random_unit(rng));
    }
  return c;
}

inline oracle::Instance to_oracle(const SystemFamily& f, const PerturbCoeffs& c) {
  oracle::Instance inst{static_cast<long double>(f.alpha1().to_double()),
                        static_cast<long double>(f.alpha2().to_double()), f.m1(), f.m2(), {}, {}};
  // Coefficients with denominators up to 10^15 lose nothing that matters at
  // the 1e-9 agreement level.
  for (const auto& [k, v] : c.a_entries()) inst.a[k] = static_cast<long double>(v.to_double());
  for (const auto& [k, v] : c.b_entries()) inst.b[k] = static_cast<long double>(v.to_double());
  return inst;
}

}  // namespace support
