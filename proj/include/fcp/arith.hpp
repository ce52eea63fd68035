#pragma once

// Exact integer kernel: factorization, radicals, integer roots, perfect-power
// detection and primality over arbitrary-precision naturals.

#include <cstdint>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace fcp {

using Natural = mpz_class;
using Rational = mpq_class;

struct PrimePower {
  Natural prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Primes strictly increasing; the empty list factors 1.
using Factorization = std::vector<PrimePower>;

struct Root {
  Natural root;
  bool exact = false;
};

/// One way of writing a value as base^exponent.
struct PowerRep {
  Natural base;
  unsigned exponent = 0;

  friend bool operator==(const PowerRep&, const PowerRep&) = default;
};

struct GcdQuality {
  Natural gcd;
  Rational ratio;  // gcd / rad(gcd), always an integer
};

/// Trial division by small primes, then Brent's variant of Pollard rho with
/// fixed seeds, so the output is reproducible. Throws std::invalid_argument
/// for n == 0.
Factorization factorize(const Natural& n);

Natural radical(const Natural& n);

/// Radical from an existing factorization.
Natural radical(const Factorization& f);

GcdQuality gcd_quality(const Natural& a, const Natural& b);

/// floor(n^(1/k)) and whether it is exact. Rejects n == 0 and k == 0.
Root iroot(const Natural& n, unsigned k);

/// Every (base, exp >= 2) with base^exp == n, sorted by exponent ascending.
/// Rejects n <= 1: 1 is a power for every exponent and callers treat it as
/// a wildcard.
std::vector<PowerRep> perfect_power_exponents(const Natural& n);

/// Deterministic Miller-Rabin below 2^64. Above that: a BPSW probable-prime
/// test followed by 40 Miller-Rabin rounds with seeded pseudo-random bases,
/// bounding the error probability by 4^-40 = 2^-80.
bool is_prime(const Natural& n);
bool is_prime_u64(uint64_t n);

/// Parses "p/q", an integer, or a plain decimal such as "0.9" into an exact
/// rational. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Factorization of a 64-bit value without touching GMP on the hot path.
std::vector<std::pair<uint64_t, unsigned>> factorize_u64(uint64_t n);
uint64_t radical_u64(uint64_t n);

}  // namespace fcp
