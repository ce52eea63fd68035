#pragma once

// Fixed-width 128-bit helpers used by the search hot loops. Everything that
// can overflow either saturates explicitly or throws; nothing wraps.

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fcp {

using u128 = unsigned __int128;

inline constexpr u128 kU128Max = ~u128{0};

std::string to_string(u128 v);

/// Parses a base-10 digit string. Throws std::invalid_argument on a
/// malformed token and std::out_of_range when the value needs > 128 bits.
u128 parse_u128(std::string_view text);

mpz_class to_natural(u128 v);
bool fits_u128(const mpz_class& n);
/// Throws std::out_of_range if n is negative or does not fit.
u128 to_u128(const mpz_class& n);

unsigned bit_length(u128 v);

u128 gcd(u128 a, u128 b);

/// base^exp, or cap + 1 (saturated to kU128Max) once the power exceeds cap.
u128 pow_capped(u128 base, unsigned exp, u128 cap);

/// Checked product; returns false on overflow.
inline bool checked_mul(u128 a, u128 b, u128& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

/// floor(n^(1/k)) for k >= 1.
u128 iroot(u128 n, unsigned k);

/// True when n is a perfect square; the root is stored through `root`.
bool is_square(u128 n, u128* root = nullptr);

}  // namespace fcp
