#include "fcp/u128.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace fcp {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

u128 parse_u128(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer token");
  u128 v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw std::invalid_argument("not a base-10 integer: '" + std::string(text) + "'");
    }
    u128 next;
    if (!checked_mul(v, 10, next) || next + static_cast<unsigned>(ch - '0') < next) {
      throw std::out_of_range("integer exceeds 128 bits: " + std::string(text));
    }
    v = next + static_cast<unsigned>(ch - '0');
  }
  return v;
}

mpz_class to_natural(u128 v) {
  mpz_class hi = static_cast<unsigned long>(static_cast<uint64_t>(v >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<uint64_t>(v));
  return (hi << 64) + lo;
}

bool fits_u128(const mpz_class& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 128;
}

u128 to_u128(const mpz_class& n) {
  if (!fits_u128(n)) throw std::out_of_range("value does not fit in 128 bits");
  mpz_class hi = n >> 64;
  mpz_class lo = n - (hi << 64);
  return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
}

unsigned bit_length(u128 v) {
  const auto hi = static_cast<uint64_t>(v >> 64);
  if (hi != 0) return 128 - static_cast<unsigned>(std::countl_zero(hi));
  return 64 - static_cast<unsigned>(std::countl_zero(static_cast<uint64_t>(v)));
}

u128 gcd(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  if ((a >> 64) == 0 && (b >> 64) == 0) {
    auto x = static_cast<uint64_t>(a), y = static_cast<uint64_t>(b);
    while (y != 0) {
      const uint64_t t = x % y;
      x = y;
      y = t;
    }
    return x;
  }
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 pow_capped(u128 base, unsigned exp, u128 cap) {
  const u128 over = cap == kU128Max ? kU128Max : cap + 1;
  u128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (!checked_mul(acc, base, acc) || acc > cap) return over;
  }
  return acc;
}

u128 iroot(u128 n, unsigned k) {
  if (k == 0) throw std::invalid_argument("iroot: k must be positive");
  if (k == 1 || n < 2) return n;
  if (k >= 128) return 1;
  const long double est = std::pow(static_cast<long double>(n), 1.0L / static_cast<long double>(k));
  u128 r = est < 1.0L ? 1 : static_cast<u128>(est);
  auto fits = [&](u128 base) {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      if (!checked_mul(acc, base, acc) || acc > n) return false;
    }
    return true;
  };
  while (r > 1 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

bool is_square(u128 n, u128* root) {
  // Quadratic residues mod 64 reject most non-squares cheaply.
  constexpr uint64_t kSquaresMod64 = 0x0202021202030213ULL;
  if (((kSquaresMod64 >> static_cast<unsigned>(n & 63)) & 1U) == 0) return false;
  const u128 r = iroot(n, 2);
  if (r * r != n) return false;
  if (root != nullptr) *root = r;
  return true;
}

}  // namespace fcp
