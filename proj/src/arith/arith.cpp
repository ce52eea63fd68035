#include "fcp/arith.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

#include "fcp/u128.hpp"

namespace fcp {
namespace {

constexpr unsigned kTrialLimit = 1000;

constexpr auto make_small_primes() {
  std::array<bool, kTrialLimit> composite{};
  std::array<unsigned, 168> primes{};
  std::size_t count = 0;
  for (unsigned i = 2; i < kTrialLimit; ++i) {
    if (composite[i]) continue;
    primes[count++] = i;
    for (unsigned j = i * i; j < kTrialLimit; j += i) composite[j] = true;
  }
  return primes;
}

constexpr auto kSmallPrimes = make_small_primes();

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Montgomery arithmetic modulo an odd n. Values stay in [0, n); rho only
// needs a map that is well defined mod every prime factor, so x -> x^2 R^-1 + c
// is used directly without converting in and out of Montgomery form.
struct Mont64 {
  uint64_t n, neg_inv;

  explicit Mont64(uint64_t modulus) : n(modulus), neg_inv(1) {
    uint64_t inv = n;
    for (int i = 0; i < 5; ++i) inv *= 2 - n * inv;
    neg_inv = ~inv + 1;
  }
  uint64_t mul(uint64_t a, uint64_t b) const {
    const u128 t = static_cast<u128>(a) * b;
    const uint64_t m = static_cast<uint64_t>(t) * neg_inv;
    const u128 mn = static_cast<u128>(m) * n;
    const uint64_t lo_carry = static_cast<uint64_t>(t) != 0;
    u128 r = (t >> 64) + (mn >> 64) + lo_carry;
    if (r >= n) r -= n;
    return static_cast<uint64_t>(r);
  }
};

struct U256 {
  u128 hi, lo;
};

inline U256 mul_wide(u128 a, u128 b) {
  const uint64_t a0 = static_cast<uint64_t>(a), a1 = static_cast<uint64_t>(a >> 64);
  const uint64_t b0 = static_cast<uint64_t>(b), b1 = static_cast<uint64_t>(b >> 64);
  const u128 p00 = static_cast<u128>(a0) * b0, p01 = static_cast<u128>(a0) * b1;
  const u128 p10 = static_cast<u128>(a1) * b0, p11 = static_cast<u128>(a1) * b1;
  const u128 mid = (p00 >> 64) + static_cast<uint64_t>(p01) + static_cast<uint64_t>(p10);
  return {p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64), (mid << 64) | static_cast<uint64_t>(p00)};
}

// Requires n < 2^126 so the unreduced sum cannot overflow.
struct Mont128 {
  u128 n, neg_inv;

  explicit Mont128(u128 modulus) : n(modulus), neg_inv(1) {
    u128 inv = n;
    for (int i = 0; i < 6; ++i) inv *= 2 - n * inv;
    neg_inv = ~inv + 1;
  }
  u128 mul(u128 a, u128 b) const {
    const U256 t = mul_wide(a, b);
    const u128 m = t.lo * neg_inv;
    const U256 mn = mul_wide(m, n);
    u128 r = t.hi + mn.hi + (t.lo != 0 ? 1 : 0);
    if (r >= n) r -= n;
    return r;
  }
};

template <class T>
T gcd_any(T a, T b) {
  if (a == 0) return b;
  if (b == 0) return a;
  auto ctz = [](T v) {
    const auto low = static_cast<uint64_t>(v);
    if constexpr (sizeof(T) > 8) {
      if (low == 0) return 64 + __builtin_ctzll(static_cast<uint64_t>(v >> 64));
    }
    return __builtin_ctzll(low);
  };
  const int shift = ctz(a | b);
  a >>= ctz(a);
  while (b != 0) {
    b >>= ctz(b);
    if (a > b) std::swap(a, b);
    b -= a;
  }
  return a << shift;
}

// Brent's cycle detection with batched gcds. Returns n on failure.
template <class T, class M>
T rho_mont(T n, T c) {
  if (n % 2 == 0) return 2;
  const M mont(n);
  auto f = [&](T x) {
    T y = mont.mul(x, x) + c;
    return y >= n ? y - n : y;
  };
  T y = 2, x = 2, ys = 2, q = 1, g = 1;
  constexpr T kBatch = 512;
  for (T r = 1; g == 1; r <<= 1) {
    x = y;
    for (T i = 0; i < r; ++i) y = f(y);
    for (T k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      const T steps = r - k < kBatch ? r - k : kBatch;
      for (T i = 0; i < steps; ++i) {
        y = f(y);
        q = mont.mul(q, x > y ? x - y : y - x);
      }
      g = gcd_any<T>(q, n);
    }
    if (r > (T{1} << 40)) break;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd_any<T>(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

uint64_t rho_u64(uint64_t n, uint64_t c) { return rho_mont<uint64_t, Mont64>(n, c); }

void factor_u64_into(uint64_t n, std::map<uint64_t, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    ++out[n];
    return;
  }
  for (uint64_t c = 1;; ++c) {
    const uint64_t d = rho_u64(n, c);
    if (d != n && d != 1) {
      factor_u64_into(d, out);
      factor_u64_into(n / d, out);
      return;
    }
  }
}

bool miller_rabin_round(const Natural& n, const Natural& n_minus_1, const Natural& d,
                        unsigned s, const Natural& a) {
  Natural x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

Natural rho_big(const Natural& n, unsigned long c) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  auto f = [&](const Natural& v) -> Natural { return (v * v + c) % n; };
  Natural y = 2, x = 2, ys = 2, q = 1, g = 1;
  constexpr unsigned long kBatch = 64;
  for (unsigned long r = 1; g == 1; r <<= 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = f(y);
    for (unsigned long k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (unsigned long i = 0; i < std::min(kBatch, r - k); ++i) {
        y = f(y);
        q = q * abs(x - y) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
    }
    if (r > (1UL << 36)) break;
  }
  if (g == n) {
    do {
      ys = f(ys);
      Natural diff = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void factor_big_into(const Natural& n, std::map<Natural, unsigned>& out) {
  if (n == 1) return;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    std::map<uint64_t, unsigned> small;
    factor_u64_into(mpz_get_ui(n.get_mpz_t()), small);
    for (const auto& [p, e] : small) out[Natural(static_cast<unsigned long>(p))] += e;
    return;
  }
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  // Perfect powers defeat rho's gcd step often enough to split them first.
  for (unsigned k = static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2)); k >= 2; --k) {
    const Root r = iroot(n, k);
    if (r.exact && r.root > 1) {
      std::map<Natural, unsigned> inner;
      factor_big_into(r.root, inner);
      for (const auto& [p, e] : inner) out[p] += e * k;
      return;
    }
  }
  const bool narrow = mpz_sizeinbase(n.get_mpz_t(), 2) <= 126;
  for (unsigned long c = 1;; ++c) {
    const Natural d = narrow ? to_natural(rho_mont<u128, Mont128>(to_u128(n), c)) : rho_big(n, c);
    if (d != n && d != 1) {
      factor_big_into(d, out);
      factor_big_into(n / d, out);
      return;
    }
  }
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < static_cast<uint64_t>(kTrialLimit) * kTrialLimit) return true;
  uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a proven deterministic witness set below 3.3e24.
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const Natural& n) {
  if (n < 2) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
  // reps = 24 selects BPSW only (GMP >= 6.2); the random rounds follow.
  if (mpz_probab_prime_p(n.get_mpz_t(), 24) == 0) return false;
  const Natural n_minus_1 = n - 1;
  Natural d = n_minus_1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x5eed5eedUL);
  const Natural span = n - 3;
  for (int round = 0; round < 40; ++round) {
    const Natural a = rng.get_z_range(span) + 2;
    if (!miller_rabin_round(n, n_minus_1, d, s, a)) return false;
  }
  return true;
}

std::vector<std::pair<uint64_t, unsigned>> factorize_u64(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  std::vector<std::pair<uint64_t, unsigned>> out;
  for (unsigned p : kSmallPrimes) {
    if (static_cast<uint64_t>(p) * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) {
    std::map<uint64_t, unsigned> rest;
    factor_u64_into(n, rest);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

uint64_t radical_u64(uint64_t n) {
  uint64_t r = 1;
  for (const auto& [p, e] : factorize_u64(n)) r *= p;
  return r;
}

Factorization factorize(const Natural& n) {
  if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization out;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    for (const auto& [p, e] : factorize_u64(mpz_get_ui(n.get_mpz_t()))) {
      out.push_back({Natural(static_cast<unsigned long>(p)), e});
    }
    return out;
  }
  Natural rest = n;
  for (unsigned p : kSmallPrimes) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= p;
      ++e;
    }
    if (e != 0) out.push_back({Natural(p), e});
  }
  std::map<Natural, unsigned> big;
  factor_big_into(rest, big);
  for (const auto& [p, e] : big) out.push_back({p, e});
  return out;
}

Natural radical(const Factorization& f) {
  Natural r = 1;
  for (const auto& pp : f) r *= pp.prime;
  return r;
}

Natural radical(const Natural& n) { return radical(factorize(n)); }

GcdQuality gcd_quality(const Natural& a, const Natural& b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("gcd_quality: arguments must be positive");
  GcdQuality q;
  mpz_gcd(q.gcd.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  q.ratio = Rational(q.gcd, radical(q.gcd));
  q.ratio.canonicalize();
  return q;
}

Root iroot(const Natural& n, unsigned k) {
  if (n <= 0) throw std::invalid_argument("iroot: n must be positive");
  if (k == 0) throw std::invalid_argument("iroot: k must be positive");
  Root r;
  r.exact = mpz_root(r.root.get_mpz_t(), n.get_mpz_t(), k) != 0;
  return r;
}

std::vector<PowerRep> perfect_power_exponents(const Natural& n) {
  if (n <= 1) throw std::invalid_argument("perfect_power_exponents: n must be >= 2");
  std::vector<PowerRep> reps;
  const auto bits = static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
  for (unsigned e = 2; e <= bits; ++e) {
    Root r = iroot(n, e);
    if (r.exact) reps.push_back({std::move(r.root), e});
  }
  return reps;
}

}  // namespace fcp

namespace fcp {

Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational out;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits(num) || !digits(den)) throw std::invalid_argument("malformed rational: " + std::string(text));
    const Natural d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    out = Rational(Natural(std::string(num)), d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if ((!whole.empty() && !digits(whole)) || !digits(frac)) {
      throw std::invalid_argument("malformed decimal: " + std::string(text));
    }
    Natural scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const Natural w = whole.empty() ? Natural(0) : Natural(std::string(whole));
    out = Rational(w * scale + Natural(std::string(frac)), scale);
  } else {
    if (!digits(body)) throw std::invalid_argument("malformed number: " + std::string(text));
    out = Rational(Natural(std::string(body)), 1);
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

}  // namespace fcp
