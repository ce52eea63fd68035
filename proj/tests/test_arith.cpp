#include <algorithm>
#include <random>

#include "doctest.h"
#include "fcp/arith.hpp"
#include "fcp/u128.hpp"
#include "oracles.hpp"

using fcp::Natural;
using fcp::Rational;

namespace {

Natural pow2(unsigned e) {
  Natural r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
  return r;
}

Natural recompose(const fcp::Factorization& f) {
  Natural r = 1;
  for (const auto& pp : f) {
    Natural t;
    mpz_pow_ui(t.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    r *= t;
  }
  return r;
}

}  // namespace

TEST_CASE("factorize small values") {
  const auto f = fcp::factorize(720);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == fcp::PrimePower{2, 4});
  CHECK(f[1] == fcp::PrimePower{3, 2});
  CHECK(f[2] == fcp::PrimePower{5, 1});
  CHECK(fcp::factorize(1).empty());
  CHECK_THROWS_AS(fcp::factorize(0), std::invalid_argument);

  const Natural m61 = pow2(61) - 1;
  const auto p = fcp::factorize(m61);
  REQUIRE(p.size() == 1);
  CHECK(p[0].prime == m61);
  CHECK(p[0].exponent == 1);
}

TEST_CASE("factorize agrees with trial division") {
  for (uint64_t n = 1; n <= 20000; ++n) {
    const auto f = fcp::factorize(Natural(static_cast<unsigned long>(n)));
    const auto o = oracle::factor(n);
    REQUIRE(f.size() == o.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(f[i].prime == Natural(static_cast<unsigned long>(o[i].first)));
      CHECK(f[i].exponent == o[i].second);
    }
  }
}

TEST_CASE("factorize recomposes for random values up to 2^96") {
  std::mt19937_64 rng(96);
  for (int i = 0; i < 100000; ++i) {
    const unsigned bits = 2 + static_cast<unsigned>(rng() % 95);
    Natural n = Natural(static_cast<unsigned long>(rng())) * pow2(32) +
                Natural(static_cast<unsigned long>(rng() >> 32));
    mpz_fdiv_r_2exp(n.get_mpz_t(), n.get_mpz_t(), bits);
    if (n == 0) n = 1;
    const auto f = fcp::factorize(n);
    REQUIRE(recompose(f) == n);
    for (std::size_t k = 0; k < f.size(); ++k) {
      CHECK(fcp::is_prime(f[k].prime));
      if (k) CHECK(f[k - 1].prime < f[k].prime);
    }
  }
}

TEST_CASE("factorize semiprimes with large factors") {
  const Natural p("1000000007"), q("998244353"), r("18446744073709551557");
  auto f = fcp::factorize(p * q);
  REQUIRE(f.size() == 2);
  CHECK(f[0].prime == q);
  CHECK(f[1].prime == p);
  f = fcp::factorize(p * p * r);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == fcp::PrimePower{p, 2});
  CHECK(f[1] == fcp::PrimePower{r, 1});
  // 2^96 + 1 = 641 * 6700417 * ...
  const Natural big = pow2(96) + 1;
  CHECK(recompose(fcp::factorize(big)) == big);
}

TEST_CASE("radical") {
  CHECK(fcp::radical(720) == 30);
  CHECK(fcp::radical(1) == 1);
  CHECK(fcp::radical(6436341) == 327);
  CHECK_THROWS(fcp::radical(Natural(0)));
}

TEST_CASE("radical properties up to 10^6") {
  std::mt19937_64 rng(7);
  for (uint64_t n = 2; n <= 1000000; ++n) {
    const uint64_t r = fcp::radical_u64(n);
    REQUIRE(n % r == 0);
    REQUIRE(fcp::radical_u64(r) == r);
    if (n % 997 == 0) CHECK(Natural(static_cast<unsigned long>(r)) == fcp::radical(Natural(static_cast<unsigned long>(n))));
  }
  for (int i = 0; i < 20000; ++i) {
    const uint64_t a = 1 + rng() % 1000000, b = 1 + rng() % 1000000;
    if (std::gcd(a, b) != 1) continue;
    CHECK(fcp::radical_u64(a * b) == fcp::radical_u64(a) * fcp::radical_u64(b));
  }
  for (uint64_t n = 1; n <= 5000; ++n) CHECK(fcp::radical_u64(n) == oracle::radical(n));
}

TEST_CASE("gcd_quality") {
  auto q = fcp::gcd_quality(12, 18);
  CHECK(q.gcd == 6);
  CHECK(q.ratio == 1);
  q = fcp::gcd_quality(16, 24);
  CHECK(q.gcd == 8);
  CHECK(q.ratio == 4);
  q = fcp::gcd_quality(7, 13);
  CHECK(q.gcd == 1);
  CHECK(q.ratio == 1);
}

TEST_CASE("iroot") {
  auto r = fcp::iroot(Natural(16384), 2);
  CHECK(r.root == 128);
  CHECK(r.exact);
  r = fcp::iroot(Natural(17), 4);
  CHECK(r.root == 2);
  CHECK_FALSE(r.exact);
  r = fcp::iroot(pow2(80), 5);
  CHECK(r.root == 65536);
  CHECK(r.exact);
  CHECK_THROWS(fcp::iroot(Natural(0), 2));
  CHECK_THROWS(fcp::iroot(Natural(5), 0));
}

TEST_CASE("iroot bracket property") {
  for (unsigned long n = 2; n <= 1000000; n += (n < 5000 ? 1 : 97)) {
    for (unsigned k = 2; k <= 20; ++k) {
      const auto r = fcp::iroot(Natural(n), k);
      Natural lo, hi;
      mpz_pow_ui(lo.get_mpz_t(), r.root.get_mpz_t(), k);
      const Natural next = r.root + 1;
      mpz_pow_ui(hi.get_mpz_t(), next.get_mpz_t(), k);
      REQUIRE(lo <= n);
      REQUIRE(hi > n);
      CHECK(r.exact == (lo == n));
    }
  }
}

TEST_CASE("perfect_power_exponents") {
  auto p = fcp::perfect_power_exponents(64);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == fcp::PowerRep{8, 2});
  CHECK(p[1] == fcp::PowerRep{4, 3});
  CHECK(p[2] == fcp::PowerRep{2, 6});
  p = fcp::perfect_power_exponents(512);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == fcp::PowerRep{8, 3});
  CHECK(p[1] == fcp::PowerRep{2, 9});
  CHECK(fcp::perfect_power_exponents(30).empty());
  CHECK_THROWS(fcp::perfect_power_exponents(1));
  CHECK_THROWS(fcp::perfect_power_exponents(0));
}

TEST_CASE("perfect_power_exponents agrees with a base^exp table up to 10^6") {
  constexpr uint64_t kMax = 1000000;
  std::vector<std::vector<unsigned>> table(kMax + 1);
  for (uint64_t b = 2; b * b <= kMax; ++b) {
    uint64_t v = b * b;
    for (unsigned e = 2; v <= kMax; ++e, v *= b) table[v].push_back(e);
  }
  for (auto& row : table) std::sort(row.begin(), row.end());
  for (uint64_t n = 2; n <= kMax; ++n) {
    const auto got = fcp::perfect_power_exponents(Natural(static_cast<unsigned long>(n)));
    REQUIRE(got.size() == table[n].size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].exponent == table[n][i]);
  }
}

TEST_CASE("is_prime") {
  CHECK(fcp::is_prime(113));
  CHECK_FALSE(fcp::is_prime(1));
  CHECK_FALSE(fcp::is_prime(0));
  CHECK(fcp::is_prime(pow2(61) - 1));
  CHECK(fcp::is_prime(pow2(127) - 1));
  CHECK_FALSE(fcp::is_prime(pow2(67) - 1));  // 193707721 * 761838257287
  for (unsigned long c : {561ul, 1105ul, 2047ul, 3215031751ul, 3825123056546413051ul}) {
    CHECK_FALSE(fcp::is_prime(Natural(c)));
  }
  for (uint64_t n = 0; n < 100000; ++n) {
    REQUIRE(fcp::is_prime_u64(n) == oracle::is_prime(n));
  }
}

TEST_CASE("parse_rational") {
  CHECK(fcp::parse_rational("9/10") == Rational(9, 10));
  CHECK(fcp::parse_rational("0.9") == Rational(9, 10));
  CHECK(fcp::parse_rational("41/42") == Rational(41, 42));
  CHECK(fcp::parse_rational("3") == 3);
  CHECK_THROWS(fcp::parse_rational("x"));
  CHECK_THROWS(fcp::parse_rational("1/0"));
  CHECK_THROWS(fcp::parse_rational(""));
}

TEST_CASE("u128 helpers") {
  using fcp::u128;
  CHECK(fcp::to_string(fcp::kU128Max) == "340282366920938463463374607431768211455");
  CHECK(fcp::parse_u128("340282366920938463463374607431768211455") == fcp::kU128Max);
  CHECK_THROWS_AS(fcp::parse_u128("340282366920938463463374607431768211456"), std::out_of_range);
  CHECK_THROWS_AS(fcp::parse_u128("12a"), std::invalid_argument);
  CHECK(fcp::iroot(fcp::kU128Max, 2) == (u128{1} << 64) - 1);
  CHECK(fcp::iroot(u128{1} << 120, 3) == u128{1} << 40);
  CHECK(fcp::iroot((u128{1} << 120) - 1, 3) == (u128{1} << 40) - 1);
  CHECK(fcp::pow_capped(3, 200, u128{1} << 100) > (u128{1} << 100));
  CHECK(fcp::pow_capped(2, 100, fcp::kU128Max) == u128{1} << 100);
  u128 root = 0;
  CHECK(fcp::is_square(u128{1} << 100, &root));
  CHECK(root == u128{1} << 50);
  CHECK_FALSE(fcp::is_square((u128{1} << 100) + 1));
  CHECK(fcp::bit_length(0) == 0);
  CHECK(fcp::bit_length(u128{1} << 127) == 128);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const u128 v = (u128{rng()} << 64) | rng();
    const unsigned k = 2 + static_cast<unsigned>(rng() % 20);
    const auto r = fcp::iroot(fcp::to_natural(v), k);
    CHECK(fcp::to_natural(fcp::iroot(v, k)) == r.root);
  }
}
