#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fcp/families.hpp"

using fcp::Natural;
using fcp::Rational;

namespace {

Natural pw(unsigned long b, unsigned long e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

bool has_triple(const std::vector<fcp::KnownSolution>& cat, const Natural& x, const Natural& y,
                const Natural& z) {
  return std::any_of(cat.begin(), cat.end(), [&](const fcp::KnownSolution& s) {
    return s.terms[0].value == x && s.terms[1].value == y && s.terms[2].value == z;
  });
}

std::vector<unsigned long> ul(const std::vector<Natural>& v) {
  std::vector<unsigned long> out;
  for (const auto& x : v) out.push_back(x.get_ui());
  return out;
}

}  // namespace

TEST_CASE("fermat-catalan catalog") {
  const auto& cat = fcp::fermat_catalan_catalog();
  REQUIRE(cat.size() == 10);
  CHECK(has_triple(cat, 1, 8, 9));
  CHECK(has_triple(cat, pw(2, 5), pw(7, 2), pw(3, 4)));
  CHECK(has_triple(cat, pw(7, 3), pw(13, 2), pw(2, 9)));
  CHECK(has_triple(cat, pw(2, 7), pw(17, 3), pw(71, 2)));
  CHECK(has_triple(cat, pw(3, 5), pw(11, 4), pw(122, 2)));
  CHECK(has_triple(cat, pw(33, 8), pw(1549034, 2), pw(15613, 3)));
  CHECK(has_triple(cat, pw(1414, 3), pw(2213459, 2), pw(65, 7)));
  CHECK(has_triple(cat, pw(9262, 3), pw(15312283, 2), pw(113, 7)));
  CHECK(has_triple(cat, pw(17, 7), pw(76271, 3), pw(21063928, 2)));
  CHECK(has_triple(cat, pw(43, 8), pw(96222, 3), pw(30042907, 2)));
  for (const auto& s : cat) {
    CHECK(s.identity_holds());
    CHECK(s.sign == fcp::Sign::plus);
    CHECK(s.weight() < 1);
    Natural g;
    mpz_gcd(g.get_mpz_t(), s.terms[0].value.get_mpz_t(), s.terms[1].value.get_mpz_t());
    CHECK(g == 1);
    for (const auto& t : s.terms) CHECK(t.witness.value == t.value);
  }
  // The largest weight below 1 among reciprocal sums.
  CHECK(std::max_element(cat.begin(), cat.end(), [](const auto& a, const auto& b) {
          return a.weight() < b.weight();
        })->weight() == Rational(41, 42));
}

TEST_CASE("degree-3 catalog") {
  const auto& cat = fcp::degree3_catalog();
  REQUIRE(cat.size() == 4);
  const std::vector<std::tuple<Natural, Natural, std::vector<unsigned long>>> want{
      {pw(12, 4), pw(2, 14), {16, 16, 17}},
      {pw(24, 4), pw(2, 16), {64, 64, 65}},
      {pw(6, 8), pw(2, 18), {112, 112, 113}},
      {pw(117, 4), pw(3, 14), {567, 567, 568}}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& s = cat[i];
    CHECK(s.sign == fcp::Sign::minus);
    CHECK(s.terms[0].value == std::get<0>(want[i]));
    CHECK(s.terms[1].value == std::get<1>(want[i]));
    CHECK(ul(s.terms[2].witness.factors) == std::get<2>(want[i]));
    CHECK(s.identity_holds());
    CHECK_FALSE(s.maxgcd());
    CHECK(s.terms[0].value < Natural(1) << 28);
  }
  // 117^4 is often quoted as below 2^27; it is not.
  CHECK(pw(117, 4) > Natural(1) << 27);
  CHECK(cat[0].weight() == Rational(83, 84));
}

TEST_CASE("gen_standard") {
  auto out = fcp::gen_standard(1, 2, 3);
  REQUIRE(std::holds_alternative<fcp::StandardSolution>(out));
  auto s = std::get<fcp::StandardSolution>(out);
  CHECK(s.solution.terms[0].value == 512);
  CHECK(s.solution.terms[1].value == 64);
  CHECK(s.solution.terms[2].value == 576);
  CHECK(ul(s.solution.terms[2].witness.factors) == std::vector<unsigned long>{8, 8, 9});
  CHECK(s.maxgcd);

  out = fcp::gen_standard(1, 1, 5);
  REQUIRE(std::holds_alternative<fcp::StandardSolution>(out));
  CHECK(ul(std::get<fcp::StandardSolution>(out).solution.terms[2].witness.factors) ==
        std::vector<unsigned long>{1, 1, 1, 1, 2});

  out = fcp::gen_standard(2, 1, 3);
  REQUIRE(std::holds_alternative<fcp::IdentityFailure>(out));
  const auto& f = std::get<fcp::IdentityFailure>(out);
  CHECK(f.lhs == 16);
  CHECK(f.printed_rhs == 12);
  CHECK_FALSE(f.reason.empty());

  CHECK_THROWS(fcp::gen_standard(0, 1, 3));
}

TEST_CASE("gen_standard: the printed identity holds exactly when v = 1") {
  for (unsigned long v = 1; v <= 6; ++v) {
    for (unsigned long w = 1; w <= 6; ++w) {
      for (unsigned n = 1; n <= 6; ++n) {
        const Natural x = v * pw(w, n), y = v * pw(w, n - 1);
        Natural xn, yn, xn1;
        mpz_pow_ui(xn.get_mpz_t(), x.get_mpz_t(), n);
        mpz_pow_ui(yn.get_mpz_t(), y.get_mpz_t(), n);
        mpz_pow_ui(xn1.get_mpz_t(), x.get_mpz_t(), n - 1);
        const bool holds = xn + yn == xn1 * (pw(w, n) + v);
        CHECK(holds == (v == 1));
        const auto out = fcp::gen_standard(v, w, n);
        CHECK(std::holds_alternative<fcp::StandardSolution>(out) == holds);
        if (!holds) {
          CHECK(std::get<fcp::IdentityFailure>(out).lhs == xn + yn);
          CHECK(std::get<fcp::IdentityFailure>(out).printed_rhs == xn1 * (pw(w, n) + v));
        }
      }
    }
  }
}

TEST_CASE("gen_standard v = 1 gives spread <= 1 and is recognised as standard") {
  for (unsigned long w = 1; w <= 8; ++w) {
    for (unsigned n = 1; n <= 8; ++n) {
      const auto out = fcp::gen_standard(1, w, n);
      REQUIRE(std::holds_alternative<fcp::StandardSolution>(out));
      const auto& s = std::get<fcp::StandardSolution>(out).solution;
      CHECK(s.identity_holds());
      CHECK(s.terms[2].witness.degree == n);
      CHECK(s.terms[2].witness.spread <= 1);
      const Natural x = pw(w, n), y = pw(w, n - 1);
      const auto witness = fcp::is_standard(x, y, n, s.terms[2].value);
      REQUIRE(witness.has_value());
      CHECK(witness->v == 1);
      CHECK(witness->w == w);
    }
  }
}

TEST_CASE("gen_maxgcd_trivial") {
  auto t = fcp::gen_maxgcd_trivial(2, 5);
  CHECK(t.solution.terms[0].value == 32);
  CHECK(t.solution.terms[1].value == 16);
  CHECK(t.solution.terms[2].value == 48);
  CHECK(ul(t.solution.terms[2].witness.factors) == std::vector<unsigned long>{2, 2, 2, 2, 3});
  CHECK(t.solution.maxgcd());
  CHECK(t.weight == Rational(1, 5) + Rational(1, 4) + Rational(2, 5));
  t = fcp::gen_maxgcd_trivial(1, 5);
  CHECK(ul(t.solution.terms[2].witness.factors) == std::vector<unsigned long>{1, 1, 1, 1, 2});
  t = fcp::gen_maxgcd_trivial(3, 6);
  CHECK(t.solution.terms[2].value == 972);
  CHECK(ul(t.solution.terms[2].witness.factors) == std::vector<unsigned long>{3, 3, 3, 3, 3, 4});
  CHECK_THROWS(fcp::gen_maxgcd_trivial(2, 4));
}

TEST_CASE("solve_congruences") {
  CHECK(fcp::solve_congruences(5, 7) == fcp::CongruenceSolution{3, 5, 2});
  CHECK(fcp::solve_congruences(7, 5) == fcp::CongruenceSolution{5, 3, 2});
  CHECK(fcp::solve_congruences(1, 1) == fcp::CongruenceSolution{1, 1, 1});
  CHECK_THROWS(fcp::solve_congruences(3, 5));
  CHECK_THROWS(fcp::solve_congruences(4, 8));
  // Brute-force minimality.
  for (unsigned long n = 1; n <= 20; ++n) {
    for (unsigned long m = 1; m <= 20; ++m) {
      if (n % 3 == 0 || m % 3 == 0 || std::gcd(n, m) > 2) continue;
      const auto c = fcp::solve_congruences(n, m);
      auto least = [](auto ok) {
        unsigned long k = 1;
        while (!ok(k)) ++k;
        return k;
      };
      CHECK(c.alpha == least([&](unsigned long a) { return (2 + 3 * m * a) % n == 0; }));
      CHECK(c.beta == least([&](unsigned long b) { return (2 + 3 * n * b) % m == 0; }));
      CHECK(c.gamma == least([&](unsigned long g) { return (2 + n * m * g) % 3 == 0; }));
    }
  }
}

TEST_CASE("gen_pythagorean") {
  const auto p = fcp::gen_pythagorean(2, 5, 7);
  CHECK(p.exponents[0] == std::array<unsigned long, 3>{65, 75, 70});
  CHECK(p.exponents[1] == std::array<unsigned long, 3>{63, 77, 70});
  CHECK(p.exponents[2] == std::array<unsigned long, 3>{63, 75, 72});
  CHECK(p.solution.terms[0].value == pw(3, 65) * pw(4, 75) * pw(5, 70));
  CHECK(p.solution.identity_holds());
  CHECK(p.non_maxgcd);
  CHECK(p.weight == Rational(1, 5) + Rational(1, 7) + Rational(1, 3));
  CHECK(p.weight_below_one);
  CHECK_THROWS(fcp::gen_pythagorean(1, 5, 7));
  CHECK_THROWS(fcp::gen_pythagorean(2, 3, 5));
}

TEST_CASE("gen_pythagorean random outputs") {
  std::mt19937_64 rng(100);
  int made = 0;
  while (made < 100) {
    const unsigned long a = 2 + rng() % 30, n = 1 + rng() % 25, m = 1 + rng() % 25;
    if (n % 3 == 0 || m % 3 == 0 || std::gcd(n, m) > 2) continue;
    const auto p = fcp::gen_pythagorean(a, n, m);
    ++made;
    const auto& t = p.solution.terms;
    CHECK(t[0].value + t[1].value == t[2].value);
    const std::array<unsigned long, 3> ks{n, m, 3};
    for (std::size_t i = 0; i < 3; ++i) {
      Natural r;
      CHECK(mpz_root(r.get_mpz_t(), t[i].value.get_mpz_t(), ks[i]) != 0);
    }
    Natural g;
    mpz_gcd(g.get_mpz_t(), t[0].value.get_mpz_t(), t[1].value.get_mpz_t());
    CHECK(g != std::min(t[0].value, t[1].value));
    CHECK(p.non_maxgcd);
    const Rational w = Rational(1, n) + Rational(1, m) + Rational(1, 3);
    CHECK(p.weight == w);
    CHECK(p.weight_below_one == (w < 1));
  }
}

TEST_CASE("gen_counterexample_family") {
  auto c = fcp::gen_counterexample_family(2, 2, 5);
  CHECK(ul(c.solution.terms[0].witness.factors) == std::vector<unsigned long>{3, 5});
  CHECK(c.solution.terms[1].value == 1);
  CHECK(c.solution.terms[2].value == 16);
  CHECK(c.solution.identity_holds());
  CHECK(c.naive_admits);
  CHECK(c.weight >= Rational(3, 2));
  c = fcp::gen_counterexample_family(2, 1, 5);
  CHECK(c.solution.terms[0].value == 3);
  CHECK(c.solution.terms[2].value == 4);
  c = fcp::gen_counterexample_family(3, 1, 5);
  CHECK(c.solution.terms[0].value == 8);
  CHECK(c.solution.terms[2].value == 9);
  CHECK_THROWS(fcp::gen_counterexample_family(1, 1, 5));
}

TEST_CASE("is_standard") {
  auto w = fcp::is_standard(8, 4, 3, 576);
  REQUIRE(w.has_value());
  CHECK(w->v == 1);
  CHECK(w->w == 2);
  w = fcp::is_standard(32, 16, 5, 34603008);
  REQUIRE(w.has_value());
  CHECK(w->v == 1);
  CHECK(w->w == 2);
  CHECK_FALSE(fcp::is_standard(3, 2, 5, 275).has_value());
  CHECK_THROWS(fcp::is_standard(3, 2, 5, 276));
  CHECK_THROWS(fcp::is_standard(2, 3, 5, 275));
  // The mirrored family for x^n - y^n.
  w = fcp::is_standard(32, 16, 5, pw(32, 5) - pw(16, 5), fcp::Sign::minus);
  REQUIRE(w.has_value());
  CHECK(w->w == 2);
}
