#include "fcp/families.hpp"

#include <algorithm>
#include <numeric>

namespace fcp {
namespace {

Natural power(const Natural& base, unsigned long exp) {
  Natural out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Natural gcd(const Natural& a, const Natural& b) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Catalog entries are kept as (base, exponent); exponent 0 marks the
// wildcard term 1.
struct StoredPower {
  unsigned long base;
  unsigned exp;
};

SolutionTerm power_term(const Natural& base, unsigned exp) {
  SolutionTerm t;
  if (exp == 0) {
    t.value = 1;
    t.witness = analyze({Natural(1)});
    t.wildcard_one = true;
    return t;
  }
  t.value = power(base, exp);
  t.witness = power_decomposition(base, exp);
  t.power = PowerRep{base, exp};
  return t;
}

SolutionTerm product_term(std::vector<Natural> factors) {
  SolutionTerm t;
  t.witness = analyze(std::move(factors));
  t.value = t.witness.value;
  return t;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw CatalogError("catalog entry failed verification: " + what);
}

}  // namespace

const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

bool KnownSolution::identity_holds() const {
  const Natural lhs = sign == Sign::plus ? Natural(terms[0].value + terms[1].value)
                                         : Natural(terms[0].value - terms[1].value);
  if (lhs != terms[2].value) return false;
  return std::all_of(terms.begin(), terms.end(),
                     [](const SolutionTerm& t) { return t.witness.value == t.value; });
}

bool KnownSolution::maxgcd() const {
  return gcd(terms[0].value, terms[1].value) == std::min(terms[0].value, terms[1].value);
}

Rational KnownSolution::weight() const {
  std::vector<WeightTerm> ws;
  for (const auto& t : terms) {
    if (!t.wildcard_one) ws.push_back({t.witness.spread, t.witness.degree});
  }
  return fc_weight(ws);
}

const std::vector<KnownSolution>& fermat_catalan_catalog() {
  static const std::vector<KnownSolution> catalog = [] {
    constexpr std::array<std::array<StoredPower, 3>, 10> stored{{
        {{{1, 0}, {2, 3}, {3, 2}}},
        {{{2, 5}, {7, 2}, {3, 4}}},
        {{{7, 3}, {13, 2}, {2, 9}}},
        {{{2, 7}, {17, 3}, {71, 2}}},
        {{{3, 5}, {11, 4}, {122, 2}}},
        {{{33, 8}, {1549034, 2}, {15613, 3}}},
        {{{1414, 3}, {2213459, 2}, {65, 7}}},
        {{{9262, 3}, {15312283, 2}, {113, 7}}},
        {{{17, 7}, {76271, 3}, {21063928, 2}}},
        {{{43, 8}, {96222, 3}, {30042907, 2}}},
    }};
    std::vector<KnownSolution> out;
    for (const auto& row : stored) {
      KnownSolution s;
      s.source = "fermat-catalan";
      for (std::size_t i = 0; i < 3; ++i) {
        s.terms[i] = power_term(Natural(row[i].base), row[i].exp);
      }
      const std::string label = s.terms[0].value.get_str() + " + " + s.terms[1].value.get_str();
      require(s.identity_holds(), label);
      require(gcd(s.terms[0].value, s.terms[1].value) == 1, label + " coprimality");
      require(s.weight() < 1, label + " weight");
      out.push_back(std::move(s));
    }
    return out;
  }();
  return catalog;
}

const std::vector<KnownSolution>& degree3_catalog() {
  static const std::vector<KnownSolution> catalog = [] {
    struct Row {
      StoredPower x, y;
      unsigned long b;
    };
    constexpr std::array<Row, 4> stored{{
        {{12, 4}, {2, 14}, 16},
        {{24, 4}, {2, 16}, 64},
        {{6, 8}, {2, 18}, 112},
        {{117, 4}, {3, 14}, 567},
    }};
    std::vector<KnownSolution> out;
    for (const auto& row : stored) {
      KnownSolution s;
      s.source = "degree3-nonmaxgcd";
      s.sign = Sign::minus;
      s.terms[0] = power_term(Natural(row.x.base), row.x.exp);
      s.terms[1] = power_term(Natural(row.y.base), row.y.exp);
      s.terms[2] = product_term({Natural(row.b), Natural(row.b), Natural(row.b + 1)});
      const std::string label = s.terms[2].value.get_str();
      require(s.identity_holds(), label);
      require(!s.maxgcd(), label + " non-maxgcd");
      require(s.weight() < 1, label + " weight");
      out.push_back(std::move(s));
    }
    return out;
  }();
  return catalog;
}

std::variant<StandardSolution, IdentityFailure> gen_standard(unsigned long v, unsigned long w,
                                                             unsigned n) {
  if (v == 0 || w == 0 || n == 0) {
    throw std::invalid_argument("gen_standard: parameters must be positive");
  }
  const Natural wn = power(Natural(w), n);
  const Natural x = Natural(v) * wn;
  const Natural y = Natural(v) * power(Natural(w), n - 1);
  const Natural big_x = power(x, n);
  const Natural big_y = power(y, n);
  const Natural printed_z = power(x, n - 1) * (wn + v);
  if (big_x + big_y != printed_z) {
    return IdentityFailure{big_x + big_y, printed_z,
                           "(v w^n)^n + (v w^(n-1))^n = v^n w^(n^2-n) (w^n + 1) differs from "
                           "(v w^n)^(n-1) (w^n + v) unless v = 1"};
  }
  StandardSolution out;
  KnownSolution& s = out.solution;
  s.source = "standard";
  s.terms[0] = power_term(x, n);
  s.terms[1] = power_term(y, n);
  std::vector<Natural> factors(n - 1, x);
  factors.push_back(wn + v);
  s.terms[2] = product_term(std::move(factors));
  out.maxgcd = s.maxgcd();
  return out;
}

TrivialMaxgcd gen_maxgcd_trivial(unsigned long x, unsigned p) {
  if (x == 0) throw std::invalid_argument("gen_maxgcd_trivial: x must be positive");
  if (p <= 4) throw std::invalid_argument("gen_maxgcd_trivial: requires p > 4");
  TrivialMaxgcd out;
  KnownSolution& s = out.solution;
  s.source = "maxgcd-trivial";
  s.terms[0] = power_term(Natural(x), p);
  s.terms[1] = power_term(Natural(x), p - 1);
  std::vector<Natural> factors(p - 1, Natural(x));
  factors.push_back(Natural(x + 1));
  s.terms[2] = product_term(std::move(factors));
  out.weight = Rational(1, p) + Rational(1, p - 1) + Rational(2, p);
  out.weight.canonicalize();
  return out;
}

CongruenceSolution solve_congruences(unsigned long n, unsigned long m) {
  if (n == 0 || m == 0) throw std::invalid_argument("solve_congruences: n, m must be positive");
  if (n % 3 == 0) throw std::invalid_argument("solve_congruences: 3 divides n");
  if (m % 3 == 0) throw std::invalid_argument("solve_congruences: 3 divides m");
  if (std::gcd(n, m) > 2) throw std::invalid_argument("solve_congruences: gcd(n, m) > 2");
  // Each congruence is periodic in its unknown with period n, m or 3.
  auto least = [](unsigned long modulus, unsigned long step, const char* label) {
    for (unsigned long t = 1; t <= modulus; ++t) {
      if ((2 + step * t) % modulus == 0) return t;
    }
    throw std::invalid_argument(std::string("solve_congruences: no solution for ") + label);
  };
  CongruenceSolution c;
  c.alpha = least(n, 3 * m, "n | 2 + 3 m alpha");
  c.beta = least(m, 3 * n, "m | 2 + 3 n beta");
  c.gamma = least(3, n * m, "3 | 2 + n m gamma");
  return c;
}

PythagoreanSolution gen_pythagorean(unsigned long a, unsigned long n, unsigned long m) {
  if (a < 2) throw std::invalid_argument("gen_pythagorean: requires a >= 2");
  PythagoreanSolution out;
  out.congruences = solve_congruences(n, m);
  const auto [alpha, beta, gamma] = out.congruences;
  const std::array<Natural, 3> bases{Natural(a) * a - 1, Natural(2 * a), Natural(a) * a + 1};
  out.exponents = {{
      {2 + 3 * m * alpha, 3 * n * beta, n * m * gamma},
      {3 * m * alpha, 2 + 3 * n * beta, n * m * gamma},
      {3 * m * alpha, 3 * n * beta, 2 + n * m * gamma},
  }};
  const std::array<unsigned long, 3> degrees{n, m, 3};
  KnownSolution& s = out.solution;
  s.source = "pythagorean";
  for (std::size_t i = 0; i < 3; ++i) {
    Natural value = 1;
    for (std::size_t j = 0; j < 3; ++j) value *= power(bases[j], out.exponents[i][j]);
    const Root r = iroot(value, static_cast<unsigned>(degrees[i]));
    if (!r.exact) {
      throw std::logic_error("gen_pythagorean: term " + std::to_string(i) +
                             " is not the expected perfect power");
    }
    s.terms[i] = power_term(r.root, static_cast<unsigned>(degrees[i]));
  }
  if (!s.identity_holds()) throw std::logic_error("gen_pythagorean: sum identity failed");
  out.non_maxgcd = !s.maxgcd();
  out.weight = s.weight();
  out.weight_below_one = out.weight < 1;
  return out;
}

CounterexampleFamily gen_counterexample_family(unsigned long a, unsigned long alpha,
                                               unsigned extra_degree) {
  if (a < 2) throw std::invalid_argument("gen_counterexample_family: requires a >= 2");
  if (alpha == 0) throw std::invalid_argument("gen_counterexample_family: requires alpha >= 1");
  if (extra_degree == 0) {
    throw std::invalid_argument("gen_counterexample_family: extra degree must be positive");
  }
  const Natural a_alpha = power(Natural(a), alpha);
  CounterexampleFamily out;
  KnownSolution& s = out.solution;
  s.source = "counterexample-family";
  s.terms[0] = product_term({a_alpha - 1, a_alpha + 1});
  s.terms[1].value = 1;
  s.terms[1].witness = power_decomposition(Natural(1), extra_degree);
  s.terms[1].power = PowerRep{Natural(1), extra_degree};
  s.terms[2] = power_term(Natural(a), static_cast<unsigned>(2 * alpha));
  if (!s.identity_holds()) throw std::logic_error("gen_counterexample_family: identity failed");
  out.naive_weight = Rational(1, 2) + Rational(1, extra_degree) + Rational(1, 2 * alpha);
  out.naive_weight.canonicalize();
  out.weight = s.weight();
  out.naive_admits = out.naive_weight < 1;
  return out;
}

std::optional<StandardWitness> is_standard(const Natural& x, const Natural& y, unsigned n,
                                           const Natural& z, Sign sign) {
  if (y < 1 || x < y) throw std::invalid_argument("is_standard: requires x >= y >= 1");
  if (n == 0) throw std::invalid_argument("is_standard: requires n >= 1");
  const Natural lhs = sign == Sign::plus ? Natural(power(x, n) + power(y, n))
                                         : Natural(power(x, n) - power(y, n));
  if (lhs != z) throw std::invalid_argument("is_standard: x^n +- y^n != Z");
  if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t())) return std::nullopt;
  const Natural w = x / y;
  const Natural w_pow = power(w, n - 1);
  if (!mpz_divisible_p(y.get_mpz_t(), w_pow.get_mpz_t())) return std::nullopt;
  const Natural v = y / w_pow;
  const Natural wn = w_pow * w;
  if (x != v * wn || y != v * w_pow) return std::nullopt;
  const Natural tail = sign == Sign::plus ? Natural(wn + v) : Natural(wn - v);
  if (power(v * wn, n - 1) * tail != z) return std::nullopt;
  return StandardWitness{v, w};
}

}  // namespace fcp
