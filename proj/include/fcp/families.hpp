#pragma once

// Known solution catalogs and the constructive solution families.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fcp/arith.hpp"
#include "fcp/products.hpp"

namespace fcp {

enum class Sign { plus, minus };

const char* to_string(Sign s);

struct SolutionTerm {
  Natural value;
  ProductDecomposition witness;
  /// Set when the term is displayed as base^exponent.
  std::optional<PowerRep> power;
  /// The value 1 standing for 1^k with any k; its weight term is 0.
  bool wildcard_one = false;
};

/// terms[0] (+|-) terms[1] == terms[2], checked at construction.
struct KnownSolution {
  std::array<SolutionTerm, 3> terms;
  Sign sign = Sign::plus;
  std::string source;

  bool identity_holds() const;
  bool maxgcd() const;
  /// Sum of (1 + s) / d over the witnesses, wildcard ones contributing 0.
  Rational weight() const;
};

/// The ten known coprime solutions of x^n + y^m = z^k with 1/n + 1/m + 1/k < 1.
const std::vector<KnownSolution>& fermat_catalan_catalog();

/// The four non-maxgcd solutions of x^n - y^m = Z with Z of degree 3 and
/// spread 1.
const std::vector<KnownSolution>& degree3_catalog();

/// Raised by the catalog loaders if a stored entry does not re-verify.
struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StandardSolution {
  KnownSolution solution;
  bool maxgcd = false;
};

/// The parametric identity (v w^n)^n + (v w^(n-1))^n = (v w^n)^(n-1) (w^n + v)
/// only holds for v = 1 (or w^n = 1 with v = 1). Expanding the left side gives
/// v^n w^(n^2-n) (w^n + 1), so equality needs v^n (w^n + 1) = v^(n-1) (w^n + v).
struct IdentityFailure {
  Natural lhs;          // (v w^n)^n + (v w^(n-1))^n
  Natural printed_rhs;  // (v w^n)^(n-1) (w^n + v)
  std::string reason;
};

std::variant<StandardSolution, IdentityFailure> gen_standard(unsigned long v, unsigned long w,
                                                             unsigned n);

struct TrivialMaxgcd {
  KnownSolution solution;
  Rational weight;  // 1/p + 1/(p-1) + 2/p
};

/// x^p + x^(p-1) = x^(p-1) (x + 1); rejects p <= 4.
TrivialMaxgcd gen_maxgcd_trivial(unsigned long x, unsigned p);

struct CongruenceSolution {
  unsigned long alpha = 0, beta = 0, gamma = 0;

  friend bool operator==(const CongruenceSolution&, const CongruenceSolution&) = default;
};

/// Least positive alpha, beta, gamma with n | 2 + 3 m alpha, m | 2 + 3 n beta
/// and 3 | 2 + n m gamma. Requires 3 not dividing n or m and gcd(n, m) <= 2.
CongruenceSolution solve_congruences(unsigned long n, unsigned long m);

struct PythagoreanSolution {
  KnownSolution solution;
  CongruenceSolution congruences;
  /// Exponents of (a^2 - 1, 2a, a^2 + 1) in each term.
  std::array<std::array<unsigned long, 3>, 3> exponents{};
  bool non_maxgcd = false;
  Rational weight;  // 1/n + 1/m + 1/3
  bool weight_below_one = false;
};

/// Non-maxgcd solutions built from the Pythagorean triple
/// (a^2 - 1)^2 + (2a)^2 = (a^2 + 1)^2. X is an n-th power, Y an m-th power
/// and Z a cube.
PythagoreanSolution gen_pythagorean(unsigned long a, unsigned long n, unsigned long m);

struct CounterexampleFamily {
  KnownSolution solution;
  Rational naive_weight;  // 1/2 + 1/extra_degree + 1/(2 alpha)
  Rational weight;        // with the (1 + s)/d form; X contributes 3/2
  bool naive_admits = false;
};

/// (a^alpha - 1)(a^alpha + 1) + 1^m = a^(2 alpha) with X of degree 2 and
/// spread 2. `extra_degree` is the degree given to the 1 term.
CounterexampleFamily gen_counterexample_family(unsigned long a, unsigned long alpha,
                                               unsigned extra_degree);

struct StandardWitness {
  Natural v, w;
};

/// Whether x^n + y^n = Z is a member of the standard family. Rejects inputs
/// violating x >= y >= 1 or x^n + y^n == Z. With Sign::minus the test is for
/// the mirrored family (v w^n)^n - (v w^(n-1))^n = (v w^n)^(n-1) (w^n - v) and
/// the identity checked is x^n - y^n == Z.
std::optional<StandardWitness> is_standard(const Natural& x, const Natural& y, unsigned n,
                                           const Natural& z, Sign sign = Sign::plus);

}  // namespace fcp
