#pragma once

// Product calculus: a value written as a multiset of positive factors, with
// its base (least factor), spread (max - min) and degree (factor count).

#include <functional>
#include <optional>
#include <vector>

#include "fcp/arith.hpp"
#include "fcp/u128.hpp"

namespace fcp {

struct ProductDecomposition {
  std::vector<Natural> factors;  // nondecreasing
  Natural base;
  Natural spread;
  unsigned degree = 0;
  Natural value;

  friend bool operator==(const ProductDecomposition&, const ProductDecomposition&) = default;
};

/// Which decompositions count. `max_spread_sq_over_base` bounds s^2/b; unset
/// means unbounded.
struct SpreadConstraints {
  std::optional<uint64_t> max_spread;
  std::optional<Rational> max_spread_sq_over_base;
  unsigned degree_min = 1;
  unsigned degree_max = 1;

  bool admits(const ProductDecomposition& p) const;
};

/// Canonical decomposition of an explicit factor list. Throws
/// std::invalid_argument on an empty list or a zero factor.
ProductDecomposition analyze(std::vector<Natural> factors);

/// Decomposition of `count` copies of `base`.
ProductDecomposition power_decomposition(const Natural& base, unsigned count);

/// Every decomposition of `value` into exactly `degree` factors whose spread
/// is at most `max_spread`, in lexicographic order of the factor lists.
std::vector<ProductDecomposition> decompose(const Natural& value, unsigned degree,
                                            uint64_t max_spread);

/// Same search on fixed-width values; factor lists stay in 128 bits.
/// Invokes `emit` with each factor list in lexicographic order; stops early
/// when `emit` returns false.
void decompose_u128(u128 value, unsigned degree, uint64_t max_spread,
                    const std::function<bool(const std::vector<u128>&)>& emit);

struct WeightTerm {
  Natural spread;
  unsigned degree = 0;
};

/// Sum of (1 + spread) / degree. Throws on a zero degree.
Rational fc_weight(const std::vector<WeightTerm>& terms);

/// (2 s^2 / b + ((s + 1) / d) ln X) - ln rad X, evaluated with 256-bit
/// floating point and an exact integer test for the s = 0 equality case.
/// Requires s + 1 < d (std::domain_error otherwise).
double spread_lemma_margin(const ProductDecomposition& p);

/// Same, with the radical supplied by the caller.
double spread_lemma_margin(const ProductDecomposition& p, const Natural& rad);

/// Streams every decomposition admitted by `constraints` with value at most
/// `max_value`. Classes are visited by degree, then base; inside a class the
/// values are nondecreasing. Stops when `visit` returns false.
void enumerate_products(const SpreadConstraints& constraints, u128 max_value,
                        const std::function<bool(const ProductDecomposition&)>& visit);

}  // namespace fcp
