#pragma once

#include <memory>

#include "fcp/search.hpp"

namespace fcp::detail {

std::unique_ptr<SearchPlan> make_fermat_catalan_plan(const SearchConfig& cfg);
std::unique_ptr<SearchPlan> make_product_plan(const SearchConfig& cfg);
std::unique_ptr<SearchPlan> make_pillai_plan(const SearchConfig& cfg);

/// Exponents past this many bits never matter below kMaxSearchBits.
inline unsigned top_exponent(u128 bound, unsigned max_exp) {
  return std::min(max_exp, bit_length(bound));
}

bool weight_admitted(const Rational& weight, const SearchConfig& cfg);

}  // namespace fcp::detail
