#include <algorithm>
#include <tuple>

#include "fcp/search.hpp"

namespace fcp {
namespace {

// Entry header plus one heap-allocated representation, rounded up.
constexpr std::size_t kBytesPerEntry = 96;

}  // namespace

const PowerTable::Entry* PowerTable::find(u128 value) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                             [](const Entry& e, u128 v) { return e.value < v; });
  if (it == entries_.end() || it->value != value) return nullptr;
  return &*it;
}

std::size_t power_table_size_estimate(u128 bound, unsigned min_exp, unsigned max_exp) {
  std::size_t total = 0;
  const unsigned top = std::min(max_exp, bit_length(bound));
  for (unsigned e = min_exp; e <= top; ++e) {
    const u128 r = iroot(bound, e);
    if (r >= 2) total += static_cast<std::size_t>(r - 1);
  }
  return total;
}

PowerTable build_power_table(u128 bound, unsigned min_exp, unsigned max_exp,
                             std::size_t memory_budget) {
  if (bound < 4) throw std::invalid_argument("build_power_table: bound must be >= 4");
  if (min_exp < 2 || min_exp > max_exp) {
    throw std::invalid_argument("build_power_table: need 2 <= min_exp <= max_exp");
  }
  const std::size_t count = power_table_size_estimate(bound, min_exp, max_exp);
  const std::size_t required = count * kBytesPerEntry;
  if (required > memory_budget) {
    throw ResourceError("power table needs about " + std::to_string(required >> 20) +
                            " MiB for " + std::to_string(count) + " powers; budget is " +
                            std::to_string(memory_budget >> 20) + " MiB",
                        required);
  }

  std::vector<std::tuple<u128, uint64_t, unsigned>> raw;
  raw.reserve(count);
  const unsigned top = std::min(max_exp, bit_length(bound));
  for (unsigned e = min_exp; e <= top; ++e) {
    const auto last = static_cast<uint64_t>(iroot(bound, e));
    for (uint64_t x = 2; x <= last; ++x) raw.emplace_back(pow_capped(x, e, bound), x, e);
  }
  // Within a value, higher exponents come with smaller bases.
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<2>(a) < std::get<2>(b);
  });

  std::vector<PowerTable::Entry> entries;
  for (const auto& [value, base, exp] : raw) {
    if (entries.empty() || entries.back().value != value) entries.push_back({value, {}});
    entries.back().reps.push_back({base, exp});
  }
  return PowerTable(bound, min_exp, max_exp, std::move(entries));
}

}  // namespace fcp
