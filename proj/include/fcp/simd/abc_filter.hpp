#pragma once

// Candidate filter for the abc scan. For a fixed c with radical rc and a in
// [a_begin, a_end), with ra = rad[a] and rb = rad[c - a], keeps the a for
// which max(ra rb, ra rc, rb rc) < c. A triple can only violate the 7/8
// bound (or have quality above 1) when it passes this filter.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace fcp::simd {

enum class Kernel { scalar, avx2, neon };

using FilterFn = void (*)(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                          std::vector<uint32_t>& out);

void filter_scalar(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                   std::vector<uint32_t>& out);

/// Whether the CPU and the build both support the kernel.
bool kernel_available(Kernel k);

/// Widest available kernel.
Kernel best_kernel();

/// Throws std::invalid_argument for an unavailable kernel.
FilterFn kernel_fn(Kernel k);

const char* to_string(Kernel k);
std::optional<Kernel> parse_kernel(std::string_view text);

}  // namespace fcp::simd
