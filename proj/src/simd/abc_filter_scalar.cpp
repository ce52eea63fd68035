#include "fcp/simd/abc_filter.hpp"

namespace fcp::simd {

void filter_scalar(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                   std::vector<uint32_t>& out) {
  const uint64_t rc = rad[c];
  for (uint32_t a = a_begin; a < a_end; ++a) {
    const uint64_t ra = rad[a], rb = rad[c - a];
    if (ra * rb < c && ra * rc < c && rb * rc < c) out.push_back(a);
  }
}

}  // namespace fcp::simd
