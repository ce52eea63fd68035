#if defined(__aarch64__)

#include <arm_neon.h>

#include "fcp/simd/abc_filter.hpp"

namespace fcp::simd {

void filter_neon(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                 std::vector<uint32_t>& out) {
  const uint64x2_t cv = vdupq_n_u64(c);
  const uint32x2_t rc = vdup_n_u32(rad[c]);

  uint32_t a = a_begin;
  for (; a + 2 <= a_end; a += 2) {
    const uint32x2_t ra = vld1_u32(rad + a);
    // rad[c - a - 1], rad[c - a], swapped so lane i holds rad[c - (a + i)].
    const uint32x2_t rb = vrev64_u32(vld1_u32(rad + (c - a - 1)));
    const uint64x2_t keep = vandq_u64(
        vcltq_u64(vmull_u32(ra, rb), cv),
        vandq_u64(vcltq_u64(vmull_u32(ra, rc), cv), vcltq_u64(vmull_u32(rb, rc), cv)));
    if (vgetq_lane_u64(keep, 0) != 0) out.push_back(a);
    if (vgetq_lane_u64(keep, 1) != 0) out.push_back(a + 1);
  }
  if (a < a_end) filter_scalar(rad, c, a, a_end, out);
}

}  // namespace fcp::simd

#endif
