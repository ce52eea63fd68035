// Compiled with -mavx2; only reached after a runtime CPU check.
#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "fcp/simd/abc_filter.hpp"

namespace fcp::simd {

void filter_avx2(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                 std::vector<uint32_t>& out) {
  // Unsigned 64-bit compares via the sign-flip trick.
  const __m256i flip = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  const __m256i c_flipped = _mm256_xor_si256(_mm256_set1_epi64x(c), flip);
  const __m256i rc = _mm256_set1_epi64x(rad[c]);

  uint32_t a = a_begin;
  for (; a + 4 <= a_end; a += 4) {
    const __m128i ra32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rad + a));
    // rad[c - a - 3 .. c - a], reversed so lane i holds rad[c - (a + i)].
    const __m128i rb32 = _mm_shuffle_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(rad + (c - a - 3))), 0x1B);
    const __m256i ra = _mm256_cvtepu32_epi64(ra32);
    const __m256i rb = _mm256_cvtepu32_epi64(rb32);

    const __m256i ab = _mm256_xor_si256(_mm256_mul_epu32(ra, rb), flip);
    const __m256i ac = _mm256_xor_si256(_mm256_mul_epu32(ra, rc), flip);
    const __m256i bc = _mm256_xor_si256(_mm256_mul_epu32(rb, rc), flip);
    const __m256i keep = _mm256_and_si256(
        _mm256_cmpgt_epi64(c_flipped, ab),
        _mm256_and_si256(_mm256_cmpgt_epi64(c_flipped, ac), _mm256_cmpgt_epi64(c_flipped, bc)));
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(keep));
    while (mask != 0) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      out.push_back(a + static_cast<uint32_t>(lane));
      mask &= mask - 1;
    }
  }
  if (a < a_end) filter_scalar(rad, c, a, a_end, out);
}

}  // namespace fcp::simd

#endif
