#include <stdexcept>
#include <string>

#include "fcp/simd/abc_filter.hpp"

namespace fcp::simd {

#if defined(__x86_64__) || defined(__i386__)
void filter_avx2(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                 std::vector<uint32_t>& out);
#endif
#if defined(__aarch64__)
void filter_neon(const uint32_t* rad, uint32_t c, uint32_t a_begin, uint32_t a_end,
                 std::vector<uint32_t>& out);
#endif

bool kernel_available(Kernel k) {
  switch (k) {
    case Kernel::scalar: return true;
    case Kernel::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Kernel::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Kernel best_kernel() {
  if (kernel_available(Kernel::avx2)) return Kernel::avx2;
  if (kernel_available(Kernel::neon)) return Kernel::neon;
  return Kernel::scalar;
}

FilterFn kernel_fn(Kernel k) {
  if (!kernel_available(k)) {
    throw std::invalid_argument(std::string("kernel not available: ") + to_string(k));
  }
  switch (k) {
#if defined(__x86_64__) || defined(__i386__)
    case Kernel::avx2: return &filter_avx2;
#endif
#if defined(__aarch64__)
    case Kernel::neon: return &filter_neon;
#endif
    default: return &filter_scalar;
  }
}

const char* to_string(Kernel k) {
  switch (k) {
    case Kernel::scalar: return "scalar";
    case Kernel::avx2: return "avx2";
    case Kernel::neon: return "neon";
  }
  return "?";
}

std::optional<Kernel> parse_kernel(std::string_view text) {
  if (text == "scalar") return Kernel::scalar;
  if (text == "avx2") return Kernel::avx2;
  if (text == "neon") return Kernel::neon;
  return std::nullopt;
}

}  // namespace fcp::simd
