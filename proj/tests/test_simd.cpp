#include <random>

#include "doctest.h"
#include "fcp/abc.hpp"
#include "fcp/simd/abc_filter.hpp"

using fcp::simd::Kernel;

namespace {

// max(ra rb, ra rc, rb rc) < c, straight from the definition.
std::vector<uint32_t> reference(const std::vector<uint32_t>& rad, uint32_t c, uint32_t lo, uint32_t hi) {
  std::vector<uint32_t> out;
  const uint64_t rc = rad[c];
  for (uint32_t a = lo; a < hi; ++a) {
    const uint64_t ra = rad[a], rb = rad[c - a];
    const auto m = std::max({static_cast<unsigned __int128>(ra) * rb,
                             static_cast<unsigned __int128>(ra) * rc,
                             static_cast<unsigned __int128>(rb) * rc});
    if (m < c) out.push_back(a);
  }
  return out;
}

std::vector<Kernel> kernels() {
  std::vector<Kernel> out;
  for (Kernel k : {Kernel::scalar, Kernel::avx2, Kernel::neon}) {
    if (fcp::simd::kernel_available(k)) out.push_back(k);
  }
  return out;
}

}  // namespace

TEST_CASE("kernel selection") {
  CHECK(fcp::simd::kernel_available(Kernel::scalar));
  CHECK(fcp::simd::kernel_available(fcp::simd::best_kernel()));
  CHECK(fcp::simd::parse_kernel("scalar") == Kernel::scalar);
  CHECK(fcp::simd::parse_kernel("avx2") == Kernel::avx2);
  CHECK_FALSE(fcp::simd::parse_kernel("sse9").has_value());
  for (Kernel k : {Kernel::avx2, Kernel::neon}) {
    if (!fcp::simd::kernel_available(k)) CHECK_THROWS_AS(fcp::simd::kernel_fn(k), std::invalid_argument);
  }
  MESSAGE("best kernel: " << std::string(fcp::simd::to_string(fcp::simd::best_kernel())));
}

TEST_CASE("every kernel matches the definition on a real radical table") {
  const auto rad = fcp::radical_sieve(200000, std::size_t{1} << 30);
  std::mt19937_64 rng(12);
  for (Kernel k : kernels()) {
    CAPTURE(std::string(fcp::simd::to_string(k)));
    const auto fn = fcp::simd::kernel_fn(k);
    for (int i = 0; i < 3000; ++i) {
      const auto c = static_cast<uint32_t>(3 + rng() % 199998);
      // Ranges of every length 0..40 exercise the vector tails.
      const uint32_t lo = 1 + static_cast<uint32_t>(rng() % (c / 2));
      const uint32_t len = i % 3 == 0 ? static_cast<uint32_t>(rng() % 41) : c / 2 + 1 - lo;
      const uint32_t hi = std::min(c / 2 + 1, lo + len);
      std::vector<uint32_t> got;
      fn(rad.data(), c, lo, hi, got);
      REQUIRE(got == reference(rad, c, lo, hi));
    }
  }
}

TEST_CASE("kernels agree on adversarial radical values") {
  // Products near 2^32 and 2^64 check that no lane overflows.
  const uint32_t n = 4096;
  std::vector<uint32_t> rad(n + 1);
  std::mt19937_64 rng(13);
  const std::vector<uint32_t> edge{1, 2, 3, 0xFFFF, 0x10000, 0x10001, 0x7FFFFFFF, 0x80000000u,
                                   0xFFFFFFFEu, 0xFFFFFFFFu};
  for (int round = 0; round < 200; ++round) {
    for (auto& r : rad) r = rng() % 2 ? edge[rng() % edge.size()] : static_cast<uint32_t>(rng());
    const auto c = static_cast<uint32_t>(n - rng() % 100);
    rad[c] = round % 2 ? 1 : edge[round % edge.size()];
    for (Kernel k : kernels()) {
      std::vector<uint32_t> got;
      fcp::simd::kernel_fn(k)(rad.data(), c, 1, c / 2 + 1, got);
      REQUIRE(got == reference(rad, c, 1, c / 2 + 1));
    }
  }
  // With every radical 1 each a passes.
  std::fill(rad.begin(), rad.end(), 1);
  for (Kernel k : kernels()) {
    std::vector<uint32_t> got;
    fcp::simd::kernel_fn(k)(rad.data(), 1000, 1, 501, got);
    CHECK(got.size() == 500);
  }
}
