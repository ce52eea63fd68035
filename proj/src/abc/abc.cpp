#include "fcp/abc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "../common/mpfr_value.hpp"
#include "fcp/u128.hpp"

namespace fcp {
namespace {

using detail::MpfrValue;

constexpr mpfr_prec_t kPrecision = 256;

Natural gcd_of(const Natural& a, const Natural& b) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Natural lcm_of(const Natural& a, const Natural& b) {
  Natural l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Natural pow_of(const Natural& base, unsigned long e) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// -1 when c < C r^(1+eps) for certain, +1 when c > it for certain, else 0.
int compare_classic(const Natural& c, const Natural& rad, const Rational& epsilon,
                    const Rational& constant) {
  auto bound = [&](mpfr_rnd_t rnd, MpfrValue& out) {
    MpfrValue e(kPrecision), r(kPrecision), k(kPrecision);
    e.set(Rational(epsilon + 1), rnd);
    r.set(rad, rnd);
    k.set(constant, rnd);
    mpfr_pow(out.get(), r.get(), e.get(), rnd);
    mpfr_mul(out.get(), out.get(), k.get(), rnd);
  };
  MpfrValue lo(kPrecision), hi(kPrecision), cv(kPrecision);
  // rad >= 1, so the power grows with the exponent and both ends stay ordered.
  bound(MPFR_RNDD, lo);
  bound(MPFR_RNDU, hi);
  cv.set(c);
  if (mpfr_less_p(cv.get(), lo.get())) return -1;
  if (mpfr_greater_p(cv.get(), hi.get())) return 1;
  return 0;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

// c^8 < max_rad^8 rad^7.
bool mine_holds(const Natural& c, const Natural& max_rad, const Natural& rad_abc) {
  return pow_of(c, 8) < pow_of(max_rad, 8) * pow_of(rad_abc, 7);
}

}  // namespace

AbcTriple make_triple(const Natural& a, const Natural& b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("triple terms must be positive");
  const Natural g = gcd_of(a, b);
  if (g != 1) throw std::invalid_argument("gcd(a, b) = " + g.get_str() + ", not coprime");
  AbcTriple t;
  t.a = a < b ? a : b;
  t.b = a < b ? b : a;
  t.c = a + b;
  return t;
}

TripleParseResult parse_triples(std::istream& in, TripleFormat format) {
  TripleParseResult result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    auto fail = [&](const std::string& msg) { result.errors.push_back({number, msg}); };

    const bool two_ok = format != TripleFormat::three_column;
    const bool three_ok = format != TripleFormat::two_column;
    if (!((tokens.size() == 2 && two_ok) || (tokens.size() == 3 && three_ok))) {
      fail("expected " + std::string(two_ok && three_ok ? "2 or 3" : (two_ok ? "2" : "3")) +
           " fields, got " + std::to_string(tokens.size()));
      continue;
    }
    if (!std::all_of(tokens.begin(), tokens.end(), all_digits)) {
      fail("fields must be base-10 digit strings");
      continue;
    }
    const Natural a(tokens[0]), b(tokens[1]);
    if (a == 0 || b == 0) {
      fail("triple terms must be positive");
      continue;
    }
    if (tokens.size() == 3 && Natural(tokens[2]) != a + b) {
      fail("a + b != c");
      continue;
    }
    try {
      AbcTriple t = make_triple(a, b);
      t.line = number;
      result.triples.push_back(std::move(t));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return result;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::borderline: return "borderline";
  }
  return "?";
}

AbcReport check_mine(const AbcTriple& t) {
  AbcReport r;
  r.triple = t;
  r.rad_a = radical(t.a);
  r.rad_b = radical(t.b);
  r.rad_c = radical(t.c);
  r.rad_ab = r.rad_a * r.rad_b;
  r.rad_ac = r.rad_a * r.rad_c;
  r.rad_bc = r.rad_b * r.rad_c;
  r.rad_abc = lcm_of(lcm_of(r.rad_a, r.rad_b), r.rad_c);
  if (r.rad_abc != r.rad_a * r.rad_b * r.rad_c) {
    throw std::logic_error("radicals of a, b, c share a prime; triple is not coprime");
  }
  r.max_rad = std::max({r.rad_ab, r.rad_ac, r.rad_bc});
  r.mine_pass = mine_holds(t.c, r.max_rad, r.rad_abc);
  if (t.c >= 2) r.quality = quality(t);
  return r;
}

Verdict check_classic(const Natural& c, const Natural& rad_abc, const Rational& epsilon,
                      const Rational& constant) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (constant <= 0) throw std::invalid_argument("C must be positive");
  switch (compare_classic(c, rad_abc, epsilon, constant)) {
    case -1: return Verdict::pass;
    case 1: return Verdict::fail;
    default: return Verdict::borderline;
  }
}

Verdict check_classic(const AbcTriple& t, const Rational& epsilon, const Rational& constant) {
  return check_classic(t.c, radical(t.a) * radical(t.b) * radical(t.c), epsilon, constant);
}

long double quality(const AbcTriple& t) {
  if (t.c < 2) throw std::invalid_argument("quality needs c >= 2");
  const Natural rad = radical(t.a) * radical(t.b) * radical(t.c);
  if (rad < 2) throw std::logic_error("rad(abc) = 1 for c >= 2");
  MpfrValue lc(kPrecision), lr(kPrecision);
  lc.set(t.c);
  lr.set(rad);
  mpfr_log(lc.get(), lc.get(), MPFR_RNDN);
  mpfr_log(lr.get(), lr.get(), MPFR_RNDN);
  mpfr_div(lc.get(), lc.get(), lr.get(), MPFR_RNDN);
  return lc.to_long_double();
}

std::vector<uint32_t> radical_sieve(uint64_t limit, std::size_t memory_budget) {
  if (limit > kMaxScanLimit) throw std::invalid_argument("limit exceeds 2^32 - 1");
  const std::size_t required = static_cast<std::size_t>(limit + 1) * sizeof(uint32_t);
  if (required > memory_budget) {
    throw ScanResourceError("radical sieve needs " + std::to_string(required >> 20) +
                                " MiB; budget is " + std::to_string(memory_budget >> 20) + " MiB",
                            required);
  }
  std::vector<uint32_t> rad(limit + 1, 1);
  for (uint64_t p = 2; p <= limit; ++p) {
    if (rad[p] != 1) continue;  // touched by a smaller prime
    for (uint64_t k = p; k <= limit; k += p) rad[k] *= static_cast<uint32_t>(p);
  }
  return rad;
}

ScanResult brute_force_scan(const ScanOptions& options) {
  if (options.limit < 3) throw std::invalid_argument("scan limit must be at least 3");
  if (options.limit > kMaxScanLimit) throw std::invalid_argument("scan limit exceeds 2^32 - 1");
  const auto limit = static_cast<uint32_t>(options.limit);
  const std::vector<uint32_t> rad = radical_sieve(limit, options.memory_budget);

  ScanResult result;
  result.kernel = options.kernel.value_or(simd::best_kernel());
  const simd::FilterFn filter = simd::kernel_fn(result.kernel);
  const bool full = options.count_high_quality;

  constexpr uint32_t kBlock = 512;
  std::atomic<uint64_t> next{3};
  std::mutex mu;
  uint64_t scanned = 0, candidates = 0, high = 0;
  std::vector<AbcTriple> violations;

  auto worker = [&] {
    std::vector<uint32_t> cand;
    std::vector<std::pair<uint32_t, uint32_t>> found;  // (c, a)
    uint64_t my_scanned = 0, my_candidates = 0, my_high = 0;
    for (;;) {
      const uint64_t start = next.fetch_add(kBlock);
      if (start > limit) break;
      const uint64_t stop = std::min<uint64_t>(limit, start + kBlock - 1);
      for (uint64_t cc = start; cc <= stop; ++cc) {
        const auto c = static_cast<uint32_t>(cc);
        const uint64_t rc = rad[c];
        // Any candidate has rb * rc < c with rb >= 2.
        if (2 * rc >= c) continue;
        // Coprime triples have max_rad >= 2 rc and rad(abc) >= rc, so the bound
        // exceeds rc^(15/8); nothing fails when rc^15 >= c^8.
        if (!full && 15.0L * std::log2(static_cast<long double>(rc)) >=
                         8.0L * std::log2(static_cast<long double>(c)) + 1e-9L) {
          continue;
        }
        ++my_scanned;
        cand.clear();
        filter(rad.data(), c, 1, c / 2 + 1, cand);
        for (uint32_t a : cand) {
          const uint32_t b = c - a;
          if (std::gcd(a, b) != 1) continue;
          ++my_candidates;
          const uint64_t ra = rad[a], rb = rad[b];
          const u128 r_abc = static_cast<u128>(ra * rb) * rc;
          if (full && r_abc < c) ++my_high;
          const uint64_t max_rad = std::max({ra * rb, ra * rc, rb * rc});
          if (!mine_holds(Natural(static_cast<unsigned long>(c)),
                          Natural(static_cast<unsigned long>(max_rad)), to_natural(r_abc))) {
            found.emplace_back(c, a);
          }
        }
      }
    }
    std::lock_guard lock(mu);
    scanned += my_scanned;
    candidates += my_candidates;
    high += my_high;
    for (const auto& [c, a] : found) {
      AbcTriple t;
      t.a = static_cast<unsigned long>(a);
      t.b = static_cast<unsigned long>(c - a);
      t.c = static_cast<unsigned long>(c);
      violations.push_back(std::move(t));
    }
  };

  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, options.threads);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  std::sort(violations.begin(), violations.end(), [](const AbcTriple& x, const AbcTriple& y) {
    return x.c != y.c ? x.c < y.c : x.a < y.a;
  });
  result.violations = std::move(violations);
  result.c_values_scanned = scanned;
  result.candidates = candidates;
  if (full) result.high_quality = high;
  return result;
}

std::vector<FilterHit> prop_abc2_filter(uint64_t limit, const Rational& q_bound,
                                        const Rational& epsilon) {
  if (limit < 2) throw std::invalid_argument("filter limit must be at least 2");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (q_bound <= 0) throw std::invalid_argument("Q must be positive");
  const std::vector<uint32_t> rad = radical_sieve(limit, std::size_t{1} << 34);
  std::vector<FilterHit> hits;
  for (uint64_t c = 2; c <= limit; ++c) {
    for (uint64_t a = 1; a <= c / 2; ++a) {
      const uint64_t b = c - a;
      const u128 r_ab = static_cast<u128>(rad[a]) * rad[b] / std::gcd(rad[a], rad[b]);
      const u128 r_abc = r_ab * rad[c] / gcd(r_ab, u128{rad[c]});
      // rad^(1 + eps) > rad, so c must beat the radical itself.
      if (r_abc >= c) continue;
      const uint64_t g = std::gcd(a, b);
      const Rational ratio(static_cast<unsigned long>(g), static_cast<unsigned long>(rad[g]));
      if (ratio > q_bound) continue;
      const Natural cn(static_cast<unsigned long>(c));
      const Natural rn = to_natural(r_abc);
      const int cmp_bound = compare_classic(cn, rn, epsilon, Rational(1));
      if (cmp_bound < 0) continue;
      FilterHit h;
      h.a = static_cast<unsigned long>(a);
      h.b = static_cast<unsigned long>(b);
      h.c = cn;
      h.gcd = static_cast<unsigned long>(g);
      h.gcd_ratio = ratio;
      h.gcd_ratio.canonicalize();
      h.rad_abc = rn;
      h.verdict = cmp_bound > 0 ? Verdict::fail : Verdict::borderline;
      hits.push_back(std::move(h));
    }
  }
  return hits;
}

}  // namespace fcp
