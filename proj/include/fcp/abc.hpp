#pragma once

// The explicit 7/8 abc bound, the classic bound with user parameters, triple
// ingestion and brute-force scanning.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcp/arith.hpp"
#include "fcp/simd/abc_filter.hpp"

namespace fcp {

/// a + b = c, gcd(a, b) = 1, a <= b. `line` is 0 unless parsed from text.
struct AbcTriple {
  Natural a, b, c;
  std::size_t line = 0;

  friend bool operator==(const AbcTriple& x, const AbcTriple& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
};

/// Validates and orders the pair; throws std::invalid_argument when a or b
/// is zero or gcd(a, b) != 1.
AbcTriple make_triple(const Natural& a, const Natural& b);

enum class TripleFormat { auto_detect, two_column, three_column };

struct TripleParseError {
  std::size_t line = 0;
  std::string message;
};

struct TripleParseResult {
  std::vector<AbcTriple> triples;
  std::vector<TripleParseError> errors;
};

/// One triple per line, "a b" or "a b c"; '#' starts a comment. Bad lines are
/// collected in `errors` and parsing continues.
TripleParseResult parse_triples(std::istream& in, TripleFormat format = TripleFormat::auto_detect);

enum class Verdict { pass, fail, borderline };
const char* to_string(Verdict v);

struct ClassicCheck {
  Rational epsilon;
  Rational constant;
  Verdict verdict = Verdict::borderline;
};

struct AbcReport {
  AbcTriple triple;
  Natural rad_a, rad_b, rad_c;
  Natural rad_ab, rad_ac, rad_bc, rad_abc;
  Natural max_rad;
  /// c < max_rad * rad_abc^(7/8), decided exactly.
  bool mine_pass = false;
  std::vector<ClassicCheck> classic;
  long double quality = 0;
};

/// Throws std::logic_error if the radicals are inconsistent with pairwise
/// coprimality.
AbcReport check_mine(const AbcTriple& t);

/// c < C rad(abc)^(1 + eps) under outward-rounded interval evaluation.
/// Requires eps > 0 and C > 0.
Verdict check_classic(const AbcTriple& t, const Rational& epsilon, const Rational& constant);
Verdict check_classic(const Natural& c, const Natural& rad_abc, const Rational& epsilon,
                      const Rational& constant);

/// ln c / ln rad(abc). Requires c >= 2.
long double quality(const AbcTriple& t);

struct ScanOptions {
  uint64_t limit = 0;
  unsigned threads = 1;
  std::size_t memory_budget = std::size_t{2} << 30;
  /// Also count triples with c > rad(abc); disables the c-level prune.
  bool count_high_quality = false;
  std::optional<simd::Kernel> kernel;  // unset picks the widest available
};

struct ScanResult {
  std::vector<AbcTriple> violations;  // ordered by (c, a)
  uint64_t c_values_scanned = 0;
  uint64_t candidates = 0;
  std::optional<uint64_t> high_quality;
  simd::Kernel kernel = simd::Kernel::scalar;
};

struct ScanResourceError : std::runtime_error {
  ScanResourceError(const std::string& what, std::size_t required)
      : std::runtime_error(what), required_bytes(required) {}
  std::size_t required_bytes;
};

inline constexpr uint64_t kMaxScanLimit = 0xFFFFFFFFULL;

/// Every coprime a <= b with a + b = c <= limit failing the 7/8 bound.
/// Requires 3 <= limit <= kMaxScanLimit.
ScanResult brute_force_scan(const ScanOptions& options);

/// Radicals of 0..limit (entry 0 is unused); throws ScanResourceError over budget.
std::vector<uint32_t> radical_sieve(uint64_t limit, std::size_t memory_budget);

struct FilterHit {
  Natural a, b, c;
  Natural gcd;
  Rational gcd_ratio;
  Natural rad_abc;
  Verdict verdict = Verdict::fail;  // fail: the inequality a + b > rad^(1+eps) holds
};

/// Pairs a <= b, a + b <= limit, coprime or not, with gcd(a,b)/rad(gcd) <= Q
/// and a + b > rad(ab(a+b))^(1+eps). Pairs the interval evaluation cannot
/// decide are included with verdict borderline.
std::vector<FilterHit> prop_abc2_filter(uint64_t limit, const Rational& q_bound,
                                        const Rational& epsilon);

}  // namespace fcp
