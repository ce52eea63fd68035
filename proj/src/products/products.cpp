#include "fcp/products.hpp"

#include <algorithm>
#include <stdexcept>

#include "../common/mpfr_value.hpp"

namespace fcp {
namespace {

// -1, 0, 1 as base^k compares to q.
int pow_cmp(u128 base, unsigned k, u128 q) {
  const u128 p = pow_capped(base, k, q);
  return p < q ? -1 : (p == q ? 0 : 1);
}

int pow_cmp(const Natural& base, unsigned k, const Natural& q) {
  Natural p;
  mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), k);
  return cmp(p, q) < 0 ? -1 : (p == q ? 0 : 1);
}

bool divides(u128 f, u128 q) { return q % f == 0; }
bool divides(const Natural& f, const Natural& q) {
  return mpz_divisible_p(q.get_mpz_t(), f.get_mpz_t()) != 0;
}

u128 root_floor(u128 v, unsigned k) { return iroot(v, k); }
Natural root_floor(const Natural& v, unsigned k) { return iroot(v, k).root; }

// Depth-first over nondecreasing factors in [lo, hi] whose product is q.
template <class Int, class Emit>
bool decompose_dfs(const Int& q, unsigned remaining, const Int& lo, const Int& hi,
                   std::vector<Int>& current, Emit& emit) {
  if (remaining == 0) {
    if (q != 1) return true;
    return emit(current);
  }
  if (remaining == 1) {
    if (q < lo || q > hi) return true;
    current.push_back(q);
    const bool go_on = emit(current);
    current.pop_back();
    return go_on;
  }
  if (pow_cmp(lo, remaining, q) > 0 || pow_cmp(hi, remaining, q) < 0) return true;
  for (Int f = lo; f <= hi; ++f) {
    if (pow_cmp(f, remaining, q) > 0) break;
    if (!divides(f, q)) continue;
    current.push_back(f);
    const bool go_on = decompose_dfs<Int>(Int(q / f), remaining - 1, f, hi, current, emit);
    current.pop_back();
    if (!go_on) return false;
  }
  return true;
}

template <class Int, class Emit>
void decompose_impl(const Int& value, unsigned degree, uint64_t max_spread, Emit& emit) {
  const Int r = root_floor(value, degree);
  const Int spread = Int(max_spread);
  const Int first = r > spread ? Int(r - spread) : Int(1);
  std::vector<Int> current;
  current.reserve(degree);
  for (Int b = first; b <= r; ++b) {
    if (!divides(b, value)) continue;
    current.assign(1, b);
    if (!decompose_dfs<Int>(Int(value / b), degree - 1, b, Int(b + spread), current, emit)) return;
  }
}

void enumerate_dfs(u128 product, unsigned remaining, u128 lo, u128 hi, u128 max_value,
                   std::vector<u128>& current, std::vector<std::vector<u128>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (u128 f = lo; f <= hi; ++f) {
    const u128 room = max_value / product;
    if (pow_capped(f, remaining, room) > room) break;
    current.push_back(f);
    enumerate_dfs(product * f, remaining - 1, f, hi, max_value, current, out);
    current.pop_back();
  }
}

u128 product_of(const std::vector<u128>& fs) {
  u128 p = 1;
  for (u128 f : fs) p *= f;
  return p;
}

}  // namespace

bool SpreadConstraints::admits(const ProductDecomposition& p) const {
  if (p.degree < degree_min || p.degree > degree_max) return false;
  if (max_spread && cmp(p.spread, Natural(static_cast<unsigned long>(*max_spread))) > 0) return false;
  if (max_spread_sq_over_base) {
    const Rational lhs(p.spread * p.spread, p.base);
    if (cmp(lhs, *max_spread_sq_over_base) > 0) return false;
  }
  return true;
}

ProductDecomposition analyze(std::vector<Natural> factors) {
  if (factors.empty()) throw std::invalid_argument("analyze: empty factor list");
  for (const auto& f : factors) {
    if (f <= 0) throw std::invalid_argument("analyze: factors must be positive");
  }
  std::sort(factors.begin(), factors.end());
  ProductDecomposition p;
  p.base = factors.front();
  p.spread = factors.back() - factors.front();
  p.degree = static_cast<unsigned>(factors.size());
  p.value = 1;
  for (const auto& f : factors) p.value *= f;
  p.factors = std::move(factors);
  return p;
}

ProductDecomposition power_decomposition(const Natural& base, unsigned count) {
  return analyze(std::vector<Natural>(count, base));
}

void decompose_u128(u128 value, unsigned degree, uint64_t max_spread,
                    const std::function<bool(const std::vector<u128>&)>& emit) {
  if (value == 0) throw std::invalid_argument("decompose: value must be positive");
  if (degree == 0) throw std::invalid_argument("decompose: degree must be positive");
  if (degree == 1) {
    // b + s could overflow for a lone factor; the answer is just [value].
    emit(std::vector<u128>{value});
    return;
  }
  auto forward = [&](const std::vector<u128>& fs) { return emit(fs); };
  decompose_impl<u128>(value, degree, max_spread, forward);
}

std::vector<ProductDecomposition> decompose(const Natural& value, unsigned degree,
                                            uint64_t max_spread) {
  if (value <= 0) throw std::invalid_argument("decompose: value must be positive");
  if (degree == 0) throw std::invalid_argument("decompose: degree must be positive");
  std::vector<ProductDecomposition> out;
  if (mpz_sizeinbase(value.get_mpz_t(), 2) <= 126) {
    decompose_u128(to_u128(value), degree, max_spread, [&](const std::vector<u128>& fs) {
      std::vector<Natural> nat;
      nat.reserve(fs.size());
      for (u128 f : fs) nat.push_back(to_natural(f));
      out.push_back(analyze(std::move(nat)));
      return true;
    });
    return out;
  }
  auto collect = [&](const std::vector<Natural>& fs) {
    out.push_back(analyze(fs));
    return true;
  };
  decompose_impl<Natural>(value, degree, max_spread, collect);
  return out;
}

Rational fc_weight(const std::vector<WeightTerm>& terms) {
  Rational sum = 0;
  for (const auto& t : terms) {
    if (t.degree == 0) throw std::invalid_argument("fc_weight: degree must be positive");
    sum += Rational(t.spread + 1, t.degree);
  }
  sum.canonicalize();
  return sum;
}

double spread_lemma_margin(const ProductDecomposition& p) {
  return spread_lemma_margin(p, radical(p.value));
}

double spread_lemma_margin(const ProductDecomposition& p, const Natural& rad) {
  if (!(p.spread + 1 < p.degree)) {
    throw std::domain_error("spread_lemma_margin: requires spread + 1 < degree");
  }
  if (p.spread == 0) {
    Natural rad_pow;
    mpz_pow_ui(rad_pow.get_mpz_t(), rad.get_mpz_t(), p.degree);
    if (rad_pow == p.value) return 0.0;
  }
  using detail::MpfrValue;
  MpfrValue exp_term, log_value, log_rad, tmp;
  // 2 s^2 / b
  exp_term.set(Rational(2 * p.spread * p.spread, p.base));
  // ((s + 1) / d) ln X
  log_value.set(p.value);
  mpfr_log(log_value.get(), log_value.get(), MPFR_RNDN);
  tmp.set(Rational(p.spread + 1, p.degree));
  mpfr_mul(log_value.get(), log_value.get(), tmp.get(), MPFR_RNDN);
  log_rad.set(rad);
  mpfr_log(log_rad.get(), log_rad.get(), MPFR_RNDN);
  mpfr_add(tmp.get(), exp_term.get(), log_value.get(), MPFR_RNDN);
  mpfr_sub(tmp.get(), tmp.get(), log_rad.get(), MPFR_RNDN);
  return tmp.to_double();
}

void enumerate_products(const SpreadConstraints& constraints, u128 max_value,
                        const std::function<bool(const ProductDecomposition&)>& visit) {
  if (constraints.degree_min == 0 || constraints.degree_min > constraints.degree_max) {
    throw std::invalid_argument("enumerate_products: bad degree range");
  }
  std::vector<u128> current;
  std::vector<std::vector<u128>> klass;
  for (unsigned d = constraints.degree_min; d <= constraints.degree_max; ++d) {
    for (u128 b = 1; pow_capped(b, d, max_value) <= max_value; ++b) {
      // Largest factor any product of this class can hold.
      u128 hi = max_value / pow_capped(b, d - 1, max_value);
      if (constraints.max_spread) hi = std::min<u128>(hi, b + *constraints.max_spread);
      if (constraints.max_spread_sq_over_base) {
        const Rational& m = *constraints.max_spread_sq_over_base;
        const Natural limit = m.get_num() * to_natural(b) / m.get_den();
        const Natural s = sqrt(limit);
        if (fits_u128(s) && to_u128(s) < hi - b) hi = b + to_u128(s);
      }
      klass.clear();
      current.assign(1, b);
      enumerate_dfs(b, d - 1, b, hi, max_value, current, klass);
      std::stable_sort(klass.begin(), klass.end(), [](const auto& x, const auto& y) {
        return product_of(x) < product_of(y);
      });
      for (const auto& fs : klass) {
        std::vector<Natural> nat;
        nat.reserve(fs.size());
        for (u128 f : fs) nat.push_back(to_natural(f));
        if (!visit(analyze(std::move(nat)))) return;
      }
    }
  }
}

}  // namespace fcp
