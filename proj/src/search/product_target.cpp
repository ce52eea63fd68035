#include <algorithm>
#include <atomic>

#include "plans.hpp"

namespace fcp::detail {
namespace {

constexpr int kNone = -1;

enum class GcdRule { coprime, non_maxgcd, maxgcd };

// Largest spread s with 1/n + 1/m + (1 + s)/d inside F, or kNone.
int weight_spread_limit(unsigned n, unsigned m, unsigned d, const SearchConfig& cfg) {
  Rational room = cfg.f_bound - Rational(1, n) - Rational(1, m);
  room.canonicalize();
  if (room <= 0) return kNone;
  // (1 + s) * den  (<|<=)  d * num
  const Natural lhs_cap = Natural(d) * room.get_num();
  const Natural& den = room.get_den();
  Natural top = cfg.f_strict ? Natural((lhs_cap - 1) / den) : Natural(lhs_cap / den);
  top -= 1;
  if (top < 0) return kNone;
  if (top > 1 << 20) return 1 << 20;
  return static_cast<int>(top.get_si());
}

class ProductPlan final : public SearchPlan {
 public:
  explicit ProductPlan(const SearchConfig& cfg) : cfg_(cfg) {
    const unsigned hi = top_exponent(cfg.max_value, cfg.max_exp);
    if (cfg.min_exp <= hi) table_ = build_power_table(cfg.max_value, cfg.min_exp, hi);
    top_exp_ = hi;
    switch (cfg.mode) {
      case Mode::gbtz: rule_ = GcdRule::coprime; break;
      case Mode::maxgcd_spread1: rule_ = GcdRule::maxgcd; break;
      case Mode::survey:
        rule_ = cfg.survey_base == SurveyBase::gbtz ? GcdRule::coprime : GcdRule::non_maxgcd;
        break;
      default: rule_ = GcdRule::non_maxgcd; break;
    }
    limits_.assign((hi + 1) * (hi + 1) * (cfg.degree_max + 1), kNone);
    for (unsigned n = cfg.min_exp; n <= hi; ++n) {
      for (unsigned m = cfg.min_exp; m <= hi; ++m) {
        for (unsigned d = cfg.degree_min; d <= cfg.degree_max; ++d) {
          if (!shape_allowed(n, m, d)) continue;
          int s = weight_spread_limit(n, m, d, cfg);
          if (cfg.max_spread) s = std::min<int64_t>(s, static_cast<int64_t>(*cfg.max_spread));
          if (s < static_cast<int64_t>(cfg.min_spread)) s = kNone;
          limit(n, m, d) = s;
        }
      }
    }
  }

  std::vector<SolutionRecord> run_chunk(std::size_t index, std::size_t count) const override {
    std::vector<SolutionRecord> out;
    const auto& entries = table_.entries();
    const bool plus = cfg_.sign != SignMode::minus;
    const bool minus = cfg_.sign != SignMode::plus;
    std::size_t pairs = 0;
    for (std::size_t i = index; i < entries.size(); i += count) {
      const auto& big = entries[i];
      for (std::size_t j = 0; j <= i; ++j) {
        const auto& small = entries[j];
        ++pairs;
        if (!gcd_ok(big.value, small.value)) continue;
        if (plus && big.value <= cfg_.max_value - small.value) {
          examine(big, small, big.value + small.value, Sign::plus, out);
        }
        if (minus && j < i) examine(big, small, big.value - small.value, Sign::minus, out);
      }
    }
    units_ += pairs;
    normalize_records(out);
    return out;
  }

  std::size_t work_units() const override { return units_.load(); }

 private:
  int& limit(unsigned n, unsigned m, unsigned d) {
    return limits_[(n * (top_exp_ + 1) + m) * (cfg_.degree_max + 1) + d];
  }
  int limit(unsigned n, unsigned m, unsigned d) const {
    return limits_[(n * (top_exp_ + 1) + m) * (cfg_.degree_max + 1) + d];
  }

  bool shape_allowed(unsigned n, unsigned m, unsigned d) const {
    switch (cfg_.mode) {
      case Mode::gbtz: return d > 2 && d <= std::min(n, m);
      case Mode::fp:
      case Mode::maxgcd_spread1: return n == m && m == d;
      case Mode::survey:
        if (cfg_.survey_base == SurveyBase::gbtz && d <= 2) return false;
        return d <= std::min(n, m);
      default: return true;
    }
  }

  bool gcd_ok(u128 x, u128 y) const {
    const u128 g = gcd(x, y);
    switch (rule_) {
      case GcdRule::coprime: if (g != 1) return false; break;
      case GcdRule::non_maxgcd: if (g == std::min(x, y)) return false; break;
      case GcdRule::maxgcd: if (g != std::min(x, y)) return false; break;
    }
    if (cfg_.require_coprime && g != 1) return false;
    if (cfg_.q_bound) {
      const Natural gn = to_natural(g);
      const Rational ratio(gn, radical(gn));
      if (ratio > *cfg_.q_bound) return false;
    }
    return true;
  }

  bool spread_ok(const std::vector<u128>& f, uint64_t s) const {
    if (s < cfg_.min_spread) return false;
    if (cfg_.m_bound) {
      const Rational q(Natural(to_natural(s * s)), to_natural(f.front()));
      if (q > *cfg_.m_bound) return false;
    }
    return true;
  }

  void examine(const PowerTable::Entry& big, const PowerTable::Entry& small, u128 z, Sign sign,
               std::vector<SolutionRecord>& out) const {
    // Widest spread each degree could need across the exponent choices.
    std::vector<int> need(cfg_.degree_max + 1, kNone);
    bool any = false;
    for (const auto& rx : big.reps) {
      for (const auto& ry : small.reps) {
        for (unsigned d = cfg_.degree_min; d <= cfg_.degree_max; ++d) {
          const int s = limit(rx.exponent, ry.exponent, d);
          if (s > need[d]) {
            need[d] = s;
            any = true;
          }
        }
      }
    }
    if (!any) return;

    // Every admissible decomposition per degree, in lexicographic order.
    struct Found {
      std::vector<std::vector<u128>> all;
    };
    std::vector<Found> found(cfg_.degree_max + 1);
    bool hit = false;
    for (unsigned d = cfg_.degree_min; d <= cfg_.degree_max; ++d) {
      if (need[d] == kNone) continue;
      Found& b = found[d];
      decompose_u128(z, d, static_cast<uint64_t>(need[d]), [&](const std::vector<u128>& f) {
        const auto s = static_cast<uint64_t>(f.back() - f.front());
        if (!spread_ok(f, s)) return true;
        b.all.push_back(f);
        return true;
      });
      if (!b.all.empty()) hit = true;
    }
    if (!hit) return;

    SolutionRecord rec;
    rec.mode = cfg_.mode;
    rec.sign = sign;
    std::optional<std::tuple<unsigned, unsigned, unsigned, std::vector<u128>>> pick;
    // Exponent choices: n descending, m descending, then d ascending.
    auto reps_desc = [](const std::vector<TablePower>& reps) {
      std::vector<TablePower> r(reps.rbegin(), reps.rend());
      return r;
    };
    for (const auto& rx : reps_desc(big.reps)) {
      for (const auto& ry : reps_desc(small.reps)) {
        for (unsigned d = cfg_.degree_min; d <= cfg_.degree_max; ++d) {
          const int s = limit(rx.exponent, ry.exponent, d);
          if (s == kNone || found[d].all.empty()) continue;
          const std::vector<u128>* first = nullptr;
          for (const auto& f : found[d].all) {
            if (f.back() - f.front() <= static_cast<u128>(s)) {
              first = &f;
              break;
            }
          }
          if (first == nullptr) continue;
          if (cfg_.mode == Mode::survey) {
            uint64_t least = UINT64_MAX;
            for (const auto& f : found[d].all) {
              const auto sp = static_cast<uint64_t>(f.back() - f.front());
              if (sp <= static_cast<uint64_t>(s)) least = std::min(least, sp);
            }
            SurveyCell cell{rx.exponent, ry.exponent, d, least};
            if (std::find(rec.cells.begin(), rec.cells.end(), cell) == rec.cells.end()) {
              rec.cells.push_back(cell);
            }
          }
          if (!pick) pick.emplace(rx.exponent, ry.exponent, d, *first);
        }
      }
    }
    if (!pick) return;
    const auto& [n, m, d, factors] = *pick;

    auto power_term = [](const PowerTable::Entry& e, unsigned chosen) {
      TermWitness t;
      t.kind = TermWitness::Kind::power;
      t.value = to_natural(e.value);
      for (const auto& r : e.reps) {
        PowerRep p{Natural(static_cast<unsigned long>(r.base)), r.exponent};
        if (r.exponent == chosen) t.chosen = p;
        t.powers.push_back(std::move(p));
      }
      return t;
    };
    rec.terms[0] = power_term(big, n);
    rec.terms[1] = power_term(small, m);
    TermWitness& tz = rec.terms[2];
    tz.kind = TermWitness::Kind::product;
    tz.value = to_natural(z);
    std::vector<Natural> nf;
    nf.reserve(factors.size());
    for (u128 f : factors) nf.push_back(to_natural(f));
    tz.product = analyze(std::move(nf));

    rec.weight = Rational(1, n) + Rational(1, m) + Rational(tz.product->spread + 1, d);
    rec.weight.canonicalize();
    const GcdQuality q = gcd_quality(rec.terms[0].value, rec.terms[1].value);
    rec.gcd = q.gcd;
    rec.gcd_ratio = q.ratio;
    rec.coprime = q.gcd == 1;
    rec.maxgcd = q.gcd == rec.terms[1].value;
    if (cfg_.mode == Mode::maxgcd_spread1) {
      rec.standard = false;
      if (n == m) {
        Natural xb, yb;
        for (const auto& r : big.reps) {
          if (r.exponent == n) xb = Natural(static_cast<unsigned long>(r.base));
        }
        for (const auto& r : small.reps) {
          if (r.exponent == m) yb = Natural(static_cast<unsigned long>(r.base));
        }
        if (auto w = is_standard(xb, yb, n, tz.value, sign)) {
          rec.standard = true;
          rec.standard_witness = *w;
        }
      }
    }
    out.push_back(std::move(rec));
  }

  SearchConfig cfg_;
  PowerTable table_;
  unsigned top_exp_ = 0;
  GcdRule rule_ = GcdRule::non_maxgcd;
  std::vector<int> limits_;
  mutable std::atomic<std::size_t> units_{0};
};

}  // namespace

std::unique_ptr<SearchPlan> make_product_plan(const SearchConfig& cfg) {
  return std::make_unique<ProductPlan>(cfg);
}

}  // namespace fcp::detail
