#include <algorithm>
#include <atomic>
#include <unordered_map>

#include "plans.hpp"

namespace fcp::detail {
namespace {

struct U128Hash {
  std::size_t operator()(u128 v) const noexcept {
    const auto lo = static_cast<uint64_t>(v), hi = static_cast<uint64_t>(v >> 64);
    return std::hash<uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }
};

struct Candidate {
  ProductDecomposition product;
  Rational weight;  // (1 + s) / d
};

// Smaller weight wins; ties go to the lexicographically smaller factor list.
bool better(const Candidate& a, const Candidate& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return std::lexicographical_compare(a.product.factors.begin(), a.product.factors.end(),
                                      b.product.factors.begin(), b.product.factors.end());
}

class PillaiPlan final : public SearchPlan {
 public:
  explicit PillaiPlan(const SearchConfig& cfg) : cfg_(cfg) {
    if (cfg.pillai_difference == 0) throw ConfigError("pillai difference B must be positive");
    SpreadConstraints sc;
    sc.max_spread = cfg.max_spread;
    sc.max_spread_sq_over_base = cfg.m_bound;
    sc.degree_min = cfg.degree_min;
    sc.degree_max = cfg.degree_max;
    std::unordered_map<u128, Candidate, U128Hash> best;
    enumerate_products(sc, cfg.max_value, [&](const ProductDecomposition& p) {
      if (p.spread < cfg.min_spread) return true;
      Candidate c{p, Rational(p.spread + 1, p.degree)};
      c.weight.canonicalize();
      const u128 v = to_u128(p.value);
      auto it = best.find(v);
      if (it == best.end()) {
        best.emplace(v, std::move(c));
      } else if (better(c, it->second)) {
        it->second = std::move(c);
      }
      return true;
    });
    values_.reserve(best.size());
    for (auto& [v, c] : best) values_.push_back(v);
    std::sort(values_.begin(), values_.end());
    best_ = std::move(best);
  }

  std::vector<SolutionRecord> run_chunk(std::size_t index, std::size_t count) const override {
    std::vector<SolutionRecord> out;
    const u128 b = cfg_.pillai_difference;
    for (std::size_t i = index; i < values_.size(); i += count) {
      ++units_;
      const u128 x = values_[i];
      if (x > cfg_.max_value - b) break;
      const auto it = best_.find(x + b);
      if (it == best_.end()) continue;
      const Candidate& lo = best_.at(x);
      const Candidate& hi = it->second;
      Rational w = lo.weight + hi.weight;
      w.canonicalize();
      if (!weight_admitted(w, cfg_)) continue;
      SolutionRecord rec;
      rec.mode = Mode::pillai;
      rec.sign = Sign::plus;
      rec.terms[0].kind = TermWitness::Kind::product;
      rec.terms[0].value = lo.product.value;
      rec.terms[0].product = lo.product;
      rec.terms[1].kind = TermWitness::Kind::constant;
      rec.terms[1].value = to_natural(b);
      rec.terms[2].kind = TermWitness::Kind::product;
      rec.terms[2].value = hi.product.value;
      rec.terms[2].product = hi.product;
      rec.weight = w;
      const GcdQuality q = gcd_quality(lo.product.value, hi.product.value);
      rec.gcd = q.gcd;
      rec.gcd_ratio = q.ratio;
      rec.coprime = q.gcd == 1;
      rec.maxgcd = q.gcd == lo.product.value;
      if (cfg_.q_bound && q.ratio > *cfg_.q_bound) continue;
      out.push_back(std::move(rec));
    }
    normalize_records(out);
    return out;
  }

  std::size_t work_units() const override { return units_.load(); }

 private:
  SearchConfig cfg_;
  std::vector<u128> values_;
  std::unordered_map<u128, Candidate, U128Hash> best_;
  mutable std::atomic<std::size_t> units_{0};
};

}  // namespace

std::unique_ptr<SearchPlan> make_pillai_plan(const SearchConfig& cfg) {
  return std::make_unique<PillaiPlan>(cfg);
}

}  // namespace fcp::detail
