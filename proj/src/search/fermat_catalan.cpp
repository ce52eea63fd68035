#include <algorithm>
#include <atomic>

#include "plans.hpp"

namespace fcp::detail {

bool weight_admitted(const Rational& weight, const SearchConfig& cfg) {
  return cfg.f_strict ? weight < cfg.f_bound : weight <= cfg.f_bound;
}

namespace {

struct Term {
  u128 value = 0;
  std::vector<TablePower> reps;  // empty for the wildcard 1
};

// 1 followed by the table values, so index 0 is the wildcard.
class FermatCatalanPlan final : public SearchPlan {
 public:
  explicit FermatCatalanPlan(const SearchConfig& cfg) : cfg_(cfg) {
    const unsigned lo = std::max(3u, cfg.min_exp);
    const unsigned hi = top_exponent(cfg.max_value, bit_length(cfg.max_value));
    if (lo <= hi) table_ = build_power_table(cfg.max_value, lo, hi);
    squares_ = cfg.min_exp <= 2;
    values_.push_back(1);
    for (const auto& e : table_.entries()) values_.push_back(e.value);
    // Two squares and a 1 weigh exactly 1; only a non-strict F = 1 admits them.
    square_pair_pass_ = squares_ && weight_admitted(Rational(1), cfg);
  }

  std::vector<SolutionRecord> run_chunk(std::size_t index, std::size_t count) const override {
    std::vector<SolutionRecord> out;
    for (std::size_t i = index; i < values_.size(); i += count) {
      z_slot(i, out);
      if (squares_) {
        x_slot(i, out);
        if (cfg_.coeff_a != cfg_.coeff_b) y_slot(i, out);
      }
    }
    if (index == 0 && square_pair_pass_) square_pairs(out);
    normalize_records(out);
    return out;
  }

  std::size_t work_units() const override { return units_.load(); }

 private:
  std::optional<Term> classify(u128 v, bool allow_square) const {
    Term t{v, {}};
    if (v == 1) return t;
    if (const auto* e = table_.find(v)) t.reps = e->reps;
    u128 root = 0;
    if (allow_square && squares_ && is_square(v, &root)) {
      t.reps.insert(t.reps.begin(), TablePower{static_cast<uint64_t>(root), 2});
    }
    if (t.reps.empty()) return std::nullopt;
    return t;
  }

  bool square_only(u128 v) const {
    return v > 1 && table_.find(v) == nullptr && is_square(v);
  }

  void z_slot(std::size_t i, std::vector<SolutionRecord>& out) const {
    const u128 y = values_[i];
    const std::size_t last = cfg_.coeff_a == cfg_.coeff_b ? i + 1 : values_.size();
    std::size_t pairs = 0;
    for (std::size_t j = 0; j < last; ++j) {
      const u128 x = values_[j];
      ++pairs;
      const u128 s = cfg_.coeff_a * x + cfg_.coeff_b * y;
      if (s % cfg_.coeff_c != 0) continue;
      const u128 z = s / cfg_.coeff_c;
      if (z > cfg_.max_value) break;
      consider(x, y, z, out);
    }
    units_ += pairs;
  }

  // X is a square outside the table; Y and Z come from it.
  void x_slot(std::size_t i, std::vector<SolutionRecord>& out) const {
    const u128 cz = cfg_.coeff_c * values_[i];
    for (std::size_t j = 0; j < values_.size(); ++j) {
      const u128 by = cfg_.coeff_b * values_[j];
      if (by >= cz) break;
      if ((cz - by) % cfg_.coeff_a != 0) continue;
      const u128 x = (cz - by) / cfg_.coeff_a;
      if (x > cfg_.max_value || !square_only(x)) continue;
      consider(x, values_[j], values_[i], out);
    }
  }

  void y_slot(std::size_t i, std::vector<SolutionRecord>& out) const {
    const u128 cz = cfg_.coeff_c * values_[i];
    for (std::size_t j = 0; j < values_.size(); ++j) {
      const u128 ax = cfg_.coeff_a * values_[j];
      if (ax >= cz) break;
      if ((cz - ax) % cfg_.coeff_b != 0) continue;
      const u128 y = (cz - ax) / cfg_.coeff_b;
      if (y > cfg_.max_value || !square_only(y)) continue;
      consider(values_[j], y, values_[i], out);
    }
  }

  // A 1 together with two squares outside the table.
  void square_pairs(std::vector<SolutionRecord>& out) const {
    const u128 a = cfg_.coeff_a, b = cfg_.coeff_b, c = cfg_.coeff_c;
    const u128 top = iroot(cfg_.max_value, 2);
    for (u128 r = 2; r <= top; ++r) {
      const u128 sq = r * r;
      // 1 in the X slot: A + B sq = C z.
      if ((a + b * sq) % c == 0) consider(1, sq, (a + b * sq) / c, out);
      // 1 in the Y slot: A sq + B = C z.
      if ((a * sq + b) % c == 0) consider(sq, 1, (a * sq + b) / c, out);
      // 1 in the Z slot: A x + B sq = C.
      if (b * sq < c && (c - b * sq) % a == 0) consider((c - b * sq) / a, sq, 1, out);
    }
  }

  void consider(u128 x, u128 y, u128 z, std::vector<SolutionRecord>& out) const {
    if (x == 0 || z == 0 || x > cfg_.max_value || y > cfg_.max_value || z > cfg_.max_value) return;
    if (cfg_.require_coprime && (gcd(x, y) != 1 || gcd(x, z) != 1 || gcd(y, z) != 1)) return;
    auto tx = classify(x, true);
    if (!tx) return;
    auto ty = classify(y, true);
    if (!ty) return;
    auto tz = classify(z, true);
    if (!tz) return;
    if (cfg_.coeff_a == cfg_.coeff_b && x > y) std::swap(tx, ty);
    if (auto r = make_record(*tx, *ty, *tz)) out.push_back(std::move(*r));
  }

  std::optional<SolutionRecord> make_record(const Term& x, const Term& y, const Term& z) const {
    const std::array<const Term*, 3> terms{&x, &y, &z};
    // Exponent 0 stands for the wildcard.
    auto options = [](const Term& t) {
      std::vector<unsigned> e;
      if (t.reps.empty()) e.push_back(0);
      for (const auto& r : t.reps) e.push_back(r.exponent);
      return e;
    };
    const auto ox = options(x), oy = options(y), oz = options(z);
    std::optional<Rational> best;
    std::array<unsigned, 3> chosen{};
    for (unsigned ex : ox) {
      for (unsigned ey : oy) {
        for (unsigned ez : oz) {
          unsigned least = 0;
          Rational w = 0;
          for (unsigned e : {ex, ey, ez}) {
            if (e == 0) continue;
            w += Rational(1, e);
            least = least == 0 ? e : std::min(least, e);
          }
          if (least == 0 || least > cfg_.max_exp || !weight_admitted(w, cfg_)) continue;
          w.canonicalize();
          if (!best || w < *best) {
            best = w;
            chosen = {ex, ey, ez};
          }
        }
      }
    }
    if (!best) return std::nullopt;

    SolutionRecord rec;
    rec.mode = Mode::fermat_catalan;
    rec.sign = Sign::plus;
    for (std::size_t k = 0; k < 3; ++k) {
      const Term& t = *terms[k];
      TermWitness& w = rec.terms[k];
      w.value = to_natural(t.value);
      if (t.reps.empty()) {
        w.kind = TermWitness::Kind::one;
        continue;
      }
      w.kind = TermWitness::Kind::power;
      for (const auto& r : t.reps) {
        PowerRep p{Natural(static_cast<unsigned long>(r.base)), r.exponent};
        if (r.exponent == chosen[k]) w.chosen = p;
        w.powers.push_back(std::move(p));
      }
    }
    rec.weight = *best;
    const GcdQuality q = gcd_quality(rec.terms[0].value, rec.terms[1].value);
    if (cfg_.q_bound && q.ratio > *cfg_.q_bound) return std::nullopt;
    rec.gcd = q.gcd;
    rec.gcd_ratio = q.ratio;
    rec.coprime = gcd(x.value, y.value) == 1 && gcd(x.value, z.value) == 1 &&
                  gcd(y.value, z.value) == 1;
    rec.maxgcd = q.gcd == std::min(rec.terms[0].value, rec.terms[1].value);
    return rec;
  }

  SearchConfig cfg_;
  PowerTable table_;
  std::vector<u128> values_;
  bool squares_ = false;
  bool square_pair_pass_ = false;
  mutable std::atomic<std::size_t> units_{0};
};

}  // namespace

std::unique_ptr<SearchPlan> make_fermat_catalan_plan(const SearchConfig& cfg) {
  return std::make_unique<FermatCatalanPlan>(cfg);
}

}  // namespace fcp::detail
