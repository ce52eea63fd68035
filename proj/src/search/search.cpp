#include "plans.hpp"

namespace fcp {

std::unique_ptr<SearchPlan> make_plan(const SearchConfig& cfg) {
  validate(cfg);
  switch (cfg.mode) {
    case Mode::fermat_catalan: return detail::make_fermat_catalan_plan(cfg);
    case Mode::pillai: return detail::make_pillai_plan(cfg);
    default: return detail::make_product_plan(cfg);
  }
}

std::vector<SolutionRecord> run_all(const SearchConfig& cfg) {
  auto records = make_plan(cfg)->run_chunk(0, 1);
  normalize_records(records);
  return records;
}

std::vector<SolutionRecord> search_fermat_catalan(const SearchConfig& cfg) {
  if (cfg.mode != Mode::fermat_catalan) throw ConfigError("search_fermat_catalan needs mode fc");
  return run_all(cfg);
}

std::vector<SolutionRecord> search_product_target(const SearchConfig& cfg) {
  switch (cfg.mode) {
    case Mode::gbtz:
    case Mode::nonmaxgcd3:
    case Mode::fp:
    case Mode::maxgcd_spread1:
    case Mode::survey:
      return run_all(cfg);
    default:
      throw ConfigError("search_product_target needs a product-target mode");
  }
}

std::vector<PillaiPair> search_pillai_products(uint64_t difference, SearchConfig cfg) {
  if (difference == 0) throw ConfigError("pillai difference B must be positive");
  cfg.mode = Mode::pillai;
  cfg.pillai_difference = difference;
  std::vector<PillaiPair> out;
  for (auto& r : run_all(cfg)) out.push_back({*r.terms[0].product, *r.terms[2].product});
  return out;
}

std::map<SurveyKey, std::size_t> survey_counts(const SearchConfig& cfg,
                                               const std::vector<SolutionRecord>& records) {
  std::map<SurveyKey, std::size_t> counts;
  const unsigned top = detail::top_exponent(cfg.max_value, cfg.max_exp);
  for (unsigned n = cfg.min_exp; n <= top; ++n) {
    for (unsigned m = cfg.min_exp; m <= top; ++m) {
      for (unsigned d = cfg.degree_min; d <= cfg.degree_max; ++d) counts[{n, m, d}] = 0;
    }
  }
  for (const auto& r : records) {
    for (const auto& c : r.cells) ++counts[{c.n, c.m, c.d}];
  }
  return counts;
}

std::map<SurveyKey, std::size_t> survey_combinations(const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.mode = Mode::survey;
  return survey_counts(c, run_all(c));
}

}  // namespace fcp
