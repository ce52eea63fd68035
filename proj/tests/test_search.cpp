#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "fcp/search.hpp"
#include "oracles.hpp"

using fcp::Mode;
using fcp::Natural;
using fcp::Rational;
using fcp::SearchConfig;
using fcp::u128;

namespace {

Natural pw(unsigned long b, unsigned long e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

std::set<oracle::Key> keys(const std::vector<fcp::SolutionRecord>& rs) {
  std::set<oracle::Key> out;
  for (const auto& r : rs) out.insert(oracle::key_of(r));
  return out;
}

std::set<oracle::Key> triples(std::initializer_list<std::array<Natural, 3>> ts) {
  std::set<oracle::Key> out;
  for (const auto& t : ts) {
    const auto a = t[0].get_ui(), b = t[1].get_ui();
    out.emplace(std::min(a, b), std::max(a, b), t[2].get_ui(), 1);
  }
  return out;
}

// Recomputes everything a record claims from its own fields.
void reverify(const fcp::SolutionRecord& r, const SearchConfig& cfg) {
  const auto& t = r.terms;
  if (r.mode == Mode::fermat_catalan) {
    CHECK(cfg.coeff_a * t[0].value + cfg.coeff_b * t[1].value == cfg.coeff_c * t[2].value);
  } else if (r.sign == fcp::Sign::plus) {
    CHECK(t[0].value + t[1].value == t[2].value);
  } else {
    CHECK(t[0].value - t[1].value == t[2].value);
  }
  Rational w = 0;
  for (const auto& term : t) {
    CHECK(term.value <= fcp::to_natural(cfg.max_value));
    switch (term.kind) {
      case fcp::TermWitness::Kind::one: CHECK(term.value == 1); break;
      case fcp::TermWitness::Kind::power: {
        REQUIRE(term.chosen.has_value());
        Natural v;
        mpz_pow_ui(v.get_mpz_t(), term.chosen->base.get_mpz_t(), term.chosen->exponent);
        CHECK(v == term.value);
        w += Rational(1, term.chosen->exponent);
        break;
      }
      case fcp::TermWitness::Kind::product: {
        REQUIRE(term.product.has_value());
        Natural v = 1;
        for (const auto& f : term.product->factors) v *= f;
        CHECK(v == term.value);
        w += Rational(term.product->spread + 1, term.product->degree);
        break;
      }
      case fcp::TermWitness::Kind::constant: break;
    }
  }
  w.canonicalize();
  CHECK(w == r.weight);
  CHECK(oracle::admitted(r.weight, cfg));
  const Natural& second = r.mode == Mode::pillai ? t[2].value : t[1].value;
  Natural g;
  mpz_gcd(g.get_mpz_t(), t[0].value.get_mpz_t(), second.get_mpz_t());
  CHECK(g == r.gcd);
  CHECK(r.coprime == (g == 1));
}

std::vector<fcp::SolutionRecord> run_and_check(const SearchConfig& cfg) {
  auto rs = fcp::run_all(cfg);
  for (const auto& r : rs) reverify(r, cfg);
  return rs;
}

SearchConfig at(Mode mode, uint64_t max_value) {
  auto c = fcp::default_config(mode);
  c.max_value = max_value;
  return c;
}

std::size_t check_products_match(const SearchConfig& cfg, bool by_pairs = false) {
  const auto want = by_pairs ? oracle::classify_product_pairs(cfg) : oracle::classify_products(cfg);
  const auto got = run_and_check(cfg);
  std::map<oracle::Key, std::set<oracle::Cell>> have;
  for (const auto& r : got) {
    auto& cells = have[oracle::key_of(r)];
    for (const auto& c : r.cells) cells.insert({c.n, c.m, c.d, c.spread});
  }
  std::set<oracle::Key> want_keys, have_keys;
  for (const auto& [k, c] : want) want_keys.insert(k);
  for (const auto& [k, c] : have) have_keys.insert(k);
  CHECK(have_keys == want_keys);
  if (cfg.mode == Mode::survey) {
    for (const auto& [k, c] : want) {
      if (have.count(k)) CHECK(have.at(k) == c);
    }
  }
  return got.size();
}

std::string dump(const std::vector<fcp::SolutionRecord>& rs) {
  std::string out;
  for (const auto& r : rs) out += fcp::record_to_json(r).dump() + "\n";
  return out;
}

}  // namespace

TEST_CASE("build_power_table") {
  auto t = fcp::build_power_table(100, 3, 100);
  std::vector<u128> values;
  for (const auto& e : t.entries()) values.push_back(e.value);
  CHECK(values == std::vector<u128>{8, 16, 27, 32, 64, 81});
  const auto* e64 = t.find(64);
  REQUIRE(e64 != nullptr);
  REQUIRE(e64->reps.size() == 2);
  CHECK(e64->reps[0].base == 4);
  CHECK(e64->reps[0].exponent == 3);
  CHECK(e64->reps[1].base == 2);
  CHECK(e64->reps[1].exponent == 6);
  CHECK(t.find(9) == nullptr);

  t = fcp::build_power_table(8, 2, 2);
  REQUIRE(t.size() == 1);
  CHECK(t.entries()[0].value == 4);

  // Cubes and up to 10^6: count by inclusion-exclusion over maximal exponents.
  t = fcp::build_power_table(1000000, 3, 100);
  std::set<uint64_t> brute;
  for (uint64_t b = 2; b * b * b <= 1000000; ++b) {
    for (uint64_t v = b * b * b; v <= 1000000; v *= b) brute.insert(v);
  }
  CHECK(t.size() == brute.size());
  for (const auto& e : t.entries()) {
    CHECK(brute.count(static_cast<uint64_t>(e.value)) == 1);
    CHECK(oracle::power_exponents(static_cast<uint64_t>(e.value)).back() == e.reps.back().exponent);
  }

  CHECK_THROWS_AS(fcp::build_power_table(3, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(fcp::build_power_table(100, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(fcp::build_power_table(100, 4, 3), std::invalid_argument);
  try {
    fcp::build_power_table(u128{1} << 100, 2, 100, 1 << 20);
    FAIL("expected a resource error");
  } catch (const fcp::ResourceError& e) {
    CHECK(e.required_bytes > (std::size_t{1} << 20));
  }
}

TEST_CASE("fermat-catalan examples") {
  CHECK(keys(run_and_check(at(Mode::fermat_catalan, 100))) ==
        triples({{1, 8, 9}, {32, 49, 81}}));
  CHECK(keys(run_and_check(at(Mode::fermat_catalan, 10000))) ==
        triples({{1, 8, 9}, {32, 49, 81}, {343, 169, 512}, {128, 4913, 5041}}));
}

TEST_CASE("fermat-catalan with coefficients keeps the identity") {
  auto cfg = at(Mode::fermat_catalan, 5000);
  cfg.coeff_a = 2;
  cfg.coeff_b = 1;
  cfg.coeff_c = 1;
  const auto rs = run_and_check(cfg);
  CHECK_FALSE(rs.empty());
  // 2 * 1 + 25 = 27: 5^2 and 3^3 with weight 1/2 + 1/3 < 1.
  bool found = false;
  for (const auto& r : rs) {
    if (r.terms[0].value == 1 && r.terms[1].value == 25 && r.terms[2].value == 27) found = true;
  }
  CHECK(found);
}

TEST_CASE("oracle equivalence: fermat-catalan up to 20000") {
  auto cfg = at(Mode::fermat_catalan, 20000);
  CHECK(keys(run_and_check(cfg)) == oracle::classify_fc(cfg));
  cfg.f_strict = false;
  CHECK(keys(run_and_check(cfg)) == oracle::classify_fc(cfg));
  cfg.f_strict = true;
  cfg.max_exp = 3;
  CHECK(keys(run_and_check(cfg)) == oracle::classify_fc(cfg));
  cfg.max_exp = 113;
  cfg.min_exp = 3;
  CHECK(keys(run_and_check(cfg)) == oracle::classify_fc(cfg));
  cfg.min_exp = 2;
  cfg.f_bound = Rational(5, 6);
  CHECK(keys(run_and_check(cfg)) == oracle::classify_fc(cfg));
}

TEST_CASE("oracle equivalence: product modes up to 20000") {
  for (Mode mode : {Mode::gbtz, Mode::nonmaxgcd3, Mode::fp, Mode::maxgcd_spread1, Mode::survey}) {
    CAPTURE(std::string(fcp::to_string(mode)));
    check_products_match(at(mode, 20000));
  }
  SUBCASE("relaxed variants") {
    auto cfg = at(Mode::gbtz, 20000);
    cfg.min_exp = 2;
    cfg.f_bound = 1;
    cfg.f_strict = false;
    check_products_match(cfg);

    cfg = at(Mode::nonmaxgcd3, 20000);
    cfg.min_exp = 2;
    cfg.q_bound = Rational(2);
    check_products_match(cfg);
    cfg.m_bound = Rational(1, 2);
    cfg.max_spread = 5;
    check_products_match(cfg);
    cfg = at(Mode::nonmaxgcd3, 20000);
    cfg.require_coprime = true;
    cfg.min_exp = 2;
    check_products_match(cfg);

    cfg = at(Mode::fp, 20000);
    cfg.min_exp = 2;
    cfg.degree_min = 2;
    check_products_match(cfg);

    cfg = at(Mode::maxgcd_spread1, 20000);
    cfg.min_exp = 2;
    cfg.degree_min = 2;
    for (auto s : {fcp::SignMode::plus, fcp::SignMode::minus}) {
      cfg.sign = s;
      check_products_match(cfg);
    }

    cfg = at(Mode::survey, 20000);
    cfg.min_exp = 2;
    cfg.degree_min = 1;
    check_products_match(cfg);
    cfg.survey_base = fcp::SurveyBase::gbtz;
    check_products_match(cfg);
    cfg.sign = fcp::SignMode::minus;
    cfg.min_spread = 1;
    check_products_match(cfg);
  }
}

TEST_CASE("oracle equivalence: product modes at 2^20 over power pairs") {
  const uint64_t m = uint64_t{1} << 20;
  for (Mode mode : {Mode::gbtz, Mode::nonmaxgcd3, Mode::fp, Mode::maxgcd_spread1, Mode::survey}) {
    CAPTURE(std::string(fcp::to_string(mode)));
    check_products_match(at(mode, m), true);
  }
  CHECK(check_products_match(at(Mode::nonmaxgcd3, m), true) == 2);

  auto cfg = at(Mode::maxgcd_spread1, m);
  cfg.min_exp = 4;
  cfg.degree_min = 4;
  cfg.f_strict = false;
  CHECK(check_products_match(cfg, true) > 0);

  cfg = at(Mode::nonmaxgcd3, m);
  cfg.f_strict = false;
  cfg.m_bound = Rational(1, 10);
  CHECK(check_products_match(cfg, true) > 0);
  cfg.q_bound = Rational(4);
  check_products_match(cfg, true);

  cfg = at(Mode::fp, m);
  cfg.f_strict = false;
  check_products_match(cfg, true);

  cfg = at(Mode::survey, m);
  CHECK(check_products_match(cfg, true) > 10);
  cfg.min_spread = 1;
  cfg.max_spread = 3;
  CHECK(check_products_match(cfg, true) > 0);
  cfg = at(Mode::survey, m);
  cfg.survey_base = fcp::SurveyBase::gbtz;
  cfg.f_strict = false;
  check_products_match(cfg, true);
  cfg = at(Mode::survey, m);
  cfg.require_coprime = true;
  check_products_match(cfg, true);
}

TEST_CASE("oracle equivalence: pillai up to 20000") {
  auto cfg = at(Mode::pillai, 20000);
  CHECK(keys(run_and_check(cfg)) == oracle::classify_pillai(cfg));
  cfg.pillai_difference = 7;
  cfg.max_spread = 1;
  cfg.degree_max = 6;
  CHECK(keys(run_and_check(cfg)) == oracle::classify_pillai(cfg));
  cfg.pillai_difference = 2;
  cfg.max_spread = 2;
  cfg.m_bound = Rational(1, 2);
  cfg.q_bound = Rational(1);
  cfg.f_bound = 1;
  CHECK(keys(run_and_check(cfg)) == oracle::classify_pillai(cfg));
}

TEST_CASE("pillai products") {
  auto cfg = fcp::default_config(Mode::pillai);
  cfg.max_value = 1000;
  cfg.max_spread = 0;
  cfg.f_bound = Rational(9, 10);
  auto ps = fcp::search_pillai_products(1, cfg);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].lower.value == 8);
  CHECK(ps[0].upper.value == 9);
  ps = fcp::search_pillai_products(2, cfg);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].lower.value == 25);
  CHECK(ps[0].upper.value == 27);
  cfg.max_value = 8;
  cfg.f_bound = Rational(1, 2);
  CHECK(fcp::search_pillai_products(1, cfg).empty());
  CHECK_THROWS(fcp::search_pillai_products(0, cfg));
}

TEST_CASE("maxgcd-spread1 finds the standard 32^5 + 16^5") {
  auto cfg = at(Mode::maxgcd_spread1, uint64_t{1} << 26);
  cfg.min_exp = cfg.max_exp = 5;
  cfg.degree_min = cfg.degree_max = 5;
  const auto rs = run_and_check(cfg);
  bool found = false;
  for (const auto& r : rs) {
    CHECK(r.maxgcd);
    if (r.terms[2].value != 34603008 || r.sign != fcp::Sign::plus) continue;
    found = true;
    CHECK(r.terms[0].value == pw(32, 5));
    CHECK(r.terms[1].value == pw(16, 5));
    REQUIRE(r.standard.has_value());
    CHECK(*r.standard);
    REQUIRE(r.standard_witness.has_value());
    CHECK(r.standard_witness->v == 1);
    CHECK(r.standard_witness->w == 2);
    CHECK(r.terms[2].product->factors ==
          std::vector<Natural>{32, 32, 32, 32, 33});
  }
  CHECK(found);
}

TEST_CASE("nonmaxgcd3 at 2^20 finds the two smallest degree-3 solutions") {
  const auto rs = run_and_check(at(Mode::nonmaxgcd3, uint64_t{1} << 20));
  std::set<oracle::Key> got = keys(rs);
  CHECK(got == std::set<oracle::Key>{{20736, 16384, 4352, -1}, {331776, 65536, 266240, -1}});
}

TEST_CASE("survey cells") {
  auto cfg = at(Mode::survey, uint64_t{1} << 28);
  cfg.min_exp = 4;
  cfg.max_exp = 14;
  cfg.degree_min = cfg.degree_max = 3;
  const auto counts = fcp::survey_combinations(cfg);
  CHECK(counts.at({4, 14, 3}) >= 1);

  cfg = at(Mode::survey, uint64_t{1} << 24);
  const auto all = fcp::survey_combinations(cfg);
  std::size_t nonzero = 0;
  for (const auto& [key, count] : all) {
    const auto [n, m, d] = key;
    if (n == m && d < n) CHECK(count == 0);
    if (count) ++nonzero;
  }
  CHECK(nonzero > 0);

  cfg.survey_base = fcp::SurveyBase::gbtz;
  for (const auto& [key, count] : fcp::survey_combinations(cfg)) {
    if (std::get<2>(key) == 2) CHECK(count == 0);
  }
}

TEST_CASE("monotonicity in the bound") {
  for (Mode mode : {Mode::fermat_catalan, Mode::nonmaxgcd3, Mode::survey, Mode::pillai,
                    Mode::maxgcd_spread1}) {
    CAPTURE(std::string(fcp::to_string(mode)));
    std::set<oracle::Key> prev;
    for (unsigned bits : {12u, 16u, 20u}) {
      const auto now = keys(fcp::run_all(at(mode, uint64_t{1} << bits)));
      CHECK(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
      prev = now;
    }
  }
}

TEST_CASE("chunked runs are deterministic and resumable") {
  const auto cfg = at(Mode::fermat_catalan, 10000);
  fcp::ChunkOptions one;
  const auto base = fcp::run_chunked(cfg, one);
  CHECK(base.chunks_completed == 1);
  CHECK(dump(base.records) == dump(fcp::run_all(cfg)));

  fcp::ChunkOptions many;
  many.chunk_count = 16;
  many.threads = 4;
  const auto split = fcp::run_chunked(cfg, many);
  CHECK(split.chunk_count == 16);
  CHECK(dump(split.records) == dump(base.records));

  const auto dir = std::filesystem::temp_directory_path() /
                   ("fcp-test-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  many.checkpoint = dir / "run.ckpt";
  many.stop_after = 3;
  const auto cut = fcp::run_chunked(cfg, many);
  CHECK(cut.interrupted);
  CHECK(cut.chunks_completed == 3);
  REQUIRE(std::filesystem::exists(*many.checkpoint));

  many.stop_after.reset();
  many.resume = true;
  const auto resumed = fcp::run_chunked(cfg, many);
  CHECK_FALSE(resumed.interrupted);
  CHECK(resumed.resumed_from == 3);
  CHECK(resumed.chunks_completed == 16);
  CHECK(dump(resumed.records) == dump(base.records));

  auto other = cfg;
  other.max_value = 20000;
  CHECK_THROWS_AS(fcp::run_chunked(other, many), fcp::CheckpointMismatch);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config validation") {
  auto bad = [](auto edit) {
    auto c = fcp::default_config(Mode::nonmaxgcd3);
    edit(c);
    return c;
  };
  CHECK_NOTHROW(fcp::validate(fcp::default_config(Mode::nonmaxgcd3)));
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.f_bound = Rational(3, 2); })), fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.f_bound = 0; })), fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.q_bound = Rational(0); })), fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.degree_max = 4; })), fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.min_spread = 0; })), fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.min_exp = 1; })), fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.max_value = (u128{1} << 120) + 1; })),
                  fcp::ConfigError);
  CHECK_THROWS_AS(fcp::validate(bad([](SearchConfig& c) { c.coeff_a = 2; })), fcp::ConfigError);
  auto g = fcp::default_config(Mode::gbtz);
  g.require_coprime = false;
  CHECK_THROWS_AS(fcp::validate(g), fcp::ConfigError);
  auto p = fcp::default_config(Mode::pillai);
  p.pillai_difference = 0;
  CHECK_THROWS_AS(fcp::validate(p), fcp::ConfigError);
}

TEST_CASE("config json round trip and digest") {
  for (Mode mode : {Mode::fermat_catalan, Mode::gbtz, Mode::nonmaxgcd3, Mode::fp,
                    Mode::maxgcd_spread1, Mode::pillai, Mode::survey}) {
    auto c = fcp::default_config(mode);
    c.q_bound = Rational(3, 2);
    c.m_bound = Rational(1, 4);
    const auto j = fcp::config_to_json(c);
    const auto back = fcp::config_from_json(j, fcp::default_config(Mode::fermat_catalan));
    CHECK(fcp::config_to_json(back) == j);
    CHECK(fcp::config_digest(back) == fcp::config_digest(c));
    CHECK(fcp::config_digest(c).size() == 16);
    auto d = c;
    d.max_value += 1;
    CHECK(fcp::config_digest(d) != fcp::config_digest(c));
  }
}

TEST_CASE("record json round trip") {
  std::vector<fcp::SolutionRecord> all;
  for (Mode mode : {Mode::fermat_catalan, Mode::nonmaxgcd3, Mode::maxgcd_spread1, Mode::pillai,
                    Mode::survey}) {
    const auto rs = fcp::run_all(at(mode, uint64_t{1} << 16));
    all.insert(all.end(), rs.begin(), rs.end());
  }
  REQUIRE(all.size() > 10);
  for (const auto& r : all) {
    const auto j = fcp::record_to_json(r);
    CHECK(fcp::record_to_json(fcp::record_from_json(nlohmann::json::parse(j.dump()))) == j);
  }
}
