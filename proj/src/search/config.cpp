#include <cstdio>

#include "fcp/search.hpp"

namespace fcp {
namespace {

using nlohmann::json;

std::string rational_text(const Rational& q) { return q.get_str(); }

template <class E>
struct Named {
  E value;
  const char* name;
};

constexpr Named<Mode> kModes[] = {
    {Mode::fermat_catalan, "fc"},   {Mode::gbtz, "gbtz"},
    {Mode::nonmaxgcd3, "nonmaxgcd3"}, {Mode::fp, "fp"},
    {Mode::maxgcd_spread1, "maxgcd-spread1"}, {Mode::pillai, "pillai"},
    {Mode::survey, "survey"},
};

constexpr Named<SignMode> kSigns[] = {
    {SignMode::plus, "plus"}, {SignMode::minus, "minus"}, {SignMode::both, "both"}};

constexpr Named<SurveyBase> kSurveyBases[] = {
    {SurveyBase::nonmaxgcd, "nonmaxgcd"}, {SurveyBase::gbtz, "gbtz"}};

template <class E, std::size_t N>
const char* name_of(const Named<E> (&table)[N], E v) {
  for (const auto& entry : table) {
    if (entry.value == v) return entry.name;
  }
  return "?";
}

template <class E, std::size_t N>
std::optional<E> lookup(const Named<E> (&table)[N], std::string_view text) {
  for (const auto& entry : table) {
    if (text == entry.name) return entry.value;
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(Mode m) { return name_of(kModes, m); }
const char* to_string(SignMode s) { return name_of(kSigns, s); }
const char* to_string(SurveyBase b) { return name_of(kSurveyBases, b); }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "fermat-catalan") return Mode::fermat_catalan;
  return lookup(kModes, text);
}
std::optional<SignMode> parse_sign_mode(std::string_view text) { return lookup(kSigns, text); }
std::optional<SurveyBase> parse_survey_base(std::string_view text) {
  return lookup(kSurveyBases, text);
}

SearchConfig default_config(Mode mode) {
  SearchConfig c;
  c.mode = mode;
  switch (mode) {
    case Mode::fermat_catalan:
      c.max_value = u128{1} << 34;
      c.min_exp = 2;
      c.max_exp = 113;
      c.sign = SignMode::plus;
      c.require_coprime = true;
      break;
    case Mode::gbtz:
      c.max_value = u128{1} << 30;
      c.min_exp = 3;
      c.max_exp = kMaxSearchBits;
      c.sign = SignMode::both;
      c.require_coprime = true;
      c.degree_min = 3;
      c.degree_max = 10;
      break;
    case Mode::nonmaxgcd3:
      c.max_value = u128{1} << 28;
      c.min_exp = 3;
      c.max_exp = kMaxSearchBits;
      c.sign = SignMode::both;
      c.require_coprime = false;
      c.degree_min = 3;
      c.degree_max = 3;
      c.min_spread = 1;
      break;
    case Mode::fp:
      c.max_value = u128{1} << 30;
      c.min_exp = 4;
      c.max_exp = 21;
      c.sign = SignMode::both;
      c.require_coprime = false;
      c.degree_min = 4;
      c.degree_max = 21;
      break;
    case Mode::maxgcd_spread1:
      c.max_value = u128{1} << 30;
      c.min_exp = 5;
      c.max_exp = 10;
      c.sign = SignMode::both;
      c.require_coprime = false;
      c.degree_min = 5;
      c.degree_max = 10;
      c.max_spread = 1;
      break;
    case Mode::pillai:
      c.max_value = u128{1} << 20;
      c.min_exp = 2;
      c.max_exp = kMaxSearchBits;
      c.sign = SignMode::plus;
      c.require_coprime = false;
      c.f_bound = Rational(9, 10);
      c.f_strict = false;
      c.degree_min = 2;
      c.degree_max = 20;
      c.max_spread = 0;
      c.pillai_difference = 1;
      break;
    case Mode::survey:
      c.max_value = u128{1} << 24;
      c.min_exp = 3;
      c.max_exp = 20;
      c.sign = SignMode::both;
      c.require_coprime = false;
      c.degree_min = 2;
      c.degree_max = 10;
      break;
  }
  return c;
}

void validate(const SearchConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.max_value < 4) fail("max value must be at least 4");
  if (bit_length(c.max_value) > kMaxSearchBits + 1 ||
      (bit_length(c.max_value) == kMaxSearchBits + 1 && c.max_value != (u128{1} << kMaxSearchBits))) {
    fail("max value exceeds 2^" + std::to_string(kMaxSearchBits));
  }
  if (c.f_bound <= 0) fail("F bound must be positive");
  if (c.f_bound > 1) fail("F bound must not exceed 1");
  if (c.q_bound && *c.q_bound <= 0) fail("Q bound must be positive");
  if (c.m_bound && *c.m_bound < 0) fail("M bound must be nonnegative");
  if (c.min_exp < 2 || c.min_exp > c.max_exp) fail("need 2 <= min-exp <= max-exp");
  if (c.degree_min < 1 || c.degree_min > c.degree_max || c.degree_max > 127) {
    fail("need 1 <= degree-min <= degree-max <= 127");
  }
  if (c.max_spread && *c.max_spread < c.min_spread) fail("max spread below min spread");
  for (uint64_t k : {c.coeff_a, c.coeff_b, c.coeff_c}) {
    if (k < 1 || k > 64) fail("coefficients must lie in [1, 64]");
  }
  if (c.mode != Mode::fermat_catalan && (c.coeff_a != 1 || c.coeff_b != 1 || c.coeff_c != 1)) {
    fail("coefficients are only supported in fc mode");
  }
  switch (c.mode) {
    case Mode::nonmaxgcd3:
      if (c.degree_min != 3 || c.degree_max != 3) fail("nonmaxgcd3 fixes the degree at 3");
      if (c.min_spread < 1) fail("nonmaxgcd3 requires spread >= 1");
      break;
    case Mode::maxgcd_spread1:
      if (!c.max_spread || *c.max_spread > 1) fail("maxgcd-spread1 requires max spread <= 1");
      break;
    case Mode::gbtz:
      if (!c.require_coprime) fail("gbtz requires coprime x, y");
      break;
    case Mode::pillai:
      if (c.pillai_difference == 0) fail("pillai difference B must be positive");
      break;
    default:
      break;
  }
}

nlohmann::json config_to_json(const SearchConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["max_value"] = to_string(c.max_value);
  j["min_exp"] = c.min_exp;
  j["max_exp"] = c.max_exp;
  j["sign"] = to_string(c.sign);
  j["require_coprime"] = c.require_coprime;
  j["f_bound"] = rational_text(c.f_bound);
  j["f_strict"] = c.f_strict;
  j["q_bound"] = c.q_bound ? json(rational_text(*c.q_bound)) : json(nullptr);
  j["m_bound"] = c.m_bound ? json(rational_text(*c.m_bound)) : json(nullptr);
  j["degree_min"] = c.degree_min;
  j["degree_max"] = c.degree_max;
  j["min_spread"] = c.min_spread;
  j["max_spread"] = c.max_spread ? json(*c.max_spread) : json(nullptr);
  j["coefficients"] = {c.coeff_a, c.coeff_b, c.coeff_c};
  j["pillai_difference"] = c.pillai_difference;
  j["survey_base"] = to_string(c.survey_base);
  return j;
}

SearchConfig config_from_json(const nlohmann::json& j, SearchConfig c) {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  try {
    if (j.contains("mode")) {
      auto m = parse_mode(j.at("mode").get<std::string>());
      if (!m) fail("unknown mode");
      c.mode = *m;
    }
    if (j.contains("max_bits")) {
      const auto bits = j.at("max_bits").get<unsigned>();
      if (bits > kMaxSearchBits) fail("max_bits exceeds " + std::to_string(kMaxSearchBits));
      c.max_value = u128{1} << bits;
    }
    if (j.contains("max_value")) c.max_value = parse_u128(j.at("max_value").get<std::string>());
    if (j.contains("min_exp")) c.min_exp = j.at("min_exp").get<unsigned>();
    if (j.contains("max_exp")) c.max_exp = j.at("max_exp").get<unsigned>();
    if (j.contains("sign")) {
      auto s = parse_sign_mode(j.at("sign").get<std::string>());
      if (!s) fail("unknown sign");
      c.sign = *s;
    }
    if (j.contains("require_coprime")) c.require_coprime = j.at("require_coprime").get<bool>();
    if (j.contains("f_bound")) c.f_bound = parse_rational(j.at("f_bound").get<std::string>());
    if (j.contains("f_strict")) c.f_strict = j.at("f_strict").get<bool>();
    auto optional_rational = [&](const char* key, std::optional<Rational>& slot) {
      if (!j.contains(key)) return;
      if (j.at(key).is_null()) {
        slot.reset();
      } else {
        slot = parse_rational(j.at(key).get<std::string>());
      }
    };
    optional_rational("q_bound", c.q_bound);
    optional_rational("m_bound", c.m_bound);
    if (j.contains("degree_min")) c.degree_min = j.at("degree_min").get<unsigned>();
    if (j.contains("degree_max")) c.degree_max = j.at("degree_max").get<unsigned>();
    if (j.contains("min_spread")) c.min_spread = j.at("min_spread").get<uint64_t>();
    if (j.contains("max_spread")) {
      if (j.at("max_spread").is_null()) {
        c.max_spread.reset();
      } else {
        c.max_spread = j.at("max_spread").get<uint64_t>();
      }
    }
    if (j.contains("coefficients")) {
      const auto k = j.at("coefficients").get<std::vector<uint64_t>>();
      if (k.size() != 3) fail("coefficients must have three entries");
      c.coeff_a = k[0];
      c.coeff_b = k[1];
      c.coeff_c = k[2];
    }
    if (j.contains("pillai_difference")) c.pillai_difference = j.at("pillai_difference").get<uint64_t>();
    if (j.contains("survey_base")) {
      auto b = parse_survey_base(j.at("survey_base").get<std::string>());
      if (!b) fail("unknown survey_base");
      c.survey_base = *b;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  } catch (const std::out_of_range& e) {
    fail(e.what());
  }
  return c;
}

std::string config_digest(const SearchConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<PublishedBound>& published_fc_bounds() {
  static const std::vector<PublishedBound> bounds{{2, 2, 71}, {3, 3, 80}, {4, 4, 100}, {5, 113, 113}};
  return bounds;
}

const std::vector<PublishedBound>& published_product_bounds() {
  static const std::vector<PublishedBound> bounds{{3, 3, 80}, {4, 4, 100}, {5, 21, 113}};
  return bounds;
}

}  // namespace fcp
