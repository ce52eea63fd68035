#include <algorithm>
#include <tuple>

#include "fcp/search.hpp"

namespace fcp {
namespace {

using ojson = nlohmann::ordered_json;

const Natural& largest(const SolutionRecord& r) {
  return r.sign == Sign::plus ? r.terms[2].value : r.terms[0].value;
}

const Natural& smallest(const SolutionRecord& r) {
  const Natural& a = r.terms[0].value;
  const Natural& b = r.terms[1].value;
  const Natural& c = r.terms[2].value;
  const Natural& ab = a < b ? a : b;
  return ab < c ? ab : c;
}

const char* kind_name(TermWitness::Kind k) {
  switch (k) {
    case TermWitness::Kind::one: return "one";
    case TermWitness::Kind::power: return "power";
    case TermWitness::Kind::product: return "product";
    case TermWitness::Kind::constant: return "constant";
  }
  return "?";
}

TermWitness::Kind parse_kind(const std::string& s) {
  if (s == "one") return TermWitness::Kind::one;
  if (s == "power") return TermWitness::Kind::power;
  if (s == "product") return TermWitness::Kind::product;
  if (s == "constant") return TermWitness::Kind::constant;
  throw std::invalid_argument("unknown term kind: " + s);
}

ojson power_json(const PowerRep& p) { return ojson::array({p.base.get_str(), p.exponent}); }

PowerRep power_from(const nlohmann::json& j) {
  return {Natural(j.at(0).get<std::string>()), j.at(1).get<unsigned>()};
}

ojson term_json(const TermWitness& t) {
  ojson j;
  j["value"] = t.value.get_str();
  j["kind"] = kind_name(t.kind);
  if (!t.powers.empty()) {
    ojson reps = ojson::array();
    for (const auto& p : t.powers) reps.push_back(power_json(p));
    j["powers"] = reps;
  }
  if (t.chosen) j["chosen"] = power_json(*t.chosen);
  if (t.product) {
    ojson f = ojson::array();
    for (const auto& x : t.product->factors) f.push_back(x.get_str());
    j["factors"] = f;
  }
  return j;
}

TermWitness term_from(const nlohmann::json& j) {
  TermWitness t;
  t.value = Natural(j.at("value").get<std::string>());
  t.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("powers")) {
    for (const auto& p : j.at("powers")) t.powers.push_back(power_from(p));
  }
  if (j.contains("chosen")) t.chosen = power_from(j.at("chosen"));
  if (j.contains("factors")) {
    std::vector<Natural> f;
    for (const auto& x : j.at("factors")) f.emplace_back(x.get<std::string>());
    t.product = analyze(std::move(f));
  }
  return t;
}

}  // namespace

bool canonical_less(const SolutionRecord& a, const SolutionRecord& b) {
  if (int c = cmp(largest(a), largest(b)); c != 0) return c < 0;
  if (int c = cmp(smallest(a), smallest(b)); c != 0) return c < 0;
  if (a.mode != b.mode) return a.mode < b.mode;
  if (a.sign != b.sign) return a.sign < b.sign;
  for (std::size_t i = 0; i < 3; ++i) {
    if (int c = cmp(a.terms[i].value, b.terms[i].value); c != 0) return c < 0;
  }
  return false;
}

bool same_triple(const SolutionRecord& a, const SolutionRecord& b) {
  return a.mode == b.mode && a.sign == b.sign && a.terms[0].value == b.terms[0].value &&
         a.terms[1].value == b.terms[1].value && a.terms[2].value == b.terms[2].value;
}

void normalize_records(std::vector<SolutionRecord>& records) {
  std::stable_sort(records.begin(), records.end(), canonical_less);
  std::vector<SolutionRecord> out;
  out.reserve(records.size());
  for (auto& r : records) {
    if (!out.empty() && same_triple(out.back(), r)) {
      auto& cells = out.back().cells;
      for (const auto& c : r.cells) {
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
      }
      continue;
    }
    out.push_back(std::move(r));
  }
  for (auto& r : out) {
    std::sort(r.cells.begin(), r.cells.end(), [](const SurveyCell& x, const SurveyCell& y) {
      return std::tie(x.n, x.m, x.d, x.spread) < std::tie(y.n, y.m, y.d, y.spread);
    });
  }
  records = std::move(out);
}

nlohmann::ordered_json record_to_json(const SolutionRecord& r) {
  ojson j;
  j["mode"] = to_string(r.mode);
  j["sign"] = to_string(r.sign);
  ojson terms = ojson::array();
  for (const auto& t : r.terms) terms.push_back(term_json(t));
  j["terms"] = terms;
  j["weight"] = r.weight.get_str();
  j["gcd"] = r.gcd.get_str();
  j["gcd_ratio"] = r.gcd_ratio.get_str();
  j["coprime"] = r.coprime;
  j["maxgcd"] = r.maxgcd;
  if (r.standard) j["standard"] = *r.standard;
  if (r.standard_witness) {
    j["standard_witness"] = {{"v", r.standard_witness->v.get_str()},
                             {"w", r.standard_witness->w.get_str()}};
  }
  if (!r.cells.empty()) {
    ojson cells = ojson::array();
    for (const auto& c : r.cells) cells.push_back(ojson::array({c.n, c.m, c.d, c.spread}));
    j["cells"] = cells;
  }
  return j;
}

SolutionRecord record_from_json(const nlohmann::json& j) {
  SolutionRecord r;
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown mode in record");
  r.mode = *mode;
  const auto sign = j.at("sign").get<std::string>();
  if (sign == "+") {
    r.sign = Sign::plus;
  } else if (sign == "-") {
    r.sign = Sign::minus;
  } else {
    throw std::invalid_argument("unknown sign in record: " + sign);
  }
  const auto& terms = j.at("terms");
  if (!terms.is_array() || terms.size() != 3) throw std::invalid_argument("record needs three terms");
  for (std::size_t i = 0; i < 3; ++i) r.terms[i] = term_from(terms.at(i));
  r.weight = parse_rational(j.at("weight").get<std::string>());
  r.gcd = Natural(j.at("gcd").get<std::string>());
  r.gcd_ratio = parse_rational(j.at("gcd_ratio").get<std::string>());
  r.coprime = j.at("coprime").get<bool>();
  r.maxgcd = j.at("maxgcd").get<bool>();
  if (j.contains("standard")) r.standard = j.at("standard").get<bool>();
  if (j.contains("standard_witness")) {
    const auto& w = j.at("standard_witness");
    r.standard_witness = StandardWitness{Natural(w.at("v").get<std::string>()),
                                         Natural(w.at("w").get<std::string>())};
  }
  if (j.contains("cells")) {
    for (const auto& c : j.at("cells")) {
      r.cells.push_back({c.at(0).get<unsigned>(), c.at(1).get<unsigned>(), c.at(2).get<unsigned>(),
                         c.at(3).get<uint64_t>()});
    }
  }
  return r;
}

}  // namespace fcp
