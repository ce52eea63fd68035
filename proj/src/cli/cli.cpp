#include "fcp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "fcp/abc.hpp"
#include "fcp/families.hpp"

namespace fcp::cli {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson ordered(const json& j) { return ojson::parse(j.dump()); }

Natural parse_natural(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw UsageError("not a non-negative integer: '" + text + "'");
  }
  return Natural(text);
}

Rational parse_rat(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("not a rational number: '" + text + "'");
  }
}

std::string rat_text(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::pair<unsigned, unsigned> parse_degree(const std::string& text) {
  auto number = [&](const std::string& part) {
    if (part.empty() || part.size() > 4 ||
        !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw UsageError("bad --degree '" + text + "', expected N or A..B");
    }
    return static_cast<unsigned>(std::stoul(part));
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const unsigned d = number(text);
    return {d, d};
  }
  return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

/// Everything one invocation produces besides its exit code.
class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err), started_(utc_now()) {}

  std::ostream& err() { return err_; }

  std::string command;
  json config = json::object();
  std::string digest;
  std::optional<std::string> output;
  std::optional<std::string> manifest_path;
  std::optional<std::string> input;
  std::optional<std::string> checkpoint;
  ojson totals = ojson::object();
  ojson details = ojson::object();
  std::vector<std::string> findings;

  void add(const ojson& line) { lines_.push_back(line.dump()); }
  std::size_t record_count() const { return lines_.size(); }

  void write_log() {
    if (digest.empty()) digest = json_digest(config);
    ojson header;
    header["format"] = kLogFormat;
    header["version"] = kLogVersion;
    header["command"] = command;
    header["config"] = ordered(config);
    header["config_digest"] = digest;
    std::string text = header.dump() + '\n';
    for (const auto& l : lines_) text += l + '\n';
    if (output) {
      write_file(*output, text);
    } else {
      out_ << text;
      out_.flush();
    }
    log_written_ = true;
  }

  int finish(int code, const std::vector<std::string>& argv) {
    ojson m;
    m["format"] = kManifestFormat;
    m["version"] = kLogVersion;
    m["subcommand"] = command;
    m["argv"] = argv;
    m["config"] = ordered(config);
    m["config_digest"] = digest.empty() ? json_digest(config) : digest;
    m["input"] = input ? ojson(*input) : ojson(nullptr);
    m["output"] = output ? ojson(*output) : ojson(nullptr);
    m["checkpoint"] = checkpoint ? ojson(*checkpoint) : ojson(nullptr);
    m["log_written"] = log_written_;
    m["started_at"] = started_;
    m["finished_at"] = utc_now();
    if (!totals.contains("records")) totals["records"] = lines_.size();
    if (!totals.contains("errors")) totals["errors"] = 0;
    m["totals"] = totals;
    m["findings"] = findings;
    if (!details.empty()) m["details"] = details;
    m["exit_code"] = code;

    const std::string text = m.dump(2) + '\n';
    std::optional<std::string> path = manifest_path;
    if (!path && output) path = *output + ".manifest.json";
    try {
      if (path) {
        write_file(*path, text);
      } else {
        err_ << text;
      }
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
    return code;
  }

 private:
  static void write_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream f(tmp, std::ios::trunc | std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + tmp);
      f << text;
      if (!f.flush()) throw std::runtime_error("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  std::ostream& out_;
  std::ostream& err_;
  std::string started_;
  std::vector<std::string> lines_;
  bool log_written_ = false;
};

// ---------------------------------------------------------------------------
// Line builders

ojson term_json(const SolutionTerm& t) {
  ojson j;
  j["value"] = t.value.get_str();
  auto f = ojson::array();
  for (const auto& x : t.witness.factors) f.push_back(x.get_str());
  j["factors"] = std::move(f);
  j["degree"] = t.witness.degree;
  j["spread"] = t.witness.spread.get_str();
  if (t.power) j["power"] = {t.power->base.get_str(), t.power->exponent};
  if (t.wildcard_one) j["wildcard_one"] = true;
  return j;
}

ojson known_line(const KnownSolution& s) {
  ojson j;
  j["type"] = "known-solution";
  j["source"] = s.source;
  j["sign"] = to_string(s.sign);
  auto terms = ojson::array();
  for (const auto& t : s.terms) terms.push_back(term_json(t));
  j["terms"] = std::move(terms);
  j["weight"] = rat_text(s.weight());
  j["maxgcd"] = s.maxgcd();
  return j;
}

ojson solution_line(const SolutionRecord& r) {
  ojson j;
  j["type"] = "solution";
  const ojson body = record_to_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string mode;
  std::optional<unsigned> max_bits;
  std::optional<std::string> max_value;
  std::optional<std::string> config_path;
  std::optional<std::string> checkpoint;
  bool resume = false;
  std::size_t chunks = 16;
  std::optional<std::size_t> stop_after;
  std::optional<std::string> sign;
  std::optional<std::string> f_bound;
  bool f_inclusive = false;
  std::optional<std::string> q_bound;
  std::optional<std::string> m_bound;
  std::optional<unsigned> min_exp;
  std::optional<unsigned> max_exp;
  std::optional<std::string> degree;
  std::optional<uint64_t> min_spread;
  std::optional<std::string> max_spread;
  std::optional<bool> coprime;
  std::optional<std::string> coefficients;
  std::optional<uint64_t> difference;
  std::optional<std::string> survey_base;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  try {
    json j = json::parse(in);
    // A manifest or a result-log header can be used directly.
    if (j.is_object() && j.contains("config") && j.at("config").is_object()) return j.at("config");
    if (!j.is_object()) throw UsageError("config file " + path + " is not a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

SearchConfig resolve_config(const SearchArgs& a) {
  const auto mode = parse_mode(a.mode);
  if (!mode) throw UsageError("unknown search mode '" + a.mode + "'");
  SearchConfig cfg = default_config(*mode);
  if (a.config_path) {
    cfg = config_from_json(read_json_file(*a.config_path), cfg);
    if (cfg.mode != *mode) {
      throw UsageError(std::string("config file is for mode ") + to_string(cfg.mode) + ", not " +
                       to_string(*mode));
    }
  }
  if (a.max_bits) {
    if (*a.max_bits > kMaxSearchBits) {
      throw ConfigError("--max-bits exceeds " + std::to_string(kMaxSearchBits));
    }
    cfg.max_value = u128{1} << *a.max_bits;
  }
  if (a.max_value) {
    try {
      cfg.max_value = parse_u128(*a.max_value);
    } catch (const std::exception&) {
      throw UsageError("bad --max-value '" + *a.max_value + "'");
    }
  }
  if (a.sign) {
    const auto s = parse_sign_mode(*a.sign);
    if (!s) throw UsageError("bad --sign '" + *a.sign + "', expected plus, minus or both");
    cfg.sign = *s;
  }
  if (a.f_bound) cfg.f_bound = parse_rat(*a.f_bound);
  if (a.f_inclusive) cfg.f_strict = false;
  if (a.q_bound) cfg.q_bound = parse_rat(*a.q_bound);
  if (a.m_bound) cfg.m_bound = parse_rat(*a.m_bound);
  if (a.min_exp) cfg.min_exp = *a.min_exp;
  if (a.max_exp) cfg.max_exp = *a.max_exp;
  if (a.degree) std::tie(cfg.degree_min, cfg.degree_max) = parse_degree(*a.degree);
  if (a.min_spread) cfg.min_spread = *a.min_spread;
  if (a.max_spread) {
    if (*a.max_spread == "none") {
      cfg.max_spread.reset();
    } else {
      cfg.max_spread = static_cast<uint64_t>(parse_natural(*a.max_spread).get_ui());
    }
  }
  if (a.coprime) cfg.require_coprime = *a.coprime;
  if (a.coefficients) {
    std::vector<uint64_t> k;
    std::stringstream ss(*a.coefficients);
    std::string part;
    while (std::getline(ss, part, ',')) k.push_back(parse_natural(part).get_ui());
    if (k.size() != 3) throw UsageError("--coefficients expects A,B,C");
    cfg.coeff_a = k[0];
    cfg.coeff_b = k[1];
    cfg.coeff_c = k[2];
  }
  if (a.difference) cfg.pillai_difference = *a.difference;
  if (a.survey_base) {
    const auto b = parse_survey_base(*a.survey_base);
    if (!b) throw UsageError("bad --survey-base '" + *a.survey_base + "'");
    cfg.survey_base = *b;
  }
  validate(cfg);
  return cfg;
}

struct Triple {
  Natural lo, hi, z;
  Sign sign;
  bool operator<(const Triple& o) const {
    return std::tie(lo, hi, z, sign) < std::tie(o.lo, o.hi, o.z, o.sign);
  }
};

std::string describe(const Triple& t) {
  return t.hi.get_str() + (t.sign == Sign::plus ? " + " : " - ") + t.lo.get_str() + " = " + t.z.get_str();
}

Triple triple_of(const Natural& x, const Natural& y, const Natural& z, Sign sign, bool unordered) {
  if (unordered) return {std::min(x, y), std::max(x, y), z, sign};
  return {y, x, z, sign};
}

/// Records against the known catalog, restricted to the searched box.
void compare_catalog(Session& s, const std::vector<SolutionRecord>& records,
                     const std::vector<KnownSolution>& catalog, const Natural& bound, bool unordered,
                     bool report_missing) {
  std::set<Triple> expected, found;
  for (const auto& k : catalog) {
    if (std::any_of(k.terms.begin(), k.terms.end(), [&](const SolutionTerm& t) { return t.value > bound; })) {
      continue;
    }
    expected.insert(triple_of(k.terms[0].value, k.terms[1].value, k.terms[2].value,
                              unordered ? Sign::plus : k.sign, unordered));
  }
  for (const auto& r : records) {
    found.insert(triple_of(r.terms[0].value, r.terms[1].value, r.terms[2].value,
                           unordered ? Sign::plus : r.sign, unordered));
  }
  for (const auto& t : found) {
    if (!expected.count(t)) s.findings.push_back("not in the known catalog: " + describe(t));
  }
  if (report_missing) {
    for (const auto& t : expected) {
      if (!found.count(t)) s.findings.push_back("catalog solution not found: " + describe(t));
    }
  }
  s.details["catalog_expected"] = expected.size();
}

bool same_except(SearchConfig a, const SearchConfig& b, bool ignore_sign, bool ignore_max_exp) {
  a.max_value = b.max_value;
  if (ignore_sign) a.sign = b.sign;
  if (ignore_max_exp) a.max_exp = b.max_exp;
  return config_to_json(a) == config_to_json(b);
}

void judge_search(Session& s, const SearchConfig& cfg, const std::vector<SolutionRecord>& records) {
  const Natural bound = to_natural(cfg.max_value);
  switch (cfg.mode) {
    case Mode::fermat_catalan: {
      const bool comparable = same_except(default_config(cfg.mode), cfg, true, true) &&
                              cfg.max_value <= (u128{1} << published_fc_bounds().front().bits);
      s.details["catalog_comparable"] = comparable;
      if (comparable) compare_catalog(s, records, fermat_catalan_catalog(), bound, true, true);
      break;
    }
    case Mode::nonmaxgcd3: {
      const bool comparable = same_except(default_config(cfg.mode), cfg, false, false) &&
                              cfg.max_value <= (u128{1} << published_product_bounds().front().bits);
      s.details["catalog_comparable"] = comparable;
      compare_catalog(s, records, degree3_catalog(), bound, false, comparable);
      break;
    }
    case Mode::gbtz:
    case Mode::fp:
      for (const auto& r : records) {
        s.findings.push_back(std::string("counterexample: ") +
                             describe(triple_of(r.terms[0].value, r.terms[1].value, r.terms[2].value,
                                                r.sign, false)));
      }
      break;
    case Mode::maxgcd_spread1:
      for (const auto& r : records) {
        if (!r.standard.value_or(false)) {
          s.findings.push_back("non-standard: " + describe(triple_of(r.terms[0].value, r.terms[1].value,
                                                                       r.terms[2].value, r.sign, false)));
        }
      }
      break;
    case Mode::pillai:
    case Mode::survey:
      break;
  }
}

int run_search(Session& s, const SearchArgs& a, unsigned threads) {
  s.command = "search " + a.mode;
  const SearchConfig cfg = resolve_config(a);
  s.config = config_to_json(cfg);
  s.digest = config_digest(cfg);
  s.checkpoint = a.checkpoint;
  if (a.chunks == 0) throw UsageError("--chunks must be positive");
  if (a.resume && !a.checkpoint) throw UsageError("--resume needs --checkpoint");

  ChunkOptions opt;
  opt.chunk_count = a.chunks;
  opt.threads = threads;
  if (a.checkpoint) opt.checkpoint = *a.checkpoint;
  opt.resume = a.resume;
  opt.stop_after = a.stop_after;
  RunOutcome o;
  try {
    o = run_chunked(cfg, opt);
  } catch (const CheckpointMismatch& e) {
    throw UsageError(e.what());
  }

  s.totals["chunks"] = o.chunk_count;
  s.totals["chunks_completed"] = o.chunks_completed;
  s.totals["resumed_from"] = o.resumed_from;
  s.totals["candidates"] = o.work_units;
  s.totals["records"] = o.records.size();
  if (o.interrupted) {
    s.err() << "interrupted after " << o.chunks_completed << " of " << o.chunk_count
            << " chunks; rerun with --resume to continue\n";
    s.details["interrupted"] = true;
    return kExitRuntime;
  }

  for (const auto& r : o.records) s.add(solution_line(r));
  if (cfg.mode == Mode::survey) {
    for (const auto& [key, count] : survey_counts(cfg, o.records)) {
      ojson j;
      j["type"] = "survey-cell";
      j["n"] = std::get<0>(key);
      j["m"] = std::get<1>(key);
      j["d"] = std::get<2>(key);
      j["count"] = count;
      s.add(j);
    }
  }
  judge_search(s, cfg, o.records);
  s.write_log();
  for (const auto& f : s.findings) s.err() << f << '\n';
  return s.findings.empty() ? kExitOk : kExitFindings;
}

// ---------------------------------------------------------------------------
// decompose, factor, radical

int run_decompose(Session& s, const std::string& value_text, const std::string& degree,
                  uint64_t max_spread) {
  s.command = "decompose";
  const Natural value = parse_natural(value_text);
  if (value == 0) throw UsageError("decompose needs a positive value");
  const auto [dmin, dmax] = parse_degree(degree);
  if (dmin == 0 || dmin > dmax) throw UsageError("bad --degree range");
  s.config = {{"value", value.get_str()}, {"degree_min", dmin}, {"degree_max", dmax},
              {"max_spread", max_spread}};
  for (unsigned d = dmin; d <= dmax; ++d) {
    for (const auto& p : decompose(value, d, max_spread)) {
      ojson j;
      j["type"] = "decomposition";
      j["value"] = p.value.get_str();
      j["degree"] = p.degree;
      auto f = ojson::array();
      for (const auto& x : p.factors) f.push_back(x.get_str());
      j["factors"] = std::move(f);
      j["base"] = p.base.get_str();
      j["spread"] = p.spread.get_str();
      s.add(j);
    }
  }
  s.write_log();
  return kExitOk;
}

int run_factor(Session& s, const std::vector<std::string>& values, bool radical_only) {
  s.command = radical_only ? "radical" : "factor";
  std::vector<Natural> ns;
  for (const auto& v : values) {
    Natural n = parse_natural(v);
    if (n == 0) throw UsageError("0 has no factorization");
    ns.push_back(std::move(n));
  }
  auto list = json::array();
  for (const auto& n : ns) list.push_back(n.get_str());
  s.config = {{"values", list}};
  for (const auto& n : ns) {
    ojson j;
    const Factorization f = factorize(n);
    if (radical_only) {
      j["type"] = "radical";
      j["n"] = n.get_str();
    } else {
      j["type"] = "factorization";
      j["n"] = n.get_str();
      auto fs = ojson::array();
      for (const auto& pp : f) fs.push_back({pp.prime.get_str(), pp.exponent});
      j["factors"] = std::move(fs);
    }
    j["radical"] = radical(f).get_str();
    s.add(j);
  }
  s.write_log();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen, catalog

unsigned long param(const std::vector<std::string>& p, std::size_t i) {
  const Natural n = parse_natural(p.at(i));
  if (!n.fits_ulong_p()) throw UsageError("parameter too large: " + p.at(i));
  return n.get_ui();
}

int run_gen(Session& s, const std::string& family, const std::vector<std::string>& p) {
  s.command = "gen " + family;
  auto need = [&](std::size_t k, const char* names) {
    if (p.size() != k) throw UsageError("gen " + family + " expects " + names);
  };
  try {
    if (family == "standard") {
      need(3, "V W N");
      const auto v = param(p, 0), w = param(p, 1), n = param(p, 2);
      s.config = {{"v", v}, {"w", w}, {"n", n}};
      const auto out = gen_standard(v, w, static_cast<unsigned>(n));
      if (const auto* ok = std::get_if<StandardSolution>(&out)) {
        ojson j = known_line(ok->solution);
        j["params"] = {{"v", v}, {"w", w}, {"n", n}};
        s.add(j);
      } else {
        const auto& f = std::get<IdentityFailure>(out);
        ojson j;
        j["type"] = "identity-failure";
        j["family"] = "standard";
        j["params"] = {{"v", v}, {"w", w}, {"n", n}};
        j["lhs"] = f.lhs.get_str();
        j["printed_rhs"] = f.printed_rhs.get_str();
        j["reason"] = f.reason;
        s.add(j);
        s.err() << "identity fails for v = " << v << ": " << f.reason << '\n';
      }
    } else if (family == "maxgcd-trivial") {
      need(2, "X P");
      const auto x = param(p, 0), pe = param(p, 1);
      s.config = {{"x", x}, {"p", pe}};
      const auto out = gen_maxgcd_trivial(x, static_cast<unsigned>(pe));
      ojson j = known_line(out.solution);
      j["params"] = s.config;
      j["family_weight"] = rat_text(out.weight);
      s.add(j);
    } else if (family == "pythagorean") {
      need(3, "A N M");
      const auto a = param(p, 0), n = param(p, 1), m = param(p, 2);
      s.config = {{"a", a}, {"n", n}, {"m", m}};
      const auto out = gen_pythagorean(a, n, m);
      ojson j = known_line(out.solution);
      j["params"] = s.config;
      j["congruences"] = {out.congruences.alpha, out.congruences.beta, out.congruences.gamma};
      j["exponents"] = out.exponents;
      j["non_maxgcd"] = out.non_maxgcd;
      j["family_weight"] = rat_text(out.weight);
      j["weight_below_one"] = out.weight_below_one;
      s.add(j);
    } else if (family == "counterexample") {
      need(3, "A ALPHA D");
      const auto a = param(p, 0), alpha = param(p, 1), d = param(p, 2);
      s.config = {{"a", a}, {"alpha", alpha}, {"extra_degree", d}};
      const auto out = gen_counterexample_family(a, alpha, static_cast<unsigned>(d));
      ojson j = known_line(out.solution);
      j["params"] = s.config;
      j["naive_weight"] = rat_text(out.naive_weight);
      j["family_weight"] = rat_text(out.weight);
      j["naive_admits"] = out.naive_admits;
      s.add(j);
    } else {
      throw UsageError("unknown generator '" + family + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  s.write_log();
  return kExitOk;
}

int run_catalog(Session& s, const std::string& which, std::optional<unsigned> max_bits) {
  s.command = "catalog " + which;
  const std::vector<KnownSolution>* cat = nullptr;
  if (which == "fc" || which == "fermat-catalan") {
    cat = &fermat_catalan_catalog();
  } else if (which == "degree3") {
    cat = &degree3_catalog();
  } else {
    throw UsageError("unknown catalog '" + which + "', expected fc or degree3");
  }
  s.config = {{"catalog", which}, {"max_bits", max_bits ? json(*max_bits) : json(nullptr)}};
  std::optional<Natural> bound;
  if (max_bits) {
    bound = 1;
    mpz_mul_2exp(bound->get_mpz_t(), bound->get_mpz_t(), *max_bits);
  }
  for (const auto& k : *cat) {
    if (bound && std::any_of(k.terms.begin(), k.terms.end(),
                             [&](const SolutionTerm& t) { return t.value > *bound; })) {
      continue;
    }
    s.add(known_line(k));
  }
  s.write_log();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// abc

std::string quality_text(long double q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", q);
  return buf;
}

int run_abc_check(Session& s, const std::string& file, const std::string& format,
                  const std::vector<std::string>& classic) {
  s.command = "abc check";
  s.input = file;
  TripleFormat fmt = TripleFormat::auto_detect;
  if (format == "two") {
    fmt = TripleFormat::two_column;
  } else if (format == "three") {
    fmt = TripleFormat::three_column;
  } else if (format != "auto") {
    throw UsageError("bad --format '" + format + "', expected auto, two or three");
  }
  std::vector<std::pair<Rational, Rational>> params;
  auto cl = json::array();
  for (const auto& c : classic) {
    const auto colon = c.find(':');
    const Rational eps = parse_rat(c.substr(0, colon));
    const Rational k = colon == std::string::npos ? Rational(1) : parse_rat(c.substr(colon + 1));
    if (eps <= 0 || k <= 0) throw UsageError("--classic needs EPS > 0 and C > 0");
    params.emplace_back(eps, k);
    cl.push_back({{"epsilon", rat_text(eps)}, {"constant", rat_text(k)}});
  }
  s.config = {{"format", format}, {"classic", cl}};

  std::ifstream fin;
  std::istream* in = &std::cin;
  if (file != "-") {
    fin.open(file);
    if (!fin) throw std::runtime_error("cannot read " + file);
    in = &fin;
  }
  const TripleParseResult parsed = parse_triples(*in, fmt);
  std::size_t failures = 0;
  for (const auto& t : parsed.triples) {
    const AbcReport rep = check_mine(t);
    ojson j;
    j["type"] = "abc-report";
    j["line"] = t.line;
    j["a"] = t.a.get_str();
    j["b"] = t.b.get_str();
    j["c"] = t.c.get_str();
    j["rad_ab"] = rep.rad_ab.get_str();
    j["rad_ac"] = rep.rad_ac.get_str();
    j["rad_bc"] = rep.rad_bc.get_str();
    j["rad_abc"] = rep.rad_abc.get_str();
    j["max_rad"] = rep.max_rad.get_str();
    j["mine_pass"] = rep.mine_pass;
    auto cj = ojson::array();
    for (const auto& [eps, k] : params) {
      cj.push_back({{"epsilon", rat_text(eps)},
                    {"constant", rat_text(k)},
                    {"verdict", to_string(check_classic(t.c, rep.rad_abc, eps, k))}});
    }
    if (!params.empty()) j["classic"] = std::move(cj);
    j["quality"] = t.c >= 2 ? ojson(quality_text(quality(t))) : ojson(nullptr);
    s.add(j);
    if (!rep.mine_pass) {
      ++failures;
      s.findings.push_back("7/8 bound fails at line " + std::to_string(t.line) + ": " + t.a.get_str() +
                           " + " + t.b.get_str() + " = " + t.c.get_str());
    }
  }
  for (const auto& e : parsed.errors) {
    s.err() << file << ':' << e.line << ": " << e.message << '\n';
    s.findings.push_back("input line " + std::to_string(e.line) + ": " + e.message);
  }
  s.totals["triples"] = parsed.triples.size();
  s.totals["candidates"] = parsed.triples.size();
  s.totals["violations"] = failures;
  s.totals["errors"] = parsed.errors.size();
  s.write_log();
  return s.findings.empty() ? kExitOk : kExitFindings;
}

int run_abc_scan(Session& s, uint64_t limit, unsigned threads, const std::optional<std::string>& kernel,
                 bool count_hq, uint64_t budget_mib) {
  s.command = "abc scan";
  if (limit < 3 || limit > kMaxScanLimit) {
    throw UsageError("--limit must lie in [3, " + std::to_string(kMaxScanLimit) + "]");
  }
  ScanOptions opt;
  opt.limit = limit;
  opt.threads = threads;
  opt.count_high_quality = count_hq;
  opt.memory_budget = static_cast<std::size_t>(budget_mib) << 20;
  if (kernel) {
    const auto k = simd::parse_kernel(*kernel);
    if (!k) throw UsageError("unknown kernel '" + *kernel + "'");
    if (!simd::kernel_available(*k)) throw UsageError("kernel " + *kernel + " is not available here");
    opt.kernel = *k;
  }
  s.config = {{"limit", limit}, {"count_high_quality", count_hq}};
  const ScanResult r = brute_force_scan(opt);
  for (const auto& v : r.violations) {
    ojson j;
    j["type"] = "abc-violation";
    j["a"] = v.a.get_str();
    j["b"] = v.b.get_str();
    j["c"] = v.c.get_str();
    s.add(j);
    s.findings.push_back("violation: " + v.a.get_str() + " + " + v.b.get_str() + " = " + v.c.get_str());
  }
  if (r.high_quality) {
    ojson j;
    j["type"] = "abc-scan-summary";
    j["limit"] = limit;
    j["high_quality"] = *r.high_quality;
    s.add(j);
  }
  s.totals["c_values_scanned"] = r.c_values_scanned;
  s.totals["candidates"] = r.candidates;
  s.totals["violations"] = r.violations.size();
  s.details["kernel"] = simd::to_string(r.kernel);
  s.details["threads"] = threads;
  s.write_log();
  return r.violations.empty() ? kExitOk : kExitFindings;
}

int run_abc_filter(Session& s, uint64_t limit, const std::string& q, const std::string& eps_text) {
  s.command = "abc filter";
  if (limit < 2) throw UsageError("--limit must be at least 2");
  const Rational qb = parse_rat(q), eps = parse_rat(eps_text);
  if (qb <= 0 || eps <= 0) throw UsageError("--q-bound and --epsilon must be positive");
  s.config = {{"limit", limit}, {"q_bound", rat_text(qb)}, {"epsilon", rat_text(eps)}};
  for (const auto& h : prop_abc2_filter(limit, qb, eps)) {
    ojson j;
    j["type"] = "abc2-hit";
    j["a"] = h.a.get_str();
    j["b"] = h.b.get_str();
    j["c"] = h.c.get_str();
    j["gcd"] = h.gcd.get_str();
    j["gcd_ratio"] = rat_text(h.gcd_ratio);
    j["rad_abc"] = h.rad_abc.get_str();
    j["verdict"] = to_string(h.verdict);
    s.add(j);
  }
  s.write_log();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify-log

int run_verify(Session& s, const std::string& file) {
  s.command = "verify-log";
  s.input = file;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  s.config = {{"log", std::filesystem::path(file).filename().string()}};

  std::size_t failures = 0;
  auto fail = [&](std::size_t line_no, const std::vector<std::string>& problems) {
    ++failures;
    ojson j;
    j["type"] = "verification";
    j["line"] = line_no;
    j["problems"] = problems;
    s.add(j);
    for (const auto& p : problems) s.err() << file << ':' << line_no << ": " << p << '\n';
  };

  json header;
  const auto first_nl = text.find('\n');
  try {
    header = json::parse(text.substr(0, first_nl));
  } catch (const json::exception& e) {
    fail(1, {std::string("header is not JSON: ") + e.what()});
  }
  std::size_t checked = 0;
  if (failures == 0) {
    std::vector<std::string> hp;
    if (header.value("format", "") != kLogFormat) hp.push_back("not an fcp result log");
    if (header.value("version", 0) != kLogVersion) hp.push_back("unsupported log version");
    if (!header.contains("config") || header.value("config_digest", "") != json_digest(header["config"])) {
      hp.push_back("config digest does not match the header config");
    }
    if (!hp.empty()) fail(1, hp);
  }
  if (failures == 0) {
    std::size_t line_no = 1;
    for (const auto& line : record_section(text)) {
      ++line_no;
      ++checked;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        fail(line_no, {std::string("not JSON: ") + e.what()});
        continue;
      }
      auto problems = verify_line(j, header);
      if (!problems.empty()) fail(line_no, problems);
    }
  }
  ojson summary;
  summary["type"] = "verification-summary";
  summary["lines"] = checked;
  summary["failures"] = failures;
  s.add(summary);
  s.totals["candidates"] = checked;
  s.totals["errors"] = failures;
  if (failures) s.findings.push_back(std::to_string(failures) + " line(s) failed to re-verify");
  s.write_log();
  return failures ? kExitFindings : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session session(out, err);

  CLI::App app{"Bounded searches for generalized Fermat-Catalan solutions and abc checks", "fcp"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> output, manifest;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--output,-o", output, "Result log path (default: stdout)");
  app.add_option("--manifest", manifest, "Manifest path (default: OUTPUT.manifest.json, else stderr)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Exhaustive bounded search");
  search->add_option("mode", sa.mode, "fc|gbtz|fp|nonmaxgcd3|maxgcd-spread1|pillai|survey")->required();
  search->add_option("--max-bits", sa.max_bits, "Bound M = 2^N on every term");
  search->add_option("--max-value", sa.max_value, "Bound M given exactly");
  search->add_option("--config", sa.config_path, "JSON config (a manifest or log header also works)");
  search->add_option("--checkpoint", sa.checkpoint, "Checkpoint file written after every chunk");
  search->add_flag("--resume", sa.resume, "Continue from --checkpoint");
  search->add_option("--chunks", sa.chunks, "Number of chunks")->capture_default_str();
  search->add_option("--stop-after", sa.stop_after, "Stop after committing this many chunks");
  search->add_option("--sign", sa.sign, "plus|minus|both");
  search->add_option("--f-bound", sa.f_bound, "Weight bound F");
  search->add_flag("--f-inclusive", sa.f_inclusive, "Admit weight == F");
  search->add_option("--q-bound", sa.q_bound, "Bound on gcd/rad(gcd)");
  search->add_option("--m-bound", sa.m_bound, "Bound on spread^2/base");
  search->add_option("--min-exp", sa.min_exp, "Smallest exponent");
  search->add_option("--max-exp", sa.max_exp, "Largest exponent (fc: cap on the smallest)");
  search->add_option("--degree", sa.degree, "Product degree N or A..B");
  search->add_option("--min-spread", sa.min_spread, "Smallest product spread");
  search->add_option("--max-spread", sa.max_spread, "Largest product spread, or none");
  search->add_flag("--coprime,!--no-coprime", sa.coprime, "Require coprime terms");
  search->add_option("--coefficients", sa.coefficients, "A,B,C for A x + B y = C z (fc)");
  search->add_option("--difference", sa.difference, "Pillai difference B");
  search->add_option("--survey-base", sa.survey_base, "nonmaxgcd|gbtz");

  std::string dvalue, ddegree = "1";
  uint64_t dspread = 0;
  auto* dec = app.add_subcommand("decompose", "Products of a given degree and bounded spread");
  dec->add_option("value", dvalue)->required();
  dec->add_option("--degree", ddegree, "N or A..B")->required();
  dec->add_option("--max-spread", dspread)->capture_default_str();

  std::vector<std::string> gen_params;
  auto* gen = app.add_subcommand("gen", "Constructive solution families");
  gen->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> families{
      {"standard", "V W N"},
      {"maxgcd-trivial", "X P"},
      {"pythagorean", "A N M"},
      {"counterexample", "A ALPHA D"}};
  for (const auto& [name, usage] : families) {
    gen->add_subcommand(name, "Parameters: " + usage)->add_option("params", gen_params)->required();
  }

  std::string catalog_name;
  std::optional<unsigned> catalog_bits;
  auto* cat = app.add_subcommand("catalog", "Known solutions");
  cat->add_option("which", catalog_name, "fc|degree3")->required();
  cat->add_option("--max-bits", catalog_bits, "Only entries with every term below 2^N");

  auto* abc = app.add_subcommand("abc", "abc checks");
  abc->require_subcommand(1);
  std::string check_file, check_format = "auto";
  std::vector<std::string> classic;
  auto* check = abc->add_subcommand("check", "Check triples from a file");
  check->add_option("file", check_file, "Input file, - for stdin")->required();
  check->add_option("--format", check_format, "auto|two|three")->capture_default_str();
  check->add_option("--classic", classic, "EPS[:C] for c < C rad(abc)^(1+EPS)");
  uint64_t scan_limit = 0;
  std::optional<std::string> kernel;
  bool count_hq = false;
  uint64_t budget_mib = 2048;
  auto* scan = abc->add_subcommand("scan", "Exhaustive scan of every triple up to a limit");
  scan->add_option("--limit", scan_limit)->required();
  scan->add_option("--kernel", kernel, "scalar|avx2|neon");
  scan->add_flag("--count-high-quality", count_hq, "Also count triples with quality > 1");
  scan->add_option("--memory-budget-mib", budget_mib)->capture_default_str();
  uint64_t filter_limit = 0;
  std::string filter_q = "1", filter_eps;
  auto* filt = abc->add_subcommand("filter", "Pairs with a + b > rad(ab(a+b))^(1+EPS), gcd quality <= Q");
  filt->add_option("--limit", filter_limit)->required();
  filt->add_option("--q-bound", filter_q)->capture_default_str();
  filt->add_option("--epsilon", filter_eps)->required();

  std::string verify_file;
  auto* ver = app.add_subcommand("verify-log", "Re-verify every record of a result log");
  ver->add_option("file", verify_file)->required();

  std::vector<std::string> numbers;
  auto* fac = app.add_subcommand("factor", "Prime factorization");
  fac->add_option("n", numbers)->required();
  auto* rad = app.add_subcommand("radical", "Product of the distinct prime factors");
  rad->add_option("n", numbers)->required();

  std::vector<std::string> argv_copy(args.begin() + (args.empty() ? 0 : 1), args.end());
  try {
    std::vector<std::string> reversed(argv_copy.rbegin(), argv_copy.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    session.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    return session.finish(kExitUsage, argv_copy);
  }

  session.output = output;
  session.manifest_path = manifest;
  int code = kExitOk;
  try {
    if (*search) {
      code = run_search(session, sa, threads);
    } else if (*dec) {
      code = run_decompose(session, dvalue, ddegree, dspread);
    } else if (*gen) {
      code = run_gen(session, gen->get_subcommands().front()->get_name(), gen_params);
    } else if (*cat) {
      code = run_catalog(session, catalog_name, catalog_bits);
    } else if (*check) {
      code = run_abc_check(session, check_file, check_format, classic);
    } else if (*scan) {
      code = run_abc_scan(session, scan_limit, threads, kernel, count_hq, budget_mib);
    } else if (*filt) {
      code = run_abc_filter(session, filter_limit, filter_q, filter_eps);
    } else if (*ver) {
      code = run_verify(session, verify_file);
    } else if (*fac) {
      code = run_factor(session, numbers, false);
    } else if (*rad) {
      code = run_factor(session, numbers, true);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitRuntime;
  }
  return session.finish(code, argv_copy);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fcp::cli
