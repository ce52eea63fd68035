#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fcp/abc.hpp"
#include "fcp/cli.hpp"

namespace fcp::cli {
namespace {

using json = nlohmann::json;

struct Checker {
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

Natural nat(const json& j) { return Natural(j.get<std::string>()); }

Natural power_of(const Natural& b, unsigned e) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool is_prime_power_list(const json& factors, const Natural& n, Checker& ck) {
  Natural product = 1;
  Natural last = 0;
  for (const auto& f : factors) {
    const Natural p = nat(f.at(0));
    const auto e = f.at(1).get<unsigned>();
    ck.expect(p > last, "primes not strictly increasing");
    ck.expect(is_prime(p), p.get_str() + " is not prime");
    ck.expect(e >= 1, "zero exponent");
    product *= power_of(p, e);
    last = p;
  }
  ck.expect(product == n, "factorization does not multiply back to " + n.get_str());
  return ck.problems.empty();
}

void check_term(const TermWitness& t, std::size_t index, Checker& ck) {
  const std::string where = "term " + std::to_string(index) + ": ";
  switch (t.kind) {
    case TermWitness::Kind::one:
      ck.expect(t.value == 1, where + "kind one with value " + t.value.get_str());
      break;
    case TermWitness::Kind::power:
      ck.expect(!t.powers.empty(), where + "power without representations");
      for (const auto& p : t.powers) {
        ck.expect(power_of(p.base, p.exponent) == t.value,
                  where + p.base.get_str() + "^" + std::to_string(p.exponent) + " != value");
      }
      ck.expect(t.chosen.has_value(), where + "no chosen representation");
      if (t.chosen) {
        ck.expect(std::find(t.powers.begin(), t.powers.end(), *t.chosen) != t.powers.end(),
                  where + "chosen representation not listed");
      }
      break;
    case TermWitness::Kind::product:
      ck.expect(t.product.has_value(), where + "product without factors");
      if (t.product) ck.expect(t.product->value == t.value, where + "factors do not multiply to value");
      break;
    case TermWitness::Kind::constant:
      break;
  }
}

Rational recompute_weight(const SolutionRecord& r) {
  Rational w = 0;
  for (const auto& t : r.terms) {
    if (t.kind == TermWitness::Kind::power && t.chosen) {
      w += Rational(1, t.chosen->exponent);
    } else if (t.kind == TermWitness::Kind::product && t.product) {
      w += Rational(t.product->spread + 1, t.product->degree);
    }
  }
  w.canonicalize();
  return w;
}

void check_solution(const json& line, const json& header, Checker& ck) {
  SolutionRecord r;
  try {
    r = record_from_json(line);
  } catch (const std::exception& e) {
    ck.expect(false, std::string("malformed record: ") + e.what());
    return;
  }
  SearchConfig cfg = default_config(r.mode);
  if (header.contains("config") && header.at("config").is_object()) {
    cfg = config_from_json(header.at("config"), cfg);
  }
  ck.expect(cfg.mode == r.mode, "record mode differs from the log's config");

  for (std::size_t i = 0; i < 3; ++i) check_term(r.terms[i], i, ck);
  if (!ck.problems.empty()) return;

  const Natural& x = r.terms[0].value;
  const Natural& y = r.terms[1].value;
  const Natural& z = r.terms[2].value;
  const Natural bound = to_natural(cfg.max_value);
  for (const auto& t : r.terms) {
    if (t.kind != TermWitness::Kind::constant) {
      ck.expect(t.value <= bound, "term " + t.value.get_str() + " exceeds the bound");
    }
  }

  // Identity.
  if (r.mode == Mode::fermat_catalan) {
    const Natural lhs = Natural(cfg.coeff_a) * x + Natural(cfg.coeff_b) * y;
    ck.expect(lhs == Natural(cfg.coeff_c) * z, "A x + B y != C z");
  } else if (r.sign == Sign::plus) {
    ck.expect(x + y == z, "x + y != Z");
  } else {
    ck.expect(x - y == z, "x - y != Z");
  }

  // Derived quantities.
  // Pillai pairs are the two products X and X + B.
  const Natural& second = r.mode == Mode::pillai ? z : y;
  const GcdQuality q = gcd_quality(x, second);
  ck.expect(q.gcd == r.gcd, "gcd mismatch");
  ck.expect(q.ratio == r.gcd_ratio, "gcd ratio mismatch");
  const Natural& smaller = x < second ? x : second;
  ck.expect((q.gcd == smaller) == r.maxgcd, "maxgcd flag mismatch");
  Natural gxz, gyz;
  mpz_gcd(gxz.get_mpz_t(), x.get_mpz_t(), z.get_mpz_t());
  mpz_gcd(gyz.get_mpz_t(), y.get_mpz_t(), z.get_mpz_t());
  const bool coprime = r.mode == Mode::fermat_catalan ? (q.gcd == 1 && gxz == 1 && gyz == 1)
                                                      : q.gcd == 1;
  ck.expect(coprime == r.coprime, "coprime flag mismatch");
  if (cfg.q_bound) ck.expect(q.ratio <= *cfg.q_bound, "gcd ratio above Q");

  const Rational w = recompute_weight(r);
  ck.expect(w == r.weight, "weight mismatch: recomputed " + w.get_str());
  const bool admitted = cfg.f_strict ? w < cfg.f_bound : w <= cfg.f_bound;
  ck.expect(admitted, "weight " + w.get_str() + " not inside F = " + cfg.f_bound.get_str());

  auto exponent = [](const TermWitness& t) { return t.chosen ? t.chosen->exponent : 0u; };
  const auto* zp = r.terms[2].product ? &*r.terms[2].product : nullptr;
  const unsigned n = exponent(r.terms[0]), m = exponent(r.terms[1]);
  switch (r.mode) {
    case Mode::fermat_catalan: {
      if (cfg.require_coprime) ck.expect(coprime, "terms not pairwise coprime");
      unsigned least = 0;
      for (const auto& t : r.terms) {
        const unsigned e = exponent(t);
        if (e != 0) least = least == 0 ? e : std::min(least, e);
      }
      ck.expect(least != 0 && least <= cfg.max_exp, "smallest exponent above the cap");
      for (const auto& t : r.terms) {
        if (const unsigned e = exponent(t); e != 0) {
          ck.expect(e >= cfg.min_exp, "exponent below min-exp");
        }
      }
      break;
    }
    case Mode::gbtz:
      ck.expect(zp && zp->degree > 2 && zp->degree <= std::min(n, m), "degree outside 2 < d <= min(n, m)");
      ck.expect(q.gcd == 1, "x, y not coprime");
      break;
    case Mode::nonmaxgcd3:
      ck.expect(zp && zp->degree == 3 && zp->spread >= 1, "Z is not a degree-3 product of spread >= 1");
      ck.expect(!r.maxgcd, "maxgcd triple");
      break;
    case Mode::fp:
      ck.expect(zp && n == m && zp->degree == n, "exponents and degree differ");
      ck.expect(zp && zp->spread + 4 <= Natural(n), "spread above n - 4");
      ck.expect(!r.maxgcd, "maxgcd triple");
      break;
    case Mode::maxgcd_spread1: {
      ck.expect(zp && n == m && zp->degree == n && zp->spread <= 1, "not a degree-n spread <= 1 product");
      ck.expect(r.maxgcd, "not maxgcd");
      const Natural xb = r.terms[0].chosen->base, yb = r.terms[1].chosen->base;
      const auto w2 = xb >= yb ? is_standard(xb, yb, n, z, r.sign) : std::nullopt;
      ck.expect(r.standard.has_value() && *r.standard == w2.has_value(), "standard flag mismatch");
      break;
    }
    case Mode::survey:
      ck.expect(!r.cells.empty(), "survey record without cells");
      for (const auto& c : r.cells) {
        const auto has_exp = [](const TermWitness& t, unsigned e) {
          return std::any_of(t.powers.begin(), t.powers.end(),
                             [&](const PowerRep& p) { return p.exponent == e; });
        };
        ck.expect(has_exp(r.terms[0], c.n) && has_exp(r.terms[1], c.m), "cell exponent not available");
        const auto ds = decompose(z, c.d, c.spread);
        const bool attained = std::any_of(ds.begin(), ds.end(), [&](const ProductDecomposition& p) {
          return p.spread == Natural(static_cast<unsigned long>(c.spread));
        });
        ck.expect(attained, "cell spread not attained");
        Rational cw = Rational(1, c.n) + Rational(1, c.m) +
                      Rational(static_cast<unsigned long>(c.spread + 1), c.d);
        cw.canonicalize();
        ck.expect(cfg.f_strict ? cw < cfg.f_bound : cw <= cfg.f_bound, "cell weight not inside F");
      }
      break;
    case Mode::pillai:
      ck.expect(r.terms[1].value == Natural(cfg.pillai_difference), "difference is not B");
      break;
  }
}

void check_known(const json& line, Checker& ck) {
  const auto& terms = line.at("terms");
  std::array<Natural, 3> v;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& t = terms.at(i);
    v[i] = nat(t.at("value"));
    if (t.contains("factors")) {
      Natural p = 1;
      for (const auto& f : t.at("factors")) p *= nat(f);
      ck.expect(p == v[i], "witness factors do not multiply to the value");
    }
    if (t.contains("power")) {
      ck.expect(power_of(nat(t.at("power").at(0)), t.at("power").at(1).get<unsigned>()) == v[i],
                "power does not match the value");
    }
  }
  const bool plus = line.at("sign").get<std::string>() == "+";
  ck.expect(plus ? v[0] + v[1] == v[2] : v[0] - v[1] == v[2], "identity fails");
}

void check_abc(const json& line, Checker& ck, bool expect_violation) {
  AbcTriple t;
  t.a = nat(line.at("a"));
  t.b = nat(line.at("b"));
  t.c = nat(line.at("c"));
  ck.expect(t.a + t.b == t.c, "a + b != c");
  Natural g;
  mpz_gcd(g.get_mpz_t(), t.a.get_mpz_t(), t.b.get_mpz_t());
  ck.expect(g == 1, "a, b not coprime");
  if (!ck.problems.empty()) return;
  const AbcReport rep = check_mine(t);
  if (expect_violation) {
    ck.expect(!rep.mine_pass, "listed as a violation but the bound holds");
    return;
  }
  ck.expect(nat(line.at("rad_abc")) == rep.rad_abc, "rad(abc) mismatch");
  ck.expect(nat(line.at("max_rad")) == rep.max_rad, "max radical mismatch");
  ck.expect(line.at("mine_pass").get<bool>() == rep.mine_pass, "7/8 verdict mismatch");
  if (line.contains("classic")) {
    for (const auto& c : line.at("classic")) {
      const Verdict v = check_classic(t.c, rep.rad_abc, parse_rational(c.at("epsilon").get<std::string>()),
                                      parse_rational(c.at("constant").get<std::string>()));
      ck.expect(c.at("verdict").get<std::string>() == to_string(v), "classic verdict mismatch");
    }
  }
}

void check_abc2(const json& line, const json& header, Checker& ck) {
  const Natural a = nat(line.at("a")), b = nat(line.at("b")), c = nat(line.at("c"));
  ck.expect(a + b == c, "a + b != c");
  ck.expect(a <= b, "a > b");
  const GcdQuality q = gcd_quality(a, b);
  ck.expect(q.gcd == nat(line.at("gcd")), "gcd mismatch");
  ck.expect(q.ratio == parse_rational(line.at("gcd_ratio").get<std::string>()), "gcd ratio mismatch");
  const Natural rad = radical(Natural(a * b * c));
  ck.expect(rad == nat(line.at("rad_abc")), "rad(ab(a+b)) mismatch");
  const auto& cfg = header.at("config");
  ck.expect(q.ratio <= parse_rational(cfg.at("q_bound").get<std::string>()), "gcd ratio above Q");
  const Verdict v = check_classic(c, rad, parse_rational(cfg.at("epsilon").get<std::string>()), 1);
  const auto listed = line.at("verdict").get<std::string>();
  ck.expect(listed == to_string(v), "verdict mismatch");
  ck.expect(v != Verdict::pass, "inequality does not hold");
}

void check_decomposition(const json& line, Checker& ck) {
  std::vector<Natural> f;
  for (const auto& x : line.at("factors")) f.push_back(nat(x));
  const ProductDecomposition p = analyze(f);
  ck.expect(p.value == nat(line.at("value")), "factors do not multiply to the value");
  ck.expect(p.degree == line.at("degree").get<unsigned>(), "degree mismatch");
  ck.expect(p.spread == nat(line.at("spread")), "spread mismatch");
  ck.expect(p.base == nat(line.at("base")), "base mismatch");
}

}  // namespace

std::vector<std::string> verify_line(const nlohmann::json& line, const nlohmann::json& header) {
  Checker ck;
  try {
    const auto type = line.at("type").get<std::string>();
    if (type == "solution") {
      check_solution(line, header, ck);
    } else if (type == "known-solution") {
      check_known(line, ck);
    } else if (type == "abc-report") {
      check_abc(line, ck, false);
    } else if (type == "abc-violation") {
      check_abc(line, ck, true);
    } else if (type == "abc2-hit") {
      check_abc2(line, header, ck);
    } else if (type == "decomposition") {
      check_decomposition(line, ck);
    } else if (type == "factorization") {
      is_prime_power_list(line.at("factors"), nat(line.at("n")), ck);
      ck.expect(radical(nat(line.at("n"))) == nat(line.at("radical")), "radical mismatch");
    } else if (type == "radical") {
      ck.expect(radical(nat(line.at("n"))) == nat(line.at("radical")), "radical mismatch");
    } else if (type == "identity-failure" || type == "abc-scan-summary" || type == "survey-cell" ||
               type == "verification" || type == "verification-summary") {
      // Informational lines.
    } else {
      ck.expect(false, "unknown line type " + type);
    }
  } catch (const std::exception& e) {
    ck.expect(false, std::string("malformed line: ") + e.what());
  }
  return ck.problems;
}

std::vector<std::string> record_section(const std::string& log_text) {
  std::vector<std::string> lines;
  std::istringstream in(log_text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string json_digest(const nlohmann::json& j) {
  const std::string text = j.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fcp::cli
