#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "polygrowth/classify.hpp"
#include "polygrowth/errors.hpp"

using namespace polygrowth;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

ClassifyOptions copts(unsigned neg_pow10 = 12, int n0 = 0) {
  ClassifyOptions o;
  o.target_radius = Rational::pow10_neg(neg_pow10);
  o.start_index = n0;
  return o;
}

std::map<std::string, std::string> parse_block(const std::string& block) {
  std::map<std::string, std::string> kv;
  std::istringstream is(block);
  std::string line;
  while (std::getline(is, line)) {
    auto pos = line.find(": ");
    if (pos == std::string::npos) continue;
    std::string key = line.substr(0, pos);
    if (key != "caveat") kv[key] = line.substr(pos + 2);
  }
  return kv;
}

}  // namespace

TEST_CASE("the two quadratic reference systems are certified irrational") {
  Certificate b = certify_irrational(parse_poly("x^2+1"), rat(0), copts());
  CHECK(b.kind == CertificateKind::IrrationalByTheorem1);
  CHECK(b.basis == IntegralityBasis::IntegerCoefficients);
  CHECK(b.escape_index == std::size_t{3});
  REQUIRE(b.alpha.has_value());
  CHECK(contains_integer(*b.alpha).kind == IntegerScanKind::NoInteger);

  Certificate g = certify_irrational(parse_poly("x^2-x+1"), rat(2), copts());
  CHECK(g.kind == CertificateKind::IrrationalByTheorem1);
}

TEST_CASE("pure powers are consistent with an integer, certified exactly") {
  Certificate c = certify_irrational(parse_poly("x^2"), rat(2), copts());
  CHECK(c.kind == CertificateKind::ConsistentWithInteger);
  REQUIRE(c.integer_value.has_value());
  CHECK(*c.integer_value == 2);
  CHECK(c.exact_integer);
}

TEST_CASE("an integer-valued recursion with rational coefficients certifies") {
  Certificate c = certify_irrational(parse_poly("1/2*x^2+1/2*x"), rat(21), copts());
  CHECK(c.basis == IntegralityBasis::IntegerValuedPolynomial);
  CHECK(c.kind == CertificateKind::IrrationalByTheorem1);
}

TEST_CASE("observed-prefix integrality never certifies irrationality") {
  // x^2 + 1/2 from 1/2 diverges but is never integral: any enclosure claim
  // must degrade to Inconclusive with an explanatory caveat.
  Certificate c = certify_irrational(parse_poly("x^2+1/2"), rat(1, 2), copts());
  CHECK(c.basis == IntegralityBasis::ObservedPrefixOnly);
  CHECK(c.kind == CertificateKind::Inconclusive);
  CHECK(c.orbit_status == OrbitStatus::DivergesToInfinity);
  CHECK(!c.caveats.empty());
  REQUIRE(c.alpha.has_value());
}

TEST_CASE("cycles and structural rejections yield honest inconclusives") {
  Certificate cyc = certify_irrational(parse_poly("x^2-x"), rat(2), copts());
  CHECK(cyc.kind == CertificateKind::Inconclusive);
  CHECK(cyc.orbit_status == OrbitStatus::Cycle);

  Certificate lin = certify_irrational(parse_poly("x+1"), rat(0), copts());
  CHECK(lin.kind == CertificateKind::Inconclusive);
  CHECK(!lin.caveats.empty());

  Certificate neg = certify_irrational(parse_poly("-x^2+1"), rat(0), copts());
  CHECK(neg.kind == CertificateKind::Inconclusive);
}

TEST_CASE("no false integer exclusion when precision doubles") {
  for (const char* sys : {"x^2+1", "x^2-x+1"}) {
    Rational x0 = sys == std::string("x^2+1") ? rat(0) : rat(2);
    Certificate first = certify_irrational(parse_poly(sys), x0, copts(12));
    REQUIRE(first.kind == CertificateKind::IrrationalByTheorem1);
    Certificate tighter = certify_irrational(parse_poly(sys), x0, copts(24));
    CHECK(tighter.kind == CertificateKind::IrrationalByTheorem1);
    CHECK(contains_integer(*tighter.alpha).kind == IntegerScanKind::NoInteger);
  }
}

TEST_CASE("certificate monotonicity under tightening") {
  for (unsigned t : {8u, 16u, 24u}) {
    Certificate c = certify_irrational(parse_poly("x^2+1"), rat(0), copts(t));
    CHECK(c.kind == CertificateKind::IrrationalByTheorem1);
  }
}

TEST_CASE("certificate text block is stable key: value") {
  Certificate c = certify_irrational(parse_poly("x^2+1"), rat(0), copts());
  std::string block = format_certificate(c);
  auto kv = parse_block(block);
  CHECK(kv["kind"] == "IrrationalByTheorem1");
  CHECK(kv["poly"] == "x^2 + 1");
  CHECK(kv["x0"] == "0");
  CHECK(kv["integrality_basis"] == "integer_coefficients");
  CHECK(kv["orbit_status"] == "diverges_to_infinity");
  CHECK(kv["escape_index"] == "3");
  CHECK(kv.count("alpha_low") == 1);
  CHECK(kv.count("alpha_high") == 1);
  CHECK(kv.count("excluded_integers") == 1);
  CHECK(kv["alpha_decimal"].substr(0, 11) == "1.225902443");
}

TEST_CASE("algebraic candidate search") {
  SUBCASE("golden ratio surfaces its minimal polynomial") {
    GrowthOptions o;
    o.target_radius = Rational::pow10_neg(42);
    o.start_index = 1;
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2-2"), rat(3), o);
    auto cands = search_algebraic_candidates(gc.alpha, 2, 2);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].poly == parse_poly("x^2-x-1"));
    CHECK(cands[0].degree == 2);
    CHECK(cands[0].height == 1);
    CHECK(cands[0].value.contains_zero());
  }
  SUBCASE("the tree-counting constant matches nothing small") {
    GrowthOptions o;
    o.target_radius = Rational::pow10_neg(42);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), o);
    CHECK(search_algebraic_candidates(gc.alpha, 2, 10).empty());
  }
  SUBCASE("an exactly-integer ball matches its linear polynomial") {
    auto cands = search_algebraic_candidates(Ball::exact_int(2), 1, 3);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].poly == parse_poly("x-2"));
  }
  SUBCASE("planted minimal polynomials are always recovered") {
    // 1 + sqrt(2) has minimal polynomial x^2 - 2x - 1 (degree 2, height 2).
    Precision p(200);
    Ball v = ball_add_rational(ball_root(ball_from_rational(rat(2), p), 2, p), rat(1), p);
    auto cands = search_algebraic_candidates(v, 2, 2);
    bool found = false;
    for (const auto& c : cands) found = found || c.poly == parse_poly("x^2-2x-1");
    CHECK(found);
  }
  SUBCASE("wide enclosures are rejected up front") {
    Ball wide(Dyadic(3), Dyadic(1).mul_pow2(-3));
    CHECK_THROWS_AS(search_algebraic_candidates(wide, 2, 10), DomainError);
  }
}

TEST_CASE("conjugated certificate carries the negation caveat") {
  Certificate c = certify_irrational(parse_poly("x^3"), rat(-2), copts());
  CHECK(c.conjugated);
  CHECK(c.kind == CertificateKind::ConsistentWithInteger);
  bool mentions = false;
  for (const auto& s : c.caveats) mentions = mentions || s.find("negated") != std::string::npos;
  CHECK(mentions);
}
