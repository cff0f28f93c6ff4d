#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polygrowth/errors.hpp"
#include "polygrowth/orbit.hpp"

using namespace polygrowth;

namespace {
Rational rat(long n, long d = 1) { return Rational(n, d); }

std::vector<Rational> rats(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}
}  // namespace

TEST_CASE("exact iteration reproduces the reference orbits") {
  CHECK(iterate(parse_poly("x^2+1"), rat(0), 6).values ==
        rats({0, 1, 2, 5, 26, 677, 458330}));
  CHECK(iterate(parse_poly("x^2-x+1"), rat(2), 4).values ==
        rats({2, 3, 7, 43, 1807}));
  CHECK(iterate(parse_poly("x^2-2"), rat(3), 3).values == rats({3, 7, 47, 2207}));
}

TEST_CASE("iteration stops gracefully at the digit budget") {
  IterateResult r = iterate(parse_poly("x^2+1"), rat(2), 30, 60);
  REQUIRE(r.budget_stop.has_value());
  CHECK(*r.budget_stop == r.values.size() - 1);
  CHECK(r.values.size() < 31);
  // The stored prefix is exact: re-evaluating reproduces it bit for bit.
  RationalPoly p = parse_poly("x^2+1");
  for (std::size_t k = 0; k + 1 < r.values.size(); ++k) {
    CHECK(p.eval(r.values[k]) == r.values[k + 1]);
  }
}

TEST_CASE("sign normalization") {
  SUBCASE("odd degree with an orbit heading to -infinity conjugates") {
    SignNormalization sn = normalize_sign(parse_poly("x^3"), rat(-2));
    CHECK(sn.conjugated);
    CHECK(sn.poly == parse_poly("x^3"));  // odd symmetry
    CHECK(sn.x0 == rat(2));
  }
  SUBCASE("even degree with positive leading coefficient passes through") {
    SignNormalization sn = normalize_sign(parse_poly("x^2+1"), rat(0));
    CHECK_FALSE(sn.conjugated);
    CHECK(sn.poly == parse_poly("x^2+1"));
  }
  SUBCASE("negative leading coefficients are structurally out") {
    CHECK_THROWS_AS(normalize_sign(parse_poly("-x^2+1"), rat(2)), StructuralError);
    CHECK_THROWS_AS(normalize_sign(parse_poly("-x^3+1"), rat(2)), StructuralError);
  }
  SUBCASE("conjugation soundness: negated orbit matches the original") {
    SignNormalization sn = normalize_sign(parse_poly("x^3"), rat(-2));
    auto orig = iterate(parse_poly("x^3"), rat(-2), 4).values;
    auto conj = iterate(sn.poly, sn.x0, 4).values;
    REQUIRE(orig.size() == conj.size());
    for (std::size_t i = 0; i < orig.size(); ++i) CHECK(conj[i] == -orig[i]);
  }
}

TEST_CASE("escape predicate in exact arithmetic") {
  NormalizationData n = derive_normalization(parse_poly("x^2+1"));
  CHECK(n.escape == rat(4));  // max(4, 2*CP) with CP = 1
  CHECK_FALSE(escape_holds(n, rat(2)));
  CHECK(escape_holds(n, rat(5)));
  CHECK(escape_holds(n, rat(4)));
}

TEST_CASE("divergence certification on the reference systems") {
  OrbitRecord rec = certify_divergence(parse_poly("x^2+1"), rat(0));
  CHECK(rec.status == OrbitStatus::DivergesToInfinity);
  REQUIRE(rec.escape_index.has_value());
  CHECK(*rec.escape_index == 3);  // first iterate at or beyond y* = 4 is x_3 = 5
  CHECK(rec.all_integers);

  OrbitRecord sylv = certify_divergence(parse_poly("x^2-x+1"), rat(2));
  CHECK(sylv.status == OrbitStatus::DivergesToInfinity);
  CHECK(sylv.all_integers);
}

TEST_CASE("cycles are detected by exact repeats") {
  OrbitRecord fixed = certify_divergence(parse_poly("x^2-x"), rat(2));
  CHECK(fixed.status == OrbitStatus::Cycle);
  CHECK(fixed.cycle_entry == 0);
  CHECK(fixed.cycle_period == 1);  // 2 -> 2

  OrbitRecord lucas1 = certify_divergence(parse_poly("x^2-2"), rat(1));
  CHECK(lucas1.status == OrbitStatus::Cycle);
  CHECK(lucas1.cycle_entry == 1);  // 1 -> -1 -> -1
  CHECK(lucas1.cycle_period == 1);

  OrbitRecord two_cycle = certify_divergence(parse_poly("x^2-1"), rat(0));
  CHECK(two_cycle.status == OrbitStatus::Cycle);  // 0 -> -1 -> 0
  CHECK(two_cycle.cycle_period == 2);
}

TEST_CASE("certified monotonicity beyond the escape index") {
  OrbitRecord rec = certify_divergence(parse_poly("x^2+1"), rat(0));
  auto longer = iterate(parse_poly("x^2+1"), rat(0), 12).values;
  for (std::size_t k = *rec.escape_index; k + 1 < longer.size(); ++k) {
    CHECK(longer[k + 1] > longer[k]);
  }
}

TEST_CASE("budget exhaustion reports Undetermined") {
  OrbitBudget tight;
  tight.max_steps = 64;
  tight.digit_budget = 40;
  OrbitRecord rec = certify_divergence(parse_poly("x^2+1"), rat(1, 3));
  // 1/3 orbit diverges but stays non-integral; here just check the flag
  // wiring with a tiny budget on a slowly-growing rational orbit.
  OrbitRecord rec2 = certify_divergence(parse_poly("x^2+1/3"), rat(0), tight);
  CHECK((rec2.status == OrbitStatus::Undetermined ||
         rec2.status == OrbitStatus::DivergesToInfinity));
  CHECK(rec.status == OrbitStatus::DivergesToInfinity);
  CHECK_FALSE(rec.all_integers);
}

TEST_CASE("undetermined stays honest for slow escapes under step budget") {
  OrbitBudget one_step;
  one_step.max_steps = 1;
  OrbitRecord rec = certify_divergence(parse_poly("x^2+1"), rat(0), one_step);
  CHECK(rec.status == OrbitStatus::Undetermined);
}
