#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polygrowth/errors.hpp"
#include "polygrowth/growth.hpp"

using namespace polygrowth;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

GrowthOptions opts_with_target(unsigned neg_pow10, int n0 = 0) {
  GrowthOptions o;
  o.target_radius = Rational::pow10_neg(neg_pow10);
  o.start_index = n0;
  return o;
}

// Rational bracket of sqrt(a) by Newton from above.
std::pair<Rational, Rational> sqrt_bracket(const Rational& a, int steps) {
  Rational t = a;
  for (int i = 0; i < steps; ++i) t = (t + a / t) / rat(2);
  return {a / t, t};
}

}  // namespace

TEST_CASE("step ratios are the exact product-formula factors") {
  NormalizationData n = derive_normalization(parse_poly("x^2+1"));
  auto vals = iterate(parse_poly("x^2+1"), rat(0), 6).values;
  CHECK(step_ratio(n, vals, 1) == rat(2));        // 2 / 1^2
  CHECK(step_ratio(n, vals, 4) == rat(677, 676));  // the (1 + x_n^-2) factor

  NormalizationData ns = derive_normalization(parse_poly("x^2-x+1"));
  auto sylv = iterate(parse_poly("x^2-x+1"), rat(2), 4).values;
  CHECK(step_ratio(ns, sylv, 1) == rat(26, 25));  // (13/2) / (25/4)

  CHECK_THROWS_AS(step_ratio(n, vals, 6), DomainError);
}

TEST_CASE("certified digits of the quadratic tree-counting constant") {
  GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(14));
  CHECK(gc.converged);
  CHECK(gc.start_m == 3);
  CHECK(ball_to_decimal(gc.alpha, 11).digits == "1.2259024435");
  CHECK(gc.alpha.rad() <= Dyadic::pow2(-40));  // well under 1e-12
  CHECK(gc.A.is_exact());
  CHECK(gc.A.contains(rat(1)));
  CHECK(gc.B == rat(0));
}

TEST_CASE("certified digits of the Sylvester-type constant") {
  GrowthConstant gc =
      compute_log_alpha(parse_poly("x^2-x+1"), rat(2), opts_with_target(14));
  CHECK(ball_to_decimal(gc.alpha, 11).digits == "1.5979102180");
  CHECK(gc.B == rat(1, 2));
}

TEST_CASE("quadratic system x^2-2 from 3 meets the golden ratio") {
  GrowthOptions o = opts_with_target(55, /*n0=*/1);
  GrowthConstant gc = compute_log_alpha(parse_poly("x^2-2"), rat(3), o);
  CHECK(gc.converged);
  Precision p(256);
  Ball r5 = ball_root(ball_from_rational(rat(5), p), 2, p);
  Ball golden = ball_mul_rational(ball_add_rational(r5, rat(1), p), rat(1, 2), p);
  CHECK(gc.alpha.intersects(golden));
  CHECK(ball_to_decimal(gc.alpha, 30).digits == ball_to_decimal(golden, 30).digits);
}

TEST_CASE("pure powers collapse to an exact-step telescope") {
  GrowthConstant gc = compute_log_alpha(parse_poly("x^2"), rat(2), opts_with_target(20));
  CHECK(gc.alpha.contains(rat(2)));
  CHECK(gc.tail_bound.is_zero());
  for (std::size_t k = gc.start_m; k + 1 < gc.values.size(); ++k) {
    CHECK(step_ratio(gc.norm, gc.values, k) == rat(1));
  }
}

TEST_CASE("alpha exceeds 1 whenever divergence was certified") {
  for (const char* sys : {"x^2+1", "x^2-x+1", "x^2-2", "x^2", "x^3+x"}) {
    Rational x0 = sys == std::string("x^2+1") ? rat(0) : rat(3);
    GrowthConstant gc = compute_log_alpha(parse_poly(sys), x0, opts_with_target(12));
    CHECK(Dyadic::cmp(gc.alpha.lower(), rat(1)) > 0);
  }
}

TEST_CASE("predictions recover the iterates") {
  GrowthConstant beta = compute_log_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(20));
  Precision p(128);
  Ball f4 = predict_term(beta, 4, p);
  CHECK(f4.lower().floor() == 26);
  CHECK(f4.upper().floor() == 26);

  GrowthConstant sylv =
      compute_log_alpha(parse_poly("x^2-x+1"), rat(2), opts_with_target(20));
  Ball f2 = ball_add_rational(predict_term(sylv, 2, p), rat(1, 2), p);
  CHECK(f2.lower().floor() == 7);  // round(prediction) = 7 = x_2
  CHECK(f2.upper().floor() == 7);

  GrowthConstant pw = compute_log_alpha(parse_poly("x^2"), rat(2), opts_with_target(20));
  Ball f3 = predict_term(pw, 3, p);
  CHECK(f3.contains(rat(256)));
}

TEST_CASE("prediction refuses indices beyond the enclosure's reach") {
  GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(10));
  CHECK_THROWS_AS(predict_term(gc, 60, Precision(64)), PrecisionError);
}

TEST_CASE("floor form verifies for the tree-counting system on 1..8 but not 0") {
  GrowthOptions o = opts_with_target(12);
  GrowthConstant coarse = compute_log_alpha(parse_poly("x^2+1"), rat(0), o);
  o.target_radius = recommended_verify_target(coarse, 8);
  GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), o);
  auto vals = iterate(parse_poly("x^2+1"), rat(0), 8).values;

  ClosedFormReport rep = verify_closed_form(gc, vals, RoundMode::Floor, 1, 8);
  CHECK(rep.all_verified());
  CHECK(rep.chosen == RoundMode::Floor);

  ClosedFormReport rep0 = verify_closed_form(gc, vals, RoundMode::Floor, 0, 8);
  CHECK(rep0.rows.front().verdict == Verdict::Failed);  // floor(beta) = 1 != 0
  CHECK(rep0.any_failed());
}

TEST_CASE("rounding form verifies for the Sylvester-type system on 0..8") {
  GrowthOptions o = opts_with_target(12);
  GrowthConstant coarse = compute_log_alpha(parse_poly("x^2-x+1"), rat(2), o);
  o.target_radius = recommended_verify_target(coarse, 8);
  GrowthConstant gc = compute_log_alpha(parse_poly("x^2-x+1"), rat(2), o);
  auto vals = iterate(parse_poly("x^2-x+1"), rat(2), 8).values;
  ClosedFormReport rep = verify_closed_form(gc, vals, RoundMode::Round, 0, 8);
  CHECK(rep.all_verified());

  ClosedFormReport repa = verify_closed_form(gc, vals, RoundMode::Auto, 0, 8);
  CHECK(repa.requested == RoundMode::Auto);
  CHECK(repa.all_verified());
}

TEST_CASE("ambiguity is a verdict, not an error") {
  GrowthConstant coarse =
      compute_log_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(8));
  auto vals = iterate(parse_poly("x^2+1"), rat(0), 12).values;
  ClosedFormReport rep = verify_closed_form(coarse, vals, RoundMode::Floor, 1, 12);
  CHECK(rep.any_ambiguous());
  CHECK_FALSE(rep.any_failed());
}

TEST_CASE("residuals") {
  SUBCASE("pure power: the relation is exact, residual straddles 0") {
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2"), rat(2), opts_with_target(20));
    auto vals = iterate(parse_poly("x^2"), rat(2), 5).values;
    for (int n = 0; n <= 5; ++n) {
      CHECK(residual(gc, vals, n, Precision(96)).contains(rat(0)));
    }
  }
  SUBCASE("Lucas system at n = 3 leaves exactly phi^-8") {
    GrowthOptions o = opts_with_target(30, /*n0=*/1);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2-2"), rat(3), o);
    auto vals = iterate(parse_poly("x^2-2"), rat(3), 4).values;
    Ball r = residual(gc, vals, 3, Precision(128));
    // phi^-8 = ((1+sqrt5)/2)^-8, bracketed through rational Newton.
    auto [lo5, hi5] = sqrt_bracket(rat(5), 8);
    Rational plo = (rat(1) + lo5) / rat(2), phi = (rat(1) + hi5) / rat(2);
    Rational blo = rat(1) / phi.pow(8), bhi = rat(1) / plo.pow(8);
    CHECK(Dyadic::cmp(r.upper(), blo) >= 0);
    CHECK(Dyadic::cmp(r.lower(), bhi) <= 0);
    CHECK(std::abs(r.mid().to_double() - 0.0212862) < 1e-4);
  }
  SUBCASE("decay consistency: |res(5)| < 10 * |res(4)|^2") {
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(30));
    auto vals = iterate(parse_poly("x^2+1"), rat(0), 6).values;
    Ball r4 = residual(gc, vals, 4, Precision(128));
    Ball r5 = residual(gc, vals, 5, Precision(128));
    CHECK(std::abs(r4.mid().to_double() + 0.01924) < 1e-4);
    Dyadic u5 = r5.upper().abs() + r5.rad();
    Dyadic u4 = r4.upper().abs() + r4.rad();
    CHECK(u5 < u4 * u4 * Dyadic(10));
  }
}

TEST_CASE("product route and log route enclose the same constant") {
  SUBCASE("tree-counting system") {
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(14));
    Ball prod = product_formula_alpha(parse_poly("x^2+1"), rat(0), opts_with_target(14));
    CHECK(prod.intersects(gc.alpha));
  }
  SUBCASE("Sylvester-type system at 1e-20") {
    GrowthOptions o = opts_with_target(20);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2-x+1"), rat(2), o);
    Ball prod = product_formula_alpha(parse_poly("x^2-x+1"), rat(2), o);
    CHECK(prod.intersects(gc.alpha));
    CHECK(prod.rad() <= Dyadic::pow2(-66));
    CHECK(gc.alpha.rad() <= Dyadic::pow2(-66));
  }
  SUBCASE("pure power: the product telescopes to the start value") {
    Ball prod = product_formula_alpha(parse_poly("x^2"), rat(2), opts_with_target(14));
    CHECK(prod.contains(rat(2)));
  }
  SUBCASE("Lucas system") {
    GrowthOptions o = opts_with_target(20, 1);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2-2"), rat(3), o);
    Ball prod = product_formula_alpha(parse_poly("x^2-2"), rat(3), o);
    CHECK(prod.intersects(gc.alpha));
  }
}

TEST_CASE("tail bound soundness: depth-N enclosure contains deeper midpoints") {
  for (const char* sys : {"x^2+1", "x^2-x+1"}) {
    Rational x0 = sys == std::string("x^2+1") ? rat(0) : rat(2);
    GrowthOptions base = opts_with_target(10);
    GrowthConstant probe = compute_log_alpha(parse_poly(sys), x0, base);
    for (std::size_t N = probe.start_m; N <= probe.start_m + 6; ++N) {
      GrowthOptions shallow = base;
      shallow.fixed_depth = N;
      GrowthOptions deep = base;
      deep.fixed_depth = N + 5;
      GrowthConstant a = compute_log_alpha(parse_poly(sys), x0, shallow);
      GrowthConstant b = compute_log_alpha(parse_poly(sys), x0, deep);
      CHECK(a.log_alpha.contains(b.log_alpha.mid().to_rational()));
    }
  }
}

TEST_CASE("monotone refinement and super-exponential convergence") {
  GrowthOptions base = opts_with_target(10);
  GrowthConstant probe = compute_log_alpha(parse_poly("x^2+1"), rat(0), base);
  Dyadic prev_rad;
  bool have_prev = false;
  for (std::size_t N = probe.start_m + 1; N <= probe.start_m + 5; ++N) {
    GrowthOptions o = base;
    o.fixed_depth = N;
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), o);
    if (have_prev) {
      CHECK(gc.log_alpha.rad() <= prev_rad);
      // Certified bits at least double per extra iterate in this regime.
      double r_prev = prev_rad.to_double(), r_now = gc.log_alpha.rad().to_double();
      CHECK(std::log2(r_now) <= 1.8 * std::log2(r_prev));
    }
    prev_rad = gc.log_alpha.rad();
    have_prev = true;
  }
}

TEST_CASE("conjugated systems predict the original (negative) values") {
  GrowthConstant gc = compute_log_alpha(parse_poly("x^3"), rat(-2), opts_with_target(14));
  CHECK(gc.conjugated);
  CHECK(gc.alpha.contains(rat(2)));
  Ball f2 = predict_term(gc, 2, Precision(96));
  CHECK(f2.contains(rat(-512)));  // x_2 = ((-2)^3)^3 = -512
}

TEST_CASE("growth requires certified divergence") {
  CHECK_THROWS_AS(compute_log_alpha(parse_poly("x^2-x"), rat(2), opts_with_target(10)),
                  NotDivergentError);
  CHECK_THROWS_AS(compute_log_alpha(parse_poly("x^2-2"), rat(1), opts_with_target(10)),
                  NotDivergentError);
}

TEST_CASE("integer-valued rational-coefficient system end to end") {
  GrowthConstant gc =
      compute_log_alpha(parse_poly("1/2*x^2+1/2*x"), rat(21), opts_with_target(14));
  CHECK(gc.B == rat(-1, 2));
  CHECK(gc.A.contains(rat(2)));  // cd^(-1) = 2
  auto vals = iterate(parse_poly("1/2*x^2+1/2*x"), rat(21), 6).values;
  GrowthOptions o = opts_with_target(14);
  o.target_radius = recommended_verify_target(gc, 6);
  GrowthConstant tight = compute_log_alpha(parse_poly("1/2*x^2+1/2*x"), rat(21), o);
  ClosedFormReport rep = verify_closed_form(tight, vals, RoundMode::Auto, 1, 6);
  CHECK(rep.all_verified());
}
