#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "polygrowth/errors.hpp"
#include "polygrowth/seqfit.hpp"

using namespace polygrowth;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

SequenceSample sample_from(const std::string& text) {
  std::istringstream is(text);
  return load_bfile(is);
}

SequenceSample sample_of(const std::vector<Integer>& values, long long first = 0) {
  SequenceSample s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.entries.push_back({first + static_cast<long long>(i), values[i]});
  }
  s.contiguous = true;
  return s;
}

std::vector<Integer> lucas_numbers(int upto) {
  std::vector<Integer> l = {Integer(2), Integer(1)};
  for (int i = 2; i <= upto; ++i) l.push_back(l[i - 1] + l[i - 2]);
  l.resize(upto + 1);
  return l;
}

}  // namespace

TEST_CASE("b-file parsing") {
  SequenceSample a = sample_from("0 0\n1 1\n2 2\n3 5\n4 26\n");
  CHECK(a.entries.size() == 5);
  CHECK(a.contiguous);
  CHECK(a.entries[4].value == 26);

  SequenceSample b = sample_from("# comment\n0 2\n1 3\n2 7\n");
  CHECK(b.entries.size() == 3);
  CHECK(b.diagnostics.empty());

  SequenceSample c = sample_from("0 2\nbroken\n1 3\n");
  CHECK(c.entries.size() == 2);
  CHECK(c.diagnostics.size() == 1);
  CHECK(c.diagnostics[0].find("line 2") != std::string::npos);

  SequenceSample d = sample_from("0 1\r\n1 2\r\n2 4\r\n");
  CHECK(d.entries.size() == 3);

  SequenceSample e = sample_from("0 5\n2 9\n");
  CHECK_FALSE(e.contiguous);

  CHECK_THROWS_AS(sample_from("# nothing\n"), ParseError);
  CHECK_THROWS_AS(sample_from("1 5\n0 3\n"), ParseError);
}

TEST_CASE("exact geometric model is recovered exactly") {
  std::vector<Integer> g;
  for (int n = 0; n <= 12; ++n) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, n);
    g.push_back(3 * p + 5);
  }
  FitResult fr = fit_geometric(sample_of(g));
  CHECK(std::abs(fr.alpha_hat_d - 2.0) < 1e-12);
  CHECK(std::abs(fr.A_hat_d - 3.0) < 1e-9);
  CHECK(std::abs(fr.B_hat_d - 5.0) < 1e-9);
  CHECK(fr.converged);
  CHECK_FALSE(fr.non_geometric);
  for (double r : fr.residuals) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("round trip at window >= 10 stays within 1e-9 relative") {
  std::vector<Integer> g;
  for (int n = 0; n <= 14; ++n) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 5, n);
    g.push_back(p - 7);  // alpha 5, A 1, B -7
  }
  FitResult fr = fit_geometric(sample_of(g));
  CHECK(std::abs(fr.alpha_hat_d - 5.0) / 5.0 < 1e-9);
  CHECK(std::abs(fr.A_hat_d - 1.0) < 1e-9);
  CHECK(std::abs(fr.B_hat_d + 7.0) < 1e-9);
}

TEST_CASE("Lucas numbers fit the golden ratio model") {
  FitResult fr = fit_geometric(sample_of(lucas_numbers(30)));
  CHECK(std::abs(fr.alpha_hat_d - 1.6180339887498949) < 1e-6);
  CHECK(std::abs(fr.A_hat_d - 1.0) < 1e-3);
  CHECK(std::abs(fr.B_hat_d) < 1e-2);
  CHECK(fr.converged);
  // Residual is (-1/phi)^n: the error exponent comes out near 1.
  CHECK(fr.eps_hat > 0.5);
  CHECK(fr.eps_hat < 1.5);
}

TEST_CASE("generate-then-fit round trip with a rounded model") {
  // G_n = round(2.5 * 3^n + 1.25)
  std::vector<Integer> g;
  for (int n = 0; n <= 15; ++n) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, n);
    Rational v = rat(5, 2) * Rational(p) + rat(5, 4);
    g.push_back((v + rat(1, 2)).floor());
  }
  FitResult fr = fit_geometric(sample_of(g));
  CHECK(std::abs(fr.alpha_hat_d - 3.0) < 1e-6);
  CHECK(std::abs(fr.A_hat_d - 2.5) < 1e-4);
}

TEST_CASE("shift equivariance") {
  std::vector<Integer> g, gc;
  for (int n = 0; n <= 13; ++n) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 4, n);
    g.push_back(2 * p + 3);
    gc.push_back(2 * p + 3 + 17);
  }
  FitResult a = fit_geometric(sample_of(g));
  FitResult b = fit_geometric(sample_of(gc));
  CHECK(std::abs(a.alpha_hat_d - b.alpha_hat_d) < 1e-9);
  CHECK(std::abs(a.A_hat_d - b.A_hat_d) < 1e-9);
  CHECK(std::abs((b.B_hat_d - a.B_hat_d) - 17.0) < 1e-9);
}

TEST_CASE("estimates are deterministic") {
  FitResult a = fit_geometric(sample_of(lucas_numbers(25)));
  FitResult b = fit_geometric(sample_of(lucas_numbers(25)));
  CHECK(a.alpha_hat == b.alpha_hat);
  CHECK(a.A_hat == b.A_hat);
  CHECK(a.B_hat == b.B_hat);
}

TEST_CASE("fit rejections") {
  CHECK_THROWS_AS(fit_geometric(sample_from("0 1\n1 2\n2 4\n3 8\n")), DomainError);
  CHECK_THROWS_AS(fit_geometric(sample_from("0 5\n1 5\n2 5\n3 5\n4 5\n5 5\n")),
                  DomainError);
  CHECK_THROWS_AS(fit_geometric(sample_from("0 1\n2 4\n3 8\n4 16\n5 32\n6 64\n")),
                  DomainError);
  FitOptions small;
  small.window = 4;
  CHECK_THROWS_AS(fit_geometric(sample_of(lucas_numbers(20)), small), DomainError);
}

TEST_CASE("window selection uses the trailing entries") {
  FitOptions w;
  w.window = 12;
  FitResult fr = fit_geometric(sample_of(lucas_numbers(30)), w);
  CHECK(fr.window_first == 19);
  CHECK(fr.window_length == 12);
  CHECK(std::abs(fr.alpha_hat_d - 1.6180339887498949) < 1e-6);
}

TEST_CASE("crosscheck against certified growth data") {
  SUBCASE("tree-counting orbit") {
    GrowthOptions o;
    o.target_radius = Rational::pow10_neg(30);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2+1"), rat(0), o);
    auto vals = iterate(parse_poly("x^2+1"), rat(0), 9).values;
    std::vector<Integer> ints;
    for (const auto& v : vals) ints.push_back(v.num());
    CrosscheckReport rep = crosscheck_with_growth(sample_of(ints), gc, 2);
    CHECK(rep.compared >= 3);
    CHECK(rep.max_rel_dev_A < 1e-6);  // certified A = 1
    CHECK(rep.max_abs_dev_B < 1e-6);  // certified B = 0
  }
  SUBCASE("Sylvester orbit against B = 1/2") {
    GrowthOptions o;
    o.target_radius = Rational::pow10_neg(30);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2-x+1"), rat(2), o);
    CHECK(gc.B == rat(1, 2));
    auto vals = iterate(parse_poly("x^2-x+1"), rat(2), 9).values;
    std::vector<Integer> ints;
    for (const auto& v : vals) ints.push_back(v.num());
    CrosscheckReport rep = crosscheck_with_growth(sample_of(ints), gc, 2);
    CHECK(rep.max_rel_dev_A < 1e-6);
    CHECK(rep.max_abs_dev_B < 1e-6);
  }
  SUBCASE("pure power agrees exactly") {
    GrowthOptions o;
    o.target_radius = Rational::pow10_neg(30);
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2"), rat(2), o);
    auto vals = iterate(parse_poly("x^2"), rat(2), 7).values;
    std::vector<Integer> ints;
    for (const auto& v : vals) ints.push_back(v.num());
    CrosscheckReport rep = crosscheck_with_growth(sample_of(ints), gc, 2);
    CHECK(rep.exact_agreement);
  }
  SUBCASE("degree mismatch is rejected") {
    GrowthOptions o;
    GrowthConstant gc = compute_log_alpha(parse_poly("x^2"), rat(2), o);
    CHECK_THROWS_AS(crosscheck_with_growth(sample_of(lucas_numbers(10)), gc, 3),
                    DomainError);
  }
}
