#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polygrowth/rational.hpp"

namespace polygrowth {

/// Largest polynomial degree the expression parser and normalization accept.
inline constexpr unsigned kMaxDegree = 512;

/// Exact polynomial with rational coefficients, stored ascending by degree
/// with the leading coefficient nonzero (the zero polynomial is empty).
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> ascending_coeffs);

  static RationalPoly constant(const Rational& c);
  /// c * x^k.
  static RationalPoly monomial(const Rational& c, unsigned k);

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Rational coeff(unsigned j) const {
    return j < coeffs_.size() ? coeffs_[j] : Rational(0);
  }
  Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  /// Exact evaluation by Horner's rule.
  Rational eval(const Rational& x) const;

  bool has_integer_coeffs() const;

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  RationalPoly operator-() const;
  RationalPoly scaled(const Rational& c) const;
  RationalPoly pow(unsigned e) const;

  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// Deterministic printer: descending terms, fractions as "p/q",
  /// e.g. "1/2*x^2 + 1/2*x" or "x^2 - x + 1".
  std::string to_string() const;

 private:
  std::vector<Rational> coeffs_;
  void trim();
};

/// Parses an expression in the variable x over integer literals with
/// + - * / ^ and parentheses (see the grammar in the README). All
/// arithmetic is exact; throws ParseError with the offending position.
RationalPoly parse_poly(std::string_view text);

/// True iff P maps every integer to an integer. Decided exactly through
/// the forward differences of P at 0..d (the coefficients of P in the
/// binomial basis), which must all be integers.
bool is_integer_valued(const RationalPoly& p);

/// Constants of the conjugation y = cd^(1/(d-1)) * (x + s) that turns
/// x -> P(x) into y -> y^d * (1 + E(y)) with a certified bound on E.
struct NormalizationData {
  int d = 0;               // degree, >= 2
  Rational cd;             // leading coefficient, > 0
  Rational shift;          // s = c_{d-1} / (d * cd)
  Rational B;              // -shift; the constant term of the asymptotic form
  RationalPoly remainder;  // R = P - cd*(x+s)^d, of degree <= d-2
  Rational CP;             // for all y >= escape: |E(y)| <= CP / y^2
  Rational escape;         // y*: escape threshold validating the E-bound
                           // and the step-doubling property (see orbit)

  /// A = cd^(-1/(d-1)), kept exactly as (base, root index).
  const Rational& A_base() const { return cd; }
  int A_root_index() const { return d - 1; }
};

/// Derives NormalizationData for P. Requires deg P >= 2 and positive
/// leading coefficient; throws StructuralError otherwise.
NormalizationData derive_normalization(const RationalPoly& p);

/// Rational q >= 0 with q^k <= a (requires a >= 0). Reasonably tight.
Rational rational_kth_root_lower(const Rational& a, unsigned k);
/// Rational q with q^k >= a >= 0.
Rational rational_kth_root_upper(const Rational& a, unsigned k);

}  // namespace polygrowth
