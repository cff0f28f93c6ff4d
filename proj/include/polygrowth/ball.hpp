#pragma once

#include <string>

#include "polygrowth/dyadic.hpp"
#include "polygrowth/rational.hpp"

namespace polygrowth {

/// Working mantissa length in bits. Always caller-supplied; there is no
/// global precision state.
struct Precision {
  explicit Precision(int b);
  int bits;
};

/// Midpoint-radius enclosure of a real number over dyadic rationals.
/// Every operation guarantees containment: if x lies in each input
/// interval, the mathematical result lies in the output interval.
/// Midpoint rounding errors are always absorbed into the radius.
class Ball {
 public:
  Ball() = default;  // exact zero
  Ball(Dyadic mid, Dyadic rad);

  static Ball exact(Dyadic d) { return Ball(std::move(d), Dyadic::zero()); }
  static Ball exact_int(long v) { return Ball(Dyadic(v), Dyadic::zero()); }
  /// Exact interval hull [lo, hi]; requires lo <= hi.
  static Ball from_endpoints(const Dyadic& lo, const Dyadic& hi);

  const Dyadic& mid() const { return mid_; }
  const Dyadic& rad() const { return rad_; }
  Dyadic lower() const { return mid_ - rad_; }
  Dyadic upper() const { return mid_ + rad_; }

  bool is_exact() const { return rad_.is_zero(); }
  bool contains(const Rational& q) const;
  bool contains_zero() const;
  bool contains_interval_of(const Ball& inner) const;
  bool intersects(const Ball& other) const;
  bool strictly_positive() const { return lower().sign() > 0; }
  bool strictly_negative() const { return upper().sign() < 0; }

  Ball operator-() const { return Ball(-mid_, rad_); }
  /// Exact scaling by 2^k.
  Ball mul_pow2(std::int64_t k) const {
    return Ball(mid_.mul_pow2(k), rad_.mul_pow2(k));
  }

  std::string to_string() const;

 private:
  Dyadic mid_;
  Dyadic rad_;
};

/// Encloses q; the radius is zero when q is exactly dyadic and at most
/// 2^(-prec.bits+2) * |q| otherwise.
Ball ball_from_rational(const Rational& q, Precision prec);

Ball ball_add(const Ball& a, const Ball& b, Precision prec);
Ball ball_sub(const Ball& a, const Ball& b, Precision prec);
Ball ball_mul(const Ball& a, const Ball& b, Precision prec);
/// Requires the interval of b to exclude zero.
Ball ball_div(const Ball& a, const Ball& b, Precision prec);
Ball ball_add_rational(const Ball& a, const Rational& q, Precision prec);
Ball ball_mul_rational(const Ball& a, const Rational& q, Precision prec);
Ball ball_pow_ui(const Ball& a, unsigned long e, Precision prec);

/// Natural logarithm; requires the interval strictly positive.
Ball ball_log(const Ball& a, Precision prec);
/// Exponential.
Ball ball_exp(const Ball& a, Precision prec);
/// log(1+t) computed directly from t (not via 1+t) when |t| is small, so
/// the output radius is proportional to the input radius instead of being
/// limited by absolute working precision. Requires t strictly above -1.
Ball ball_log1p(const Ball& t, Precision prec);
/// k-th root; requires the interval strictly positive and k >= 1.
Ball ball_root(const Ball& a, unsigned long k, Precision prec);

/// Certified enclosure of log(2) with radius at most 2^(-prec.bits).
Ball ball_ln2(Precision prec);

enum class IntegerScanKind { NoInteger, UniqueInteger, Multiple };
struct IntegerScan {
  IntegerScanKind kind;
  Integer value;  // meaningful for UniqueInteger
};
/// Exact decision: which integers does the interval contain?
IntegerScan contains_integer(const Ball& a);

enum class DecimalKind { Exact, Certified, InsufficientRadius };
struct DecimalResult {
  DecimalKind kind;
  std::string digits;  // empty for InsufficientRadius
};
/// First `digits` significant decimal digits, truncated. Certified means
/// every real in the interval truncates to the same digit string; Exact
/// additionally means the string represents the (pointlike) value with no
/// truncation loss. Never emits uncertified digits.
DecimalResult ball_to_decimal(const Ball& a, unsigned digits);

}  // namespace polygrowth
