#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "polygrowth/rational.hpp"

namespace polygrowth {

/// Dyadic rational mantissa * 2^exponent with arbitrary-precision mantissa.
/// Canonical form: odd mantissa, or zero mantissa with exponent 0.
/// Addition, subtraction and multiplication are exact; rounding happens
/// only through the explicit round_* entry points, which report the error.
class Dyadic {
 public:
  Dyadic() : mant_(0), exp_(0) {}
  Dyadic(long v) : mant_(v), exp_(0) { normalize(); }  // NOLINT: implicit by design
  Dyadic(Integer mantissa, std::int64_t exponent)
      : mant_(std::move(mantissa)), exp_(exponent) {
    normalize();
  }

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1); }
  /// 2^k.
  static Dyadic pow2(std::int64_t k) { return Dyadic(Integer(1), k); }

  const Integer& mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }

  bool is_zero() const { return sgn(mant_) == 0; }
  int sign() const { return sgn(mant_); }

  Dyadic operator-() const { return Dyadic(-mant_, exp_, no_normalize{}); }
  Dyadic abs() const { return sign() < 0 ? -*this : *this; }
  Dyadic mul_pow2(std::int64_t k) const {
    return is_zero() ? Dyadic() : Dyadic(mant_, exp_ + k, no_normalize{});
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);

  /// Exact three-way comparison.
  static int cmp(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }

  /// Exact comparison against a rational.
  static int cmp(const Dyadic& a, const Rational& q);

  Integer floor() const;
  Integer ceil() const;

  /// Number of mantissa bits (0 for zero).
  std::size_t mantissa_bits() const {
    return is_zero() ? 0 : mpz_sizeinbase(mant_.get_mpz_t(), 2);
  }
  /// b such that 2^b <= |value| < 2^(b+1). Requires nonzero.
  std::int64_t magnitude_exponent() const;

  /// Round to `bits` mantissa bits, ties toward even; returns the rounded
  /// value and an upper bound on the absolute rounding error.
  std::pair<Dyadic, Dyadic> round_nearest(unsigned bits) const;
  /// Round |value| up to at most `bits` mantissa bits, preserving sign;
  /// result magnitude >= input magnitude. Used to keep radii short.
  Dyadic round_away(unsigned bits) const;
  /// Directed rounding on the real line to at most `bits` mantissa bits.
  Dyadic round_dir(unsigned bits, bool upward) const;

  /// a/b with directed rounding to about `bits` significant bits.
  /// `upward` selects the rounding direction on the real line.
  static Dyadic div_dir(const Dyadic& a, const Dyadic& b, unsigned bits, bool upward);

  Rational to_rational() const;
  /// Exact only when the denominator is a power of two.
  static std::optional<Dyadic> from_rational_exact(const Rational& q);

  double to_double() const;
  /// "m*2^e" (or plain integer when e == 0).
  std::string to_string() const;

 private:
  struct no_normalize {};
  Dyadic(Integer mantissa, std::int64_t exponent, no_normalize)
      : mant_(std::move(mantissa)), exp_(exponent) {}
  void normalize();

  Integer mant_;
  std::int64_t exp_;
};

}  // namespace polygrowth
