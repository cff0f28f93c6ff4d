#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace polygrowth {

using Integer = mpz_class;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator; the canonical zero is 0/1.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit by design
  Rational(const Integer& n) : q_(n) {}
  Rational(const Integer& num, const Integer& den);
  Rational(long num, long den);

  const Integer num() const { return Integer(q_.get_num()); }
  const Integer den() const { return Integer(q_.get_den()); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational inverse() const;
  Rational pow(unsigned long e) const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
  Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
  Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  Integer floor() const;
  Integer ceil() const;

  /// "p/q", or just "p" when the denominator is 1.
  std::string to_string() const;

  /// Accepts "p", "p/q" and plain decimals like "-1.25" (converted exactly).
  static std::optional<Rational> parse(std::string_view text);

  double to_double() const { return q_.get_d(); }

  /// 10^(-k) as an exact rational, k >= 0.
  static Rational pow10_neg(unsigned k);

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

/// Number of decimal digits of |n| (0 has one digit). Exact.
unsigned dec_digit_count(const Integer& n);

}  // namespace polygrowth
