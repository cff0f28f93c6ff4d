#include "polygrowth/dyadic.hpp"

#include <cmath>

#include "polygrowth/errors.hpp"

namespace polygrowth {

void Dyadic::normalize() {
  if (sgn(mant_) == 0) {
    exp_ = 0;
    return;
  }
  auto low = mpz_scan1(mant_.get_mpz_t(), 0);
  if (low > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), low);
    exp_ += static_cast<std::int64_t>(low);
  }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::int64_t e = std::min(a.exp_, b.exp_);
  Integer ma = a.mant_, mb = b.mant_;
  mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exp_ - e));
  mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exp_ - e));
  return Dyadic(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return Dyadic();
  return Dyadic(a.mant_ * b.mant_, a.exp_ + b.exp_);
}

int Dyadic::cmp(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  Dyadic d = a - b;
  return d.sign();
}

int Dyadic::cmp(const Dyadic& a, const Rational& q) {
  // a = m*2^e vs p/q: compare m*2^e*den and num exactly.
  Integer lhs = a.mant_ * q.den(), rhs = q.num();
  if (a.exp_ >= 0) {
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exp_));
  } else {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-a.exp_));
  }
  return ::cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

Integer Dyadic::floor() const {
  Integer r = mant_;
  if (exp_ >= 0) {
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(exp_));
  } else {
    mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp_));
  }
  return r;
}

Integer Dyadic::ceil() const {
  Integer r = mant_;
  if (exp_ >= 0) {
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(exp_));
  } else {
    mpz_cdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp_));
  }
  return r;
}

std::int64_t Dyadic::magnitude_exponent() const {
  if (is_zero()) throw DomainError("magnitude of zero");
  return exp_ + static_cast<std::int64_t>(mantissa_bits()) - 1;
}

std::pair<Dyadic, Dyadic> Dyadic::round_nearest(unsigned bits) const {
  if (bits == 0) throw DomainError("rounding to zero bits");
  std::size_t have = mantissa_bits();
  if (have <= bits) return {*this, Dyadic::zero()};
  auto drop = static_cast<mp_bitcnt_t>(have - bits);
  Integer q, r;
  // Round to nearest: floor(m / 2^drop), then adjust on the remainder.
  mpz_fdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), drop);
  mpz_fdiv_r_2exp(r.get_mpz_t(), mant_.get_mpz_t(), drop);
  Integer half;
  mpz_ui_pow_ui(half.get_mpz_t(), 2, drop - 1);
  if (r > half || (r == half && mpz_odd_p(q.get_mpz_t()))) q += 1;
  Dyadic rounded(q, exp_ + static_cast<std::int64_t>(drop));
  // Error is at most half an ulp of the dropped scale.
  Dyadic err = Dyadic::pow2(exp_ + static_cast<std::int64_t>(drop) - 1);
  return {rounded, err};
}

Dyadic Dyadic::round_away(unsigned bits) const {
  if (bits == 0) throw DomainError("rounding to zero bits");
  std::size_t have = mantissa_bits();
  if (have <= bits) return *this;
  auto drop = static_cast<mp_bitcnt_t>(have - bits);
  Integer a = ::abs(mant_), q;
  mpz_cdiv_q_2exp(q.get_mpz_t(), a.get_mpz_t(), drop);
  if (sign() < 0) q = -q;
  return Dyadic(q, exp_ + static_cast<std::int64_t>(drop));
}

Dyadic Dyadic::round_dir(unsigned bits, bool upward) const {
  if (bits == 0) throw DomainError("rounding to zero bits");
  std::size_t have = mantissa_bits();
  if (have <= bits) return *this;
  auto drop = static_cast<mp_bitcnt_t>(have - bits);
  Integer q;
  if (upward) {
    mpz_cdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), drop);
  } else {
    mpz_fdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), drop);
  }
  return Dyadic(q, exp_ + static_cast<std::int64_t>(drop));
}

Dyadic Dyadic::div_dir(const Dyadic& a, const Dyadic& b, unsigned bits, bool upward) {
  if (b.is_zero()) throw DomainError("dyadic division by zero");
  if (a.is_zero()) return Dyadic();
  // Shift the dividend so the integer quotient carries `bits`+2 significant bits.
  std::int64_t shift = static_cast<std::int64_t>(bits) + 2 +
                       static_cast<std::int64_t>(b.mantissa_bits()) -
                       static_cast<std::int64_t>(a.mantissa_bits());
  if (shift < 0) shift = 0;
  Integer num = a.mant_;
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  Integer q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), b.mant_.get_mpz_t());
  // Floor division: true quotient lies in [q, q+1).
  if (upward && sgn(r) != 0) q += 1;
  return Dyadic(q, a.exp_ - b.exp_ - shift);
}

Rational Dyadic::to_rational() const {
  if (exp_ >= 0) {
    Integer m = mant_;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(exp_));
    return Rational(m);
  }
  Integer den(1);
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp_));
  return Rational(mant_, den);
}

std::optional<Dyadic> Dyadic::from_rational_exact(const Rational& q) {
  const Integer den = q.den();
  if (den == 1) return Dyadic(q.num(), 0);
  // Power-of-two denominator: a single set bit.
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  auto k = mpz_scan1(den.get_mpz_t(), 0);
  return Dyadic(q.num(), -static_cast<std::int64_t>(k));
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  long e2 = 0;
  double m = mpz_get_d_2exp(&e2, mant_.get_mpz_t());
  return std::ldexp(m, static_cast<int>(std::min<std::int64_t>(
                           std::max<std::int64_t>(e2 + exp_, -2000), 2000)));
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return mant_.get_str();
  return mant_.get_str() + "*2^" + std::to_string(exp_);
}

}  // namespace polygrowth
