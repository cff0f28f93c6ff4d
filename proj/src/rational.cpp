#include "polygrowth/rational.hpp"

#include <cctype>

#include "polygrowth/errors.hpp"

namespace polygrowth {

Rational::Rational(const Integer& num, const Integer& den) : q_(num, den) {
  if (sgn(den) == 0) throw DomainError("rational with zero denominator");
  q_.canonicalize();
}

Rational::Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}

Rational Rational::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  return Rational(den(), num());
}

Rational Rational::pow(unsigned long e) const {
  mpq_class r;
  mpz_pow_ui(r.get_num().get_mpz_t(), q_.get_num().get_mpz_t(), e);
  mpz_pow_ui(r.get_den().get_mpz_t(), q_.get_den().get_mpz_t(), e);
  return Rational(std::move(r));  // powers of a canonical fraction stay canonical
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}

Integer Rational::floor() const {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  return r;
}

Integer Rational::ceil() const {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  return r;
}

std::string Rational::to_string() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::optional<Rational> Rational::parse(std::string_view text) {
  std::size_t i = 0, n = text.size();
  auto skip_ws = [&] { while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip_ws();
  std::size_t start = i;
  if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t digits_begin = i;
  while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == digits_begin) return std::nullopt;
  std::string int_part(text.substr(start, i - start));

  if (i < n && text[i] == '/') {
    ++i;
    std::size_t den_begin = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_begin) return std::nullopt;
    std::string den_part(text.substr(den_begin, i - den_begin));
    skip_ws();
    if (i != n) return std::nullopt;
    Integer den(den_part);
    if (sgn(den) == 0) return std::nullopt;
    return Rational(Integer(int_part), den);
  }

  if (i < n && text[i] == '.') {
    ++i;
    std::size_t frac_begin = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    std::string frac(text.substr(frac_begin, i - frac_begin));
    skip_ws();
    if (i != n) return std::nullopt;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer whole(int_part);
    Integer frac_num = frac.empty() ? Integer(0) : Integer(frac);
    if (whole < 0 || int_part[0] == '-') frac_num = -frac_num;
    return Rational(whole * scale + frac_num, scale);
  }

  skip_ws();
  if (i != n) return std::nullopt;
  return Rational(Integer(int_part));
}

Rational Rational::pow10_neg(unsigned k) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, k);
  return Rational(Integer(1), den);
}

unsigned dec_digit_count(const Integer& n) {
  Integer a = ::abs(n);
  // mpz_sizeinbase may report one digit too many; fix up exactly.
  unsigned est = static_cast<unsigned>(mpz_sizeinbase(a.get_mpz_t(), 10));
  if (est <= 1) return 1;
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, est - 1);
  return a < p ? est - 1 : est;
}

}  // namespace polygrowth
