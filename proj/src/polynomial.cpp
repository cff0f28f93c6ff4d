#include "polygrowth/polynomial.hpp"

#include <cctype>
#include <cmath>

#include "polygrowth/errors.hpp"

namespace polygrowth {

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

RationalPoly::RationalPoly(std::vector<Rational> ascending_coeffs)
    : coeffs_(std::move(ascending_coeffs)) {
  trim();
}

RationalPoly RationalPoly::constant(const Rational& c) {
  return RationalPoly(std::vector<Rational>{c});
}

RationalPoly RationalPoly::monomial(const Rational& c, unsigned k) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = c;
  return RationalPoly(std::move(v));
}

Rational RationalPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

bool RationalPoly::has_integer_coeffs() const {
  for (const auto& c : coeffs_) {
    if (!c.is_integer()) return false;
  }
  return true;
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
  return RationalPoly(std::move(v));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
  return a + (-b);
}

RationalPoly RationalPoly::operator-() const {
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c = -c;
  return RationalPoly(std::move(v));
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return RationalPoly();
  if (a.coeffs_.size() + b.coeffs_.size() - 2 > kMaxDegree)
    throw StructuralError("polynomial degree exceeds the supported maximum");
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::scaled(const Rational& c) const {
  std::vector<Rational> v = coeffs_;
  for (auto& e : v) e = e * c;
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::pow(unsigned e) const {
  RationalPoly acc = RationalPoly::constant(1);
  RationalPoly base = *this;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return acc;
}

std::string RationalPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int j = degree(); j >= 0; --j) {
    Rational c = coeff(static_cast<unsigned>(j));
    if (c.is_zero()) continue;
    const bool first = out.empty();
    const bool neg = c.sign() < 0;
    Rational mag = c.abs();
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    const bool unit = (mag == Rational(1));
    if (j == 0) {
      out += mag.to_string();
    } else {
      if (!unit) out += mag.to_string() + "*";
      out += "x";
      if (j > 1) out += "^" + std::to_string(j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Number, Var, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t pos;
  Integer value;  // for Number
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    std::size_t pos = i_;
    if (i_ >= text_.size()) return {Token::End, pos, Integer(0)};
    char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = i_;
      while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
      return {Token::Number, pos, Integer(std::string(text_.substr(b, i_ - b)))};
    }
    ++i_;
    switch (c) {
      case 'x': return {Token::Var, pos, Integer(0)};
      case '+': return {Token::Plus, pos, Integer(0)};
      case '-': return {Token::Minus, pos, Integer(0)};
      case '*': return {Token::Star, pos, Integer(0)};
      case '/': return {Token::Slash, pos, Integer(0)};
      case '^': return {Token::Caret, pos, Integer(0)};
      case '(': return {Token::LParen, pos, Integer(0)};
      case ')': return {Token::RParen, pos, Integer(0)};
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { advance(); }

  RationalPoly parse() {
    RationalPoly p = expr();
    expect(Token::End, "unexpected trailing input");
    return p;
  }

 private:
  Lexer lex_;
  Token tok_;

  void advance() { tok_ = lex_.next(); }
  void expect(Token::Kind k, const char* msg) {
    if (tok_.kind != k) throw ParseError(msg, tok_.pos);
  }

  RationalPoly expr() {
    bool negate = false;
    if (tok_.kind == Token::Plus) {
      advance();
    } else if (tok_.kind == Token::Minus) {
      negate = true;
      advance();
    }
    RationalPoly acc = term();
    if (negate) acc = -acc;
    while (tok_.kind == Token::Plus || tok_.kind == Token::Minus) {
      bool minus = tok_.kind == Token::Minus;
      advance();
      RationalPoly rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  RationalPoly term() {
    bool was_literal = false;
    RationalPoly acc = factor(&was_literal);
    for (;;) {
      if (tok_.kind == Token::Star || tok_.kind == Token::Slash) {
        bool divide = tok_.kind == Token::Slash;
        std::size_t op_pos = tok_.pos;
        advance();
        bool rhs_literal = false;
        RationalPoly rhs = factor(&rhs_literal);
        if (divide) {
          if (rhs.degree() > 0)
            throw ParseError("division by a non-constant polynomial", op_pos);
          if (rhs.is_zero()) throw ParseError("division by zero", op_pos);
          acc = acc.scaled(rhs.coeff(0).inverse());
          // A quotient of literals ("1/2") still counts as a literal, so
          // that "1/2x" parses the same way "3x" does.
          was_literal = was_literal && rhs_literal;
        } else {
          acc = acc * rhs;
          was_literal = false;
        }
      } else if (tok_.kind == Token::Var && was_literal) {
        // Implicit multiplication between a literal and x, as in "3x^2".
        bool ignored = false;
        RationalPoly rhs = factor(&ignored);
        acc = acc * rhs;
        was_literal = false;
      } else {
        return acc;
      }
    }
  }

  RationalPoly factor(bool* was_literal) {
    RationalPoly base = primary(was_literal);
    if (tok_.kind != Token::Caret) return base;
    std::size_t caret_pos = tok_.pos;
    advance();
    if (tok_.kind != Token::Number)
      throw ParseError("exponent must be a nonnegative integer literal", caret_pos);
    if (!tok_.value.fits_ulong_p() || tok_.value.get_ui() > kMaxDegree)
      throw ParseError("exponent too large", tok_.pos);
    unsigned e = static_cast<unsigned>(tok_.value.get_ui());
    advance();
    *was_literal = false;
    return base.pow(e);
  }

  RationalPoly primary(bool* was_literal) {
    switch (tok_.kind) {
      case Token::Number: {
        RationalPoly p = RationalPoly::constant(Rational(tok_.value));
        advance();
        *was_literal = true;
        return p;
      }
      case Token::Var: {
        advance();
        *was_literal = false;
        return RationalPoly::monomial(Rational(1), 1);
      }
      case Token::LParen: {
        advance();
        RationalPoly p = expr();
        expect(Token::RParen, "expected ')'");
        advance();
        *was_literal = false;
        return p;
      }
      case Token::End:
        throw ParseError("unexpected end of expression", tok_.pos);
      default:
        throw ParseError("expected a literal, 'x' or '('", tok_.pos);
    }
  }
};

}  // namespace

RationalPoly parse_poly(std::string_view text) { return Parser(text).parse(); }

bool is_integer_valued(const RationalPoly& p) {
  if (p.is_zero()) return true;
  // Forward differences of P at 0..d are the binomial-basis coefficients;
  // P maps Z to Z exactly when they are all integers.
  int d = p.degree();
  std::vector<Rational> diffs;
  diffs.reserve(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) diffs.push_back(p.eval(Rational(k)));
  for (int level = 0; level <= d; ++level) {
    if (!diffs[0].is_integer()) return false;
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) diffs[i] = diffs[i + 1] - diffs[i];
    diffs.pop_back();
  }
  return true;
}

NormalizationData derive_normalization(const RationalPoly& p) {
  int d = p.degree();
  if (d < 2) throw StructuralError("degree must be at least 2");
  Rational cd = p.leading();
  if (cd.sign() <= 0) throw StructuralError("leading coefficient must be positive");

  NormalizationData n;
  n.d = d;
  n.cd = cd;
  n.shift = p.coeff(static_cast<unsigned>(d - 1)) / (Rational(d) * cd);
  n.B = -n.shift;

  // R = P - cd*(x+s)^d; the x^(d-1) coefficients cancel by choice of s.
  RationalPoly shifted = RationalPoly(std::vector<Rational>{n.shift, Rational(1)})
                             .pow(static_cast<unsigned>(d))
                             .scaled(cd);
  n.remainder = p - shifted;
  if (n.remainder.degree() > d - 2)
    throw StructuralError("normalization failed to cancel the x^(d-1) term");

  // Step-error bound. With y = lambda*(x+s), lambda = cd^(1/(d-1)), one step
  // gives y' = y^d * (1 + E(y)) where E(y) = lambda*(R(x)+s)/y^d. Write
  // T = R + s (degree <= d-2, coefficients t_j). For y >= 1:
  //   |x| = |y/lambda - s| <= y*U + |s| <= y*(U + |s|)   with U >= 1/lambda,
  //   |T(x)| <= sum_j |t_j| (U+|s|)^j * y^j <= K * y^(d-2),
  //     where K = sum_j |t_j| (U+|s|)^j  (using j <= d-2 and y >= 1),
  //   |E(y)| <= H * K * y^(d-2) / y^d = CP / y^2   with H >= lambda.
  // U and H come from exact rational root bounds, so CP is exact; it is
  // allowed to be loose (that only delays the escape index).
  RationalPoly t = n.remainder + RationalPoly::constant(n.shift);
  Rational U = rational_kth_root_upper(cd.inverse(), static_cast<unsigned>(d - 1));
  Rational H = rational_kth_root_upper(cd, static_cast<unsigned>(d - 1));
  Rational base = U + n.shift.abs();
  Rational K(0);
  for (int j = 0; j <= t.degree(); ++j) {
    K += t.coeff(static_cast<unsigned>(j)).abs() * base.pow(static_cast<unsigned>(j));
  }
  n.CP = H * K;

  // Escape threshold y* = max(4, 2*CP). For every y >= y*:
  //   (i)  |E(y)| <= CP/y^2 <= 1/2, since y^2 >= max(1, 2*CP)*y >= 2*CP
  //        (y >= 1 makes y^2 >= y, and y >= 2*CP makes y^2 >= 2*CP*y >= 2*CP);
  //   (ii) y^d * (1 - |E(y)|) >= y^d/2 >= 2*y, since y^(d-1) >= y >= 4.
  // So beyond y* each step at least doubles y and stays beyond y*.
  n.escape = std::max(Rational(4), Rational(2) * n.CP);
  return n;
}

namespace {

// Double-precision estimate of a^(1/k) built from the bit lengths of the
// numerator and denominator; only a starting guess, never trusted.
Rational root_guess(const Rational& a, unsigned k) {
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, a.num().get_mpz_t());
  double md = mpz_get_d_2exp(&ed, a.den().get_mpz_t());
  double log2a = std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
  double le = log2a / k;
  double fl = std::floor(le);
  double frac = std::exp2(le - fl);  // in [1, 2)
  mpq_class m(frac);                 // exact conversion of the double
  Rational r(Integer(m.get_num()), Integer(m.get_den()));
  auto sh = static_cast<long>(fl);
  Integer two_sh;
  mpz_ui_pow_ui(two_sh.get_mpz_t(), 2, static_cast<unsigned long>(sh < 0 ? -sh : sh));
  return sh >= 0 ? r * Rational(two_sh) : r / Rational(two_sh);
}

}  // namespace

Rational rational_kth_root_lower(const Rational& a, unsigned k) {
  if (k == 0) throw DomainError("zeroth root");
  if (a.sign() < 0) throw DomainError("root of a negative rational");
  if (a.is_zero()) return Rational(0);
  if (k == 1) return a;
  Rational q = root_guess(a, k) * Rational(Integer(((1L << 30) - 1)), Integer(1L << 30));
  while (q.pow(k) > a) q = q * Rational(127, 128);
  return q;
}

Rational rational_kth_root_upper(const Rational& a, unsigned k) {
  if (k == 0) throw DomainError("zeroth root");
  if (a.sign() < 0) throw DomainError("root of a negative rational");
  if (a.is_zero()) return Rational(0);
  if (k == 1) return a;
  Rational q = root_guess(a, k) * Rational(Integer((1L << 30) + 1), Integer(1L << 30));
  while (q.pow(k) < a) q = q * Rational(129, 128);
  return q;
}

}  // namespace polygrowth
