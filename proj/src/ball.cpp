#include "polygrowth/ball.hpp"

#include <algorithm>
#include <cmath>

#include "polygrowth/errors.hpp"

namespace polygrowth {

namespace {

// Radii carry few mantissa bits; they are always rounded away from zero.
constexpr unsigned kRadiusBits = 24;

// Round an exactly computed midpoint/radius pair into a Ball at the
// requested precision, absorbing the midpoint rounding error.
Ball finalize(const Dyadic& mid_exact, const Dyadic& rad_exact, Precision prec) {
  auto [mid, err] = mid_exact.round_nearest(static_cast<unsigned>(prec.bits));
  Dyadic rad = (rad_exact + err).round_away(kRadiusBits);
  return Ball(mid, rad);
}

std::int64_t bit_count(std::int64_t v) {
  std::int64_t b = 0;
  for (std::int64_t x = v < 0 ? -v : v; x > 0; x >>= 1) ++b;
  return b;
}

}  // namespace

Precision::Precision(int b) : bits(b) {
  if (b < 8) throw DomainError("precision below 8 bits");
  if (b > (1 << 26)) throw DomainError("precision unreasonably large");
}

Ball::Ball(Dyadic mid, Dyadic rad) : mid_(std::move(mid)), rad_(std::move(rad)) {
  if (rad_.sign() < 0) throw DomainError("negative ball radius");
}

Ball Ball::from_endpoints(const Dyadic& lo, const Dyadic& hi) {
  if (lo > hi) throw DomainError("interval endpoints out of order");
  Dyadic mid = (lo + hi).mul_pow2(-1);
  Dyadic rad = (hi - lo).mul_pow2(-1);
  return Ball(mid, rad);
}

bool Ball::contains(const Rational& q) const {
  return Dyadic::cmp(lower(), q) <= 0 && Dyadic::cmp(upper(), q) >= 0;
}

bool Ball::contains_zero() const {
  return lower().sign() <= 0 && upper().sign() >= 0;
}

bool Ball::contains_interval_of(const Ball& inner) const {
  return lower() <= inner.lower() && inner.upper() <= upper();
}

bool Ball::intersects(const Ball& other) const {
  return lower() <= other.upper() && other.lower() <= upper();
}

std::string Ball::to_string() const {
  return "[" + mid_.to_string() + " +/- " + rad_.to_string() + "]";
}

Ball ball_from_rational(const Rational& q, Precision prec) {
  if (auto d = Dyadic::from_rational_exact(q)) return Ball::exact(*d);
  Dyadic num(q.num(), 0), den(q.den(), 0);
  unsigned bits = static_cast<unsigned>(prec.bits) + 4;
  Dyadic lo = Dyadic::div_dir(num, den, bits, false);
  Dyadic hi = Dyadic::div_dir(num, den, bits, true);
  return finalize((lo + hi).mul_pow2(-1), (hi - lo).mul_pow2(-1), prec);
}

Ball ball_add(const Ball& a, const Ball& b, Precision prec) {
  return finalize(a.mid() + b.mid(), a.rad() + b.rad(), prec);
}

Ball ball_sub(const Ball& a, const Ball& b, Precision prec) {
  return ball_add(a, -b, prec);
}

Ball ball_mul(const Ball& a, const Ball& b, Precision prec) {
  // (ma +/- ra)(mb +/- rb) c ma*mb +/- (|ma| rb + |mb| ra + ra rb).
  Dyadic mid = a.mid() * b.mid();
  Dyadic rad = a.mid().abs() * b.rad() + b.mid().abs() * a.rad() + a.rad() * b.rad();
  return finalize(mid, rad, prec);
}

namespace {

// Reciprocal of an interval that excludes zero.
Ball ball_recip(const Ball& b, Precision prec) {
  bool neg;
  if (b.strictly_positive()) {
    neg = false;
  } else if (b.strictly_negative()) {
    neg = true;
  } else {
    throw DomainError("division by an interval containing zero");
  }
  Ball v = neg ? -b : b;
  unsigned bits = static_cast<unsigned>(prec.bits) + 4;
  // 1/[l,u] = [1/u, 1/l] for l > 0.
  Dyadic lo = Dyadic::div_dir(Dyadic::one(), v.upper(), bits, false);
  Dyadic hi = Dyadic::div_dir(Dyadic::one(), v.lower(), bits, true);
  Ball r = finalize((lo + hi).mul_pow2(-1), (hi - lo).mul_pow2(-1), prec);
  return neg ? -r : r;
}

}  // namespace

Ball ball_div(const Ball& a, const Ball& b, Precision prec) {
  Precision inner(prec.bits + 8);
  return ball_mul(a, ball_recip(b, inner), prec);
}

Ball ball_add_rational(const Ball& a, const Rational& q, Precision prec) {
  Precision inner(prec.bits + 8);
  return ball_add(a, ball_from_rational(q, inner), prec);
}

Ball ball_mul_rational(const Ball& a, const Rational& q, Precision prec) {
  Precision inner(prec.bits + 8);
  return ball_mul(a, ball_from_rational(q, inner), prec);
}

Ball ball_pow_ui(const Ball& a, unsigned long e, Precision prec) {
  Precision inner(prec.bits + 2 * bit_count(static_cast<std::int64_t>(e | 1)) + 8);
  Ball acc = Ball::exact_int(1);
  Ball base = a;
  while (e > 0) {
    if (e & 1ul) acc = ball_mul(acc, base, inner);
    e >>= 1ul;
    if (e > 0) base = ball_mul(base, base, inner);
  }
  return finalize(acc.mid(), acc.rad(), prec);
}

// ---------------------------------------------------------------------------
// Elementary point functions via fixed-point series with proven remainders
// ---------------------------------------------------------------------------

namespace {

// Smallest z with |d| <= 2^z (d nonzero).
std::int64_t upper_pow2_exp(const Dyadic& d) {
  std::int64_t mag = d.magnitude_exponent();
  bool is_pow2 = mpz_cmpabs_ui(d.mantissa().get_mpz_t(), 1) == 0;
  return is_pow2 ? mag : mag + 1;
}

// Nearest integer to u * 2^w for exact dyadic u; |error| <= 2^(-w-1).
Integer fixed_from_dyadic(const Dyadic& u, std::int64_t w) {
  Dyadic scaled = u.mul_pow2(w);
  if (scaled.exponent() >= 0) return scaled.floor();
  Integer twice = scaled.mul_pow2(1).floor() + 1;  // floor(2x) + 1
  Integer r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), twice.get_mpz_t(), 1);  // round-half-up
  return r;
}

// Enclosure of log(1+u) for exact dyadic |u| <= 1/2, evaluated as the
// alternating series sum_{j>=1} (-1)^(j+1) u^j / j in fixed-point
// arithmetic at scale 2^w.
//
// Error accounting (all in units of 2^-w):
//  * A_j approximates u^j 2^w. A_1 is exact to 1/2; the recurrence
//    A_{j+1} = floor(A_j A_1 / 2^w) adds at most |u^j| * 1/2 (from A_1)
//    plus eps_j * |u| (propagated) plus 1 (floor), and with |u| <= 1/2
//    this stays below eps = 3 for every j.
//  * Each term floor(A_j / j) adds at most eps/j + 1 <= 4.
//  * Truncation after J terms: |sum_{j>J} (-u)^j / j| <=
//    |u|^(J+1) / ((J+1)(1-|u|)) <= 2 |u|^(J+1), and J is chosen so that
//    |u|^(J+1) <= 2^-(prec+6).
Ball log1p_series(const Dyadic& u, int prec) {
  if (u.is_zero()) return Ball();
  std::int64_t zexp = upper_pow2_exp(u);  // |u| <= 2^zexp, zexp <= -1
  if (zexp > -1) throw DomainError("log1p series argument above 1/2");
  std::int64_t bits_per_term = -zexp;
  std::int64_t terms = (prec + 6) / bits_per_term + 2;
  std::int64_t w = prec + 10 + bit_count(terms);

  Integer a1 = fixed_from_dyadic(u, w);
  Integer aj = a1, sum = 0;
  for (std::int64_t j = 1; j <= terms; ++j) {
    Integer term;
    mpz_tdiv_q(term.get_mpz_t(), aj.get_mpz_t(), Integer(j).get_mpz_t());
    if (j & 1) {
      sum += term;
    } else {
      sum -= term;
    }
    if (j < terms) {
      aj *= a1;
      mpz_fdiv_q_2exp(aj.get_mpz_t(), aj.get_mpz_t(), static_cast<mp_bitcnt_t>(w));
    }
  }
  Dyadic mid(sum, -w);
  Dyadic rad = Dyadic(4 * terms, 0).mul_pow2(-w) + Dyadic::pow2(-(prec + 5));
  return Ball(mid, rad);
}

// Enclosure of exp(u) for exact dyadic |u| <= 1/2, via the Taylor series
// in fixed point at scale 2^w.
//
// Error accounting (units of 2^-w): B_0 = 2^w is exact; the step
// B_j = trunc(floor(B_{j-1} A_1 / 2^w) / j) adds at most
// eps_{j-1}|u|/j (propagated) + B_{j-1} 2^-w |eps_1| / j (from A_1, with
// B_{j-1} 2^-w <= 2 and |eps_1| <= 1/2) + 1/j + 1 (the two divisions),
// so eps_j <= eps_{j-1}/2 + 3 stays below 6 for every j. After stopping
// at term J (when (B_J+6)|u| < J+1, i.e. the next true term is below one
// unit), the remaining tail sum_{j>J} u^j/j! is dominated by twice that
// next term, so (6J + 8) units cover summation error plus tail.
Ball exp_series(const Dyadic& u, int prec) {
  if (u.is_zero()) return Ball::exact_int(1);
  std::int64_t zexp = upper_pow2_exp(u);
  if (zexp > -1) throw DomainError("exp series argument above 1/2");
  std::int64_t w = prec + 12 + bit_count(prec);

  Integer a1 = fixed_from_dyadic(u, w);
  Integer bj;
  mpz_ui_pow_ui(bj.get_mpz_t(), 2, static_cast<unsigned long>(w));
  Integer sum = bj;
  std::int64_t j = 0;
  std::int64_t safety = 4 * w + 64;  // the loop provably stops well before this
  while (true) {
    ++j;
    if (j > safety) throw Error("exp series failed to converge");
    Integer num = bj * a1;
    mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(w));
    mpz_tdiv_q(bj.get_mpz_t(), num.get_mpz_t(), Integer(j).get_mpz_t());
    sum += bj;
    // Stop once the next term bound drops below one fixed-point unit.
    Integer next_bound = (abs(bj) + 6);
    Integer lhs = next_bound;  // |u| <= 2^zexp: shift instead of multiply
    if (zexp < 0) mpz_fdiv_q_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(),
                                  static_cast<mp_bitcnt_t>(-zexp));
    if (lhs < j + 1) break;
  }
  Dyadic mid(sum, -w);
  Dyadic rad = Dyadic(6 * j + 8, 0).mul_pow2(-w);
  return Ball(mid, rad);
}

// Point enclosure of log(m) for exact dyadic m > 0: write m = 2^K t with
// t in (2/3, 4/3], then log m = K log 2 + log1p(t - 1) with |t-1| <= 1/2.
Ball log_point(const Dyadic& m, int prec) {
  if (m.sign() <= 0) throw DomainError("log of a nonpositive value");
  std::int64_t k = m.magnitude_exponent();
  Dyadic t = m.mul_pow2(-k);  // in [1, 2)
  if (t * Dyadic(3) > Dyadic(4)) {
    t = t.mul_pow2(-1);
    ++k;
  }
  int inner = prec + 8 + static_cast<int>(bit_count(k));
  Ball s = log1p_series(t - Dyadic::one(), inner);
  if (k == 0) return s;
  Ball l2 = ball_ln2(Precision(inner));
  Ball kl2(l2.mid() * Dyadic(Integer(static_cast<long>(k)), 0),
           l2.rad() * Dyadic(Integer(static_cast<long>(k < 0 ? -k : k)), 0));
  return Ball(s.mid() + kl2.mid(), s.rad() + kl2.rad());
}

// Point enclosure of exp(m) for exact dyadic m: m = k log 2 + tau with
// |tau| <= 0.4, exp(m) = 2^k exp(tau). The reduction error (from the
// ln2 enclosure radius times k) enters through exp(x) - 1 <= 2x for
// 0 <= x <= 1/2.
Ball exp_point(const Dyadic& m, int prec) {
  if (m.is_zero()) return Ball::exact_int(1);
  double approx = m.to_double() / 0.6931471805599453;
  if (std::abs(approx) > 9.0e15) throw PrecisionError("exp argument too large");
  std::int64_t k = static_cast<std::int64_t>(std::llround(approx));
  int inner = prec + 16 + static_cast<int>(bit_count(k));
  Ball l2 = ball_ln2(Precision(inner));
  Dyadic kd(Integer(static_cast<long>(k)), 0);
  Dyadic tau_mid = m - kd * l2.mid();
  Dyadic tau_rad = kd.abs() * l2.rad();
  // Nudge k until the reduced midpoint is safely inside [-0.45, 0.45];
  // the double estimate leaves |tau| <= ~0.35 + 1 ulp, so this loop runs
  // at most a couple of times.
  int guard = 0;
  while (tau_mid.abs() * Dyadic(20) > Dyadic(9)) {
    k += tau_mid.sign() > 0 ? 1 : -1;
    if (++guard > 64) throw Error("exp argument reduction failed");
    kd = Dyadic(Integer(static_cast<long>(k)), 0);
    tau_mid = m - kd * l2.mid();
    tau_rad = kd.abs() * l2.rad();
  }
  Dyadic delta = tau_rad;
  Ball e = exp_series(tau_mid, inner);
  // exp(tau) lies in exp(tau_mid) * [exp(-delta), exp(delta)] and, for
  // delta <= 1/2, exp(+/-delta) is within [1 - delta, 1 + 2 delta].
  if (delta > Dyadic(1).mul_pow2(-1)) throw PrecisionError("exp reduction slack too large");
  Dyadic growth = e.upper() * delta * Dyadic(2);
  Ball widened(e.mid(), e.rad() + growth);
  return widened.mul_pow2(k);
}

}  // namespace

Ball ball_ln2(Precision prec) {
  // log 2 = -log(1/2) = -log1p(-1/2).
  Ball s = log1p_series(Dyadic(-1).mul_pow2(-1), prec.bits + 2);
  return -s;
}

Ball ball_log(const Ball& a, Precision prec) {
  if (!a.strictly_positive()) throw DomainError("log of an interval reaching 0");
  int inner = prec.bits + 8;
  if (a.is_exact()) {
    Ball p = log_point(a.mid(), inner);
    return finalize(p.mid(), p.rad(), prec);
  }
  // log is increasing: hull of point enclosures at outward-rounded endpoints.
  Dyadic lo = a.lower().round_dir(static_cast<unsigned>(inner) + 8, false);
  Dyadic hi = a.upper().round_dir(static_cast<unsigned>(inner) + 8, true);
  Ball plo = log_point(lo, inner);
  Ball phi = log_point(hi, inner);
  return finalize((plo.lower() + phi.upper()).mul_pow2(-1),
                  (phi.upper() - plo.lower()).mul_pow2(-1), prec);
}

Ball ball_exp(const Ball& a, Precision prec) {
  int inner = prec.bits + 8;
  if (a.is_exact()) {
    Ball p = exp_point(a.mid(), inner);
    return finalize(p.mid(), p.rad(), prec);
  }
  Dyadic lo = a.lower().round_dir(static_cast<unsigned>(inner) + 8, false);
  Dyadic hi = a.upper().round_dir(static_cast<unsigned>(inner) + 8, true);
  Ball plo = exp_point(lo, inner);
  Ball phi = exp_point(hi, inner);
  return finalize((plo.lower() + phi.upper()).mul_pow2(-1),
                  (phi.upper() - plo.lower()).mul_pow2(-1), prec);
}

Ball ball_log1p(const Ball& t, Precision prec) {
  if (Dyadic::cmp(t.lower(), Rational(-1)) <= 0)
    throw DomainError("log1p of an interval reaching -1");
  int inner = prec.bits + 8;
  Dyadic quarter = Dyadic::pow2(-2);
  if (t.upper() <= quarter && t.lower() >= -quarter) {
    // Small arguments: evaluate the series at the endpoints directly, so
    // the output radius scales with the input radius.
    if (t.is_exact()) {
      Ball p = log1p_series(t.mid(), inner);
      return finalize(p.mid(), p.rad(), prec);
    }
    Ball plo = log1p_series(t.lower(), inner);
    Ball phi = log1p_series(t.upper(), inner);
    return finalize((plo.lower() + phi.upper()).mul_pow2(-1),
                    (phi.upper() - plo.lower()).mul_pow2(-1), prec);
  }
  Ball shifted(t.mid() + Dyadic::one(), t.rad());
  return ball_log(shifted, prec);
}

namespace {

// Directed k-th root of an exact dyadic v > 0 at about `bits` significant
// bits, via integer k-th roots: scale v by 2^(-k*g) so the floor root
// carries enough bits, then undo the scaling exactly.
Dyadic root_dir(const Dyadic& v, unsigned long k, unsigned bits, bool upward) {
  std::int64_t mag = v.magnitude_exponent();
  std::int64_t g = mag / static_cast<std::int64_t>(k) -
                   static_cast<std::int64_t>(bits) - 2;
  std::int64_t shift = v.exponent() - static_cast<std::int64_t>(k) * g;
  Integer x = v.mantissa();
  if (shift >= 0) {
    mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    Integer r;
    int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (upward && !exact) r += 1;
    return Dyadic(r, g);
  }
  Integer q;
  if (upward) {
    mpz_cdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  } else {
    mpz_fdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  Integer r;
  int exact = mpz_root(r.get_mpz_t(), q.get_mpz_t(), k);
  if (upward && !exact) r += 1;
  return Dyadic(r, g);
}

}  // namespace

Ball ball_root(const Ball& a, unsigned long k, Precision prec) {
  if (k == 0) throw DomainError("zeroth root");
  if (!a.strictly_positive()) throw DomainError("root of an interval reaching 0");
  if (k == 1) return a;
  unsigned bits = static_cast<unsigned>(prec.bits) + 4;
  Dyadic lo = root_dir(a.lower(), k, bits, false);
  Dyadic hi = root_dir(a.upper(), k, bits, true);
  return finalize((lo + hi).mul_pow2(-1), (hi - lo).mul_pow2(-1), prec);
}

IntegerScan contains_integer(const Ball& a) {
  Integer c = a.lower().ceil();
  Integer f = a.upper().floor();
  if (c > f) return {IntegerScanKind::NoInteger, Integer(0)};
  if (c == f) return {IntegerScanKind::UniqueInteger, c};
  return {IntegerScanKind::Multiple, Integer(0)};
}

namespace {

Rational pow10_rational(std::int64_t e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(p) : Rational(Integer(1), p);
}

// Largest E with 10^E <= v, for exact dyadic v > 0.
std::int64_t decimal_exponent(const Dyadic& v) {
  double est = static_cast<double>(v.magnitude_exponent()) * 0.30102999566398119;
  auto e = static_cast<std::int64_t>(std::floor(est));
  while (Dyadic::cmp(v, pow10_rational(e)) < 0) --e;
  while (Dyadic::cmp(v, pow10_rational(e + 1)) >= 0) ++e;
  return e;
}

// floor(v * 10^k) exactly.
Integer scaled_floor(const Dyadic& v, std::int64_t k) {
  Rational scaled = v.to_rational() * pow10_rational(k);
  return scaled.floor();
}

std::string format_digits(const std::string& digits, std::int64_t E, bool negative) {
  std::string body;
  auto D = static_cast<std::int64_t>(digits.size());
  if (E >= 0 && E < D) {
    body = digits.substr(0, static_cast<std::size_t>(E) + 1);
    if (E + 1 < D) body += "." + digits.substr(static_cast<std::size_t>(E) + 1);
  } else if (E < 0 && E >= -4) {
    body = "0." + std::string(static_cast<std::size_t>(-E - 1), '0') + digits;
  } else {
    body = digits.substr(0, 1);
    if (D > 1) body += "." + digits.substr(1);
    body += "e" + std::to_string(E);
  }
  return negative ? "-" + body : body;
}

}  // namespace

DecimalResult ball_to_decimal(const Ball& a, unsigned digits) {
  if (digits == 0) throw DomainError("zero digits requested");
  Dyadic lo = a.lower(), hi = a.upper();
  if (lo.is_zero() && hi.is_zero()) {
    std::string z = "0";
    return {DecimalKind::Exact, z};
  }
  bool negative = false;
  if (hi.sign() < 0) {
    negative = true;
    std::swap(lo, hi);
    lo = -lo;
    hi = -hi;
  } else if (lo.sign() <= 0) {
    // The interval touches zero: no leading digit can be certified.
    return {DecimalKind::InsufficientRadius, ""};
  }
  std::int64_t E = decimal_exponent(lo);
  std::int64_t k = static_cast<std::int64_t>(digits) - 1 - E;
  Integer n_lo = scaled_floor(lo, k);
  Integer n_hi = scaled_floor(hi, k);
  if (n_lo != n_hi) return {DecimalKind::InsufficientRadius, ""};
  std::string digit_str = n_lo.get_str();
  std::string out = format_digits(digit_str, E, negative);
  if (a.rad().is_zero()) {
    Rational scaled = lo.to_rational() * pow10_rational(k);
    if (scaled.is_integer()) return {DecimalKind::Exact, out};
  }
  return {DecimalKind::Certified, out};
}

}  // namespace polygrowth
