#include "polygrowth/growth.hpp"

#include <cmath>

#include "polygrowth/errors.hpp"

namespace polygrowth {

namespace {

Integer ipow(long base, long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(e));
  return r;
}

// bits with target >= 2^-bits (coarse, within 1).
int neg_log2_ceil(const Rational& target) {
  if (target.sign() <= 0) throw DomainError("target radius must be positive");
  auto nb = static_cast<long>(mpz_sizeinbase(target.num().get_mpz_t(), 2));
  auto db = static_cast<long>(mpz_sizeinbase(target.den().get_mpz_t(), 2));
  long bits = db - nb + 1;
  return static_cast<int>(bits < 0 ? 0 : bits);
}

std::size_t rational_digits(const Rational& q) {
  return dec_digit_count(q.num()) + dec_digit_count(q.den());
}

const char* status_text(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::DivergesToInfinity: return "diverges";
    case OrbitStatus::Cycle: return "the orbit cycles";
    default: return "divergence could not be certified within budgets";
  }
}

struct Prepared {
  SignNormalization sn;
  NormalizationData norm;
  std::vector<Rational> values;
  std::size_t m = 0;
  Rational lam2_lo;  // exact rational with lam2_lo^(d-1) <= cd^2
};

Prepared prepare(const RationalPoly& p, const Rational& x0, const GrowthOptions& opts) {
  if (opts.start_index < 0) throw DomainError("start index must be nonnegative");
  Prepared pr;
  pr.sn = normalize_sign(p, x0);
  pr.norm = derive_normalization(pr.sn.poly);
  OrbitRecord rec = certify_divergence(pr.sn.poly, pr.sn.x0, opts.orbit_budget);
  if (rec.status != OrbitStatus::DivergesToInfinity)
    throw NotDivergentError(status_text(rec.status));
  pr.m = *rec.escape_index;
  pr.values = std::move(rec.values);
  pr.lam2_lo = rational_kth_root_lower(pr.norm.cd.pow(2),
                                       static_cast<unsigned>(pr.norm.d - 1));
  return pr;
}

bool extend_values(Prepared& pr, std::size_t upto, std::size_t digit_budget) {
  while (pr.values.size() <= upto) {
    Rational next = pr.sn.poly.eval(pr.values.back());
    if (rational_digits(next) > digit_budget) return false;
    pr.values.push_back(std::move(next));
  }
  return true;
}

// Tail bound at depth N, covering sum_{k>=N} d^-(n0+k+1) log(y_{k+1}/y_k^d).
//
// For every k >= N we have y_k >= y_N >= y* (escape guarantees doubling,
// hence monotonicity, beyond the escape index), so
//   |log(y_{k+1}/y_k^d)| = |log(1 + E(y_k))| <= 2|E(y_k)|
//     (|E| <= 1/2 beyond y*, and |log(1+e)| <= 2|e| for |e| <= 1/2)
//   <= 2*CP / y_k^2 <= 2*CP / y_N^2.
// The weights sum to sum_{k>=N} d^-(n0+k+1) = d^-(n0+N)/(d-1) <= 1/(d-1),
// giving |tail| <= 2*CP / ((d-1) * y_N^2). Finally
//   y_N^2 = lambda^2 (x_N+s)^2 >= lam2_lo * (x_N+s)^2
// with the exact rational bound lam2_lo^(d-1) <= cd^2 = lambda^(2(d-1)).
Rational tail_bound_at(const Prepared& pr, std::size_t N) {
  if (pr.norm.CP.is_zero()) return Rational(0);
  Rational y2 = pr.lam2_lo * (pr.values[N] + pr.norm.shift).pow(2);
  return Rational(2) * pr.norm.CP / (Rational(pr.norm.d - 1) * y2);
}

Dyadic tail_to_dyadic_upper(const Rational& tail) {
  if (tail.is_zero()) return Dyadic::zero();
  Dyadic num(tail.num(), 0), den(tail.den(), 0);
  return Dyadic::div_dir(num, den, 32, true).round_away(24);
}

std::size_t choose_depth(Prepared& pr, const GrowthOptions& opts) {
  if (opts.fixed_depth) {
    std::size_t N = std::max(*opts.fixed_depth, pr.m);
    if (!extend_values(pr, N, opts.orbit_budget.digit_budget))
      throw Error("digit budget too small for the requested depth");
    return N;
  }
  Rational half_target = opts.target_radius / Rational(2);
  std::size_t N = pr.m;
  while (true) {
    if (!extend_values(pr, N, opts.orbit_budget.digit_budget)) {
      // Should not happen: the loop below only advances after a
      // successful extension.
      return N > pr.m ? N - 1 : pr.m;
    }
    if (tail_bound_at(pr, N) <= half_target) return N;
    if (!extend_values(pr, N + 1, opts.orbit_budget.digit_budget)) return N;
    ++N;
  }
}

Ball sum_at_precision(const Prepared& pr, std::size_t N, int n0, Precision prec) {
  const NormalizationData& norm = pr.norm;
  long d = norm.d;
  Ball log_cd = ball_log(ball_from_rational(norm.cd, prec), prec);
  Ball log_lambda = ball_mul_rational(log_cd, Rational(1, d - 1), prec);
  Ball log_xs = ball_log(ball_from_rational(pr.values[pr.m] + norm.shift, prec), prec);
  Ball log_ym = ball_add(log_lambda, log_xs, prec);

  Integer dpow = ipow(d, n0 + static_cast<long>(pr.m));
  Ball acc = ball_mul_rational(log_ym, Rational(Integer(1), dpow), prec);
  for (std::size_t k = pr.m; k < N; ++k) {
    dpow *= d;  // d^(n0+k+1)
    Rational t = step_ratio(norm, pr.values, k) - Rational(1);
    if (t.is_zero()) continue;
    Ball lg = ball_log1p(ball_from_rational(t, prec), prec);
    acc = ball_add(acc, ball_mul_rational(lg, Rational(Integer(1), dpow), prec), prec);
  }
  return acc;
}

}  // namespace

Rational step_ratio(const NormalizationData& norm,
                    const std::vector<Rational>& values, std::size_t k) {
  if (k + 1 >= values.size()) throw DomainError("step ratio index out of range");
  Rational num = values[k + 1] + norm.shift;
  Rational den_base = values[k] + norm.shift;
  if (den_base.is_zero()) throw DomainError("step ratio with x_k + s = 0");
  return num / (norm.cd * den_base.pow(static_cast<unsigned long>(norm.d)));
}

GrowthConstant compute_log_alpha(const RationalPoly& p, const Rational& x0,
                                 const GrowthOptions& opts) {
  Prepared pr = prepare(p, x0, opts);
  std::size_t N = choose_depth(pr, opts);
  Rational tail = tail_bound_at(pr, N);
  Dyadic tail_up = tail_to_dyadic_upper(tail);

  int bits = std::max(64, neg_log2_ceil(opts.target_radius) + 48);
  Ball log_alpha;
  bool converged = false;
  int used_bits = bits;
  for (;;) {
    Precision prec(used_bits);
    Ball acc = sum_at_precision(pr, N, opts.start_index, prec);
    log_alpha = Ball(acc.mid(), (acc.rad() + tail_up).round_away(24));
    if (Dyadic::cmp(log_alpha.rad(), opts.target_radius) <= 0) {
      converged = true;
      break;
    }
    // The tail part is immune to working precision; only retry while the
    // rounding part can still be blamed.
    if (used_bits >= opts.max_bits || Dyadic::cmp(tail_up, opts.target_radius) > 0) break;
    used_bits = std::min(opts.max_bits, used_bits * 2);
  }

  Precision prec(used_bits);
  GrowthConstant gc;
  gc.log_alpha = log_alpha;
  gc.alpha = ball_exp(log_alpha, prec);
  Ball log_cd = ball_log(ball_from_rational(pr.norm.cd, prec), prec);
  gc.log_A = ball_mul_rational(log_cd, Rational(-1, pr.norm.d - 1), prec);
  gc.A = ball_exp(gc.log_A, prec);
  gc.B = pr.norm.B;
  gc.d = pr.norm.d;
  gc.start_index = opts.start_index;
  gc.start_m = pr.m;
  gc.depth_N = N;
  gc.tail_bound = tail_up;
  gc.norm = pr.norm;
  gc.conjugated = pr.sn.conjugated;
  gc.converged = converged;
  gc.precision_bits = used_bits;
  gc.poly = pr.sn.poly;
  gc.x0 = pr.sn.x0;
  gc.values = std::move(pr.values);
  return gc;
}

Ball product_formula_alpha(const RationalPoly& p, const Rational& x0,
                           const GrowthOptions& opts) {
  Prepared pr = prepare(p, x0, opts);
  std::size_t N = choose_depth(pr, opts);

  int bits = std::max(64, neg_log2_ceil(opts.target_radius) + 64);
  if (bits > opts.max_bits) bits = opts.max_bits;
  Precision prec(bits);
  long d = pr.norm.d;
  long n0 = opts.start_index;

  Integer root_m = ipow(d, n0 + static_cast<long>(pr.m));
  Integer root_cd = root_m * (d - 1);
  if (!root_cd.fits_ulong_p())
    throw PrecisionError("product route root index overflows");

  Ball acc = Ball::exact_int(1);
  if (pr.norm.cd != Rational(1)) {
    acc = ball_root(ball_from_rational(pr.norm.cd, prec), root_cd.get_ui(), prec);
  }
  Rational ym_base = pr.values[pr.m] + pr.norm.shift;
  if (ym_base != Rational(1)) {
    Ball f = ball_root(ball_from_rational(ym_base, prec), root_m.get_ui(), prec);
    acc = ball_mul(acc, f, prec);
  }

  Integer dk = root_m;
  std::size_t effective_N = N;
  for (std::size_t k = pr.m; k < N; ++k) {
    dk *= d;  // d^(n0+k+1)
    if (!dk.fits_ulong_p()) {
      effective_N = k;  // truncate here; the tail bound below covers the rest
      break;
    }
    Rational r = step_ratio(pr.norm, pr.values, k);
    if (r == Rational(1)) continue;
    Ball f = ball_root(ball_from_rational(r, prec), dk.get_ui(), prec);
    acc = ball_mul(acc, f, prec);
  }

  // Remaining factors form exp(T) with |T| bounded by the same tail bound
  // as the logarithmic route.
  Rational tail = tail_bound_at(pr, effective_N);
  if (!tail.is_zero()) {
    Ball factor = ball_exp(Ball(Dyadic::zero(), tail_to_dyadic_upper(tail)), prec);
    acc = ball_mul(acc, factor, prec);
  }
  return acc;
}

Ball predict_term(const GrowthConstant& gc, int n, Precision prec) {
  if (n < 0) throw DomainError("sequence index must be nonnegative");
  Integer dn = ipow(gc.d, n);
  Dyadic scaled_rad = gc.log_alpha.rad() * Dyadic(dn, 0);
  if (scaled_rad >= Dyadic::one())
    throw PrecisionError(
        "enclosure of log alpha too wide for this index; recompute with a "
        "smaller target radius");

  int base_bits = std::max(prec.bits, gc.precision_bits);
  Ball L = ball_add(ball_mul_rational(gc.log_alpha, Rational(dn), Precision(base_bits + 16)),
                    gc.log_A, Precision(base_bits + 16));
  // exp carries |L| / ln 2 integer bits; keep that many extra mantissa bits
  // so the fractional part stays resolved.
  double lmag = std::abs(L.upper().to_double());
  if (lmag > 1.0e9) throw PrecisionError("predicted term exponent too large");
  int extra = static_cast<int>(lmag * 1.4426950408889634) + 16;
  Ball F = ball_exp(L, Precision(base_bits + extra));
  Ball shifted = ball_add_rational(F, gc.B, Precision(base_bits + extra));
  return gc.conjugated ? -shifted : shifted;
}

Ball residual(const GrowthConstant& gc, const std::vector<Rational>& orbit_values,
              int n, Precision prec) {
  long j = static_cast<long>(n) - gc.start_index;
  if (j < 0 || static_cast<std::size_t>(j) >= orbit_values.size())
    throw DomainError("orbit does not cover the requested index");
  Ball pred = predict_term(gc, n, prec);
  Ball value = ball_from_rational(orbit_values[static_cast<std::size_t>(j)],
                                  Precision(prec.bits + 16));
  return ball_sub(value, pred, prec);
}

bool ClosedFormReport::all_verified() const {
  for (const auto& r : rows) {
    if (r.verdict != Verdict::Verified) return false;
  }
  return !rows.empty();
}

bool ClosedFormReport::any_failed() const {
  for (const auto& r : rows) {
    if (r.verdict == Verdict::Failed) return true;
  }
  return false;
}

bool ClosedFormReport::any_ambiguous() const {
  for (const auto& r : rows) {
    if (r.verdict == Verdict::AmbiguousRadius) return true;
  }
  return false;
}

ClosedFormReport verify_closed_form(const GrowthConstant& gc,
                                    const std::vector<Rational>& orbit_values,
                                    RoundMode mode, int from_n, int to_n) {
  if (from_n > to_n) throw DomainError("empty verification range");
  ClosedFormReport rep;
  rep.requested = mode;
  rep.from_n = from_n;
  rep.to_n = to_n;

  Precision prec(std::max(64, gc.precision_bits));
  RoundMode eff = mode;
  if (mode == RoundMode::Auto) {
    // Residual sign analysis: a certifiably nonpositive residual means the
    // prediction sits at or above the integer, which is the floor shape;
    // otherwise center with rounding.
    eff = RoundMode::Round;
    try {
      Ball r0 = residual(gc, orbit_values, from_n, prec);
      if (r0.upper().sign() <= 0) eff = RoundMode::Floor;
    } catch (const PrecisionError&) {
    }
  }
  rep.chosen = eff;

  for (int n = from_n; n <= to_n; ++n) {
    long j = static_cast<long>(n) - gc.start_index;
    if (j < 0 || static_cast<std::size_t>(j) >= orbit_values.size())
      throw DomainError("orbit does not cover the requested range");
    ClosedFormRow row;
    row.n = n;
    try {
      Ball pred = predict_term(gc, n, prec);
      row.prediction = pred;
      Ball probe = eff == RoundMode::Round
                       ? ball_add_rational(pred, Rational(1, 2), prec)
                       : pred;
      Integer flo = probe.lower().floor();
      Integer fhi = probe.upper().floor();
      if (flo != fhi) {
        row.verdict = Verdict::AmbiguousRadius;
      } else {
        row.predicted_int = flo;
        row.verdict = (Rational(flo) == orbit_values[static_cast<std::size_t>(j)])
                          ? Verdict::Verified
                          : Verdict::Failed;
      }
    } catch (const PrecisionError&) {
      row.verdict = Verdict::AmbiguousRadius;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Rational recommended_verify_target(const GrowthConstant& coarse, int to_n,
                                   int max_bits) {
  if (to_n < 0) throw DomainError("sequence index must be nonnegative");
  double la = coarse.log_alpha.mid().to_double();
  if (la <= 0) la = 1e-3;
  double log2d = std::log2(static_cast<double>(coarse.d));
  if (to_n * log2d > 50)
    throw PrecisionError("verification range beyond any feasible precision");
  double dn = std::pow(static_cast<double>(coarse.d), to_n);
  // The residual at index n is ~ alpha^(-d^n) while the prediction scales
  // like alpha^(d^n) * d^n * rad(log alpha); undercutting it needs about
  // 2 d^n log2(alpha) + log2(d^n) bits.
  double bits = 2.0 * dn * la * 1.4426950408889634 + to_n * log2d + 24;
  if (bits > 0.9 * static_cast<double>(max_bits))
    throw PrecisionError("verification range needs more precision than the configured budget");
  auto dec = static_cast<unsigned>(bits * 0.30103) + 4;
  return Rational::pow10_neg(dec);
}

}  // namespace polygrowth
