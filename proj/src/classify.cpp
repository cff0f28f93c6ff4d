#include "polygrowth/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "polygrowth/errors.hpp"

namespace polygrowth {

namespace {

bool is_pure_power(const RationalPoly& p) {
  if (p.degree() < 2 || p.leading() != Rational(1)) return false;
  for (int j = 0; j < p.degree(); ++j) {
    if (!p.coeff(static_cast<unsigned>(j)).is_zero()) return false;
  }
  return true;
}

// Certified significant digits implied by the enclosure radius.
unsigned certified_digit_estimate(const Ball& b) {
  if (b.rad().is_zero()) return 40;
  if (b.mid().is_zero()) return 1;
  double r = b.rad().to_double();
  double m = std::abs(b.mid().to_double());
  if (r <= 0 || m <= 0) return 40;
  double digits = std::log10(m / r) - 1;
  if (digits < 1) return 1;
  if (digits > 40) return 40;
  return static_cast<unsigned>(digits);
}

}  // namespace

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::IrrationalByTheorem1: return "IrrationalByTheorem1";
    case CertificateKind::ConsistentWithInteger: return "ConsistentWithInteger";
    default: return "Inconclusive";
  }
}

const char* to_string(IntegralityBasis b) {
  switch (b) {
    case IntegralityBasis::IntegerCoefficients: return "integer_coefficients";
    case IntegralityBasis::IntegerValuedPolynomial: return "integer_valued_polynomial";
    default: return "observed_prefix_only";
  }
}

Certificate certify_irrational(const RationalPoly& p, const Rational& x0,
                               const ClassifyOptions& opts) {
  Certificate cert;
  cert.poly = p;
  cert.x0 = x0;
  cert.start_index = opts.start_index;

  if (p.has_integer_coeffs() && x0.is_integer()) {
    cert.basis = IntegralityBasis::IntegerCoefficients;
    cert.sequence_integral = true;
  } else if (p.degree() >= 0 && is_integer_valued(p) && x0.is_integer()) {
    cert.basis = IntegralityBasis::IntegerValuedPolynomial;
    cert.sequence_integral = true;
  } else {
    cert.basis = IntegralityBasis::ObservedPrefixOnly;
  }

  GrowthOptions gopts;
  gopts.target_radius = opts.target_radius;
  gopts.start_index = opts.start_index;
  gopts.orbit_budget = opts.orbit_budget;
  gopts.max_bits = opts.max_bits;

  SignNormalization sn;
  try {
    sn = normalize_sign(p, x0);
  } catch (const StructuralError& e) {
    cert.caveats.push_back(std::string("structural: ") + e.what());
    return cert;
  }
  cert.conjugated = sn.conjugated;
  if (sn.conjugated)
    cert.caveats.push_back(
        "analysis ran on the negated orbit (x -> -x); the original sequence "
        "tends to -infinity");

  OrbitRecord rec = certify_divergence(sn.poly, sn.x0, opts.orbit_budget);
  cert.orbit_status = rec.status;
  cert.escape_index = rec.escape_index;
  if (rec.status != OrbitStatus::DivergesToInfinity) {
    cert.caveats.push_back(rec.status == OrbitStatus::Cycle
                               ? "the orbit cycles; no growth constant exists"
                               : "divergence could not be certified within budgets");
    return cert;
  }
  if (cert.basis == IntegralityBasis::ObservedPrefixOnly) {
    if (!rec.all_integers)
      cert.caveats.push_back("computed iterates are not all integers");
  }

  GrowthConstant gc;
  try {
    gc = compute_log_alpha(p, x0, gopts);
  } catch (const Error& e) {
    cert.caveats.push_back(std::string("growth enclosure failed: ") + e.what());
    return cert;
  }
  if (!gc.converged)
    cert.caveats.push_back("target radius not reached within budgets");

  // Pure powers are the one case where the constant is known exactly:
  // x_n = x0^(d^n), so alpha = x0 (at start index 0).
  if (is_pure_power(gc.poly) && gc.x0.is_integer() && gc.x0 >= Rational(2) &&
      opts.start_index == 0) {
    cert.kind = CertificateKind::ConsistentWithInteger;
    cert.integer_value = gc.x0.num();
    cert.exact_integer = true;
    cert.alpha = gc.alpha;
    cert.growth = std::move(gc);
    return cert;
  }

  IntegerScan scan = contains_integer(gc.alpha);
  int rounds = 0;
  while (scan.kind != IntegerScanKind::NoInteger && rounds < opts.tighten_rounds) {
    ++rounds;
    gopts.target_radius = gopts.target_radius * Rational::pow10_neg(8);
    GrowthConstant tighter;
    try {
      tighter = compute_log_alpha(p, x0, gopts);
    } catch (const Error&) {
      break;
    }
    if (!tighter.converged && rounds > 1) {
      gc = std::move(tighter);
      break;
    }
    gc = std::move(tighter);
    scan = contains_integer(gc.alpha);
  }
  cert.alpha = gc.alpha;

  switch (scan.kind) {
    case IntegerScanKind::NoInteger:
      if (cert.sequence_integral) {
        cert.kind = CertificateKind::IrrationalByTheorem1;
      } else {
        cert.kind = CertificateKind::Inconclusive;
        cert.caveats.push_back(
            "the enclosure excludes integers, but the irrationality dichotomy "
            "needs the whole sequence integral; establish integer coefficients "
            "or an integer-valued recursion with integer start");
      }
      break;
    case IntegerScanKind::UniqueInteger:
      cert.kind = CertificateKind::ConsistentWithInteger;
      cert.integer_value = scan.value;
      cert.caveats.push_back(
          "the enclosure keeps containing this integer after tightening; "
          "exact integrality is NOT certified");
      break;
    case IntegerScanKind::Multiple:
      cert.kind = CertificateKind::Inconclusive;
      cert.caveats.push_back("enclosure too wide to separate integers");
      break;
  }
  cert.growth = std::move(gc);
  return cert;
}

std::string format_certificate(const Certificate& cert) {
  std::ostringstream os;
  os << "kind: " << to_string(cert.kind) << "\n";
  os << "poly: " << cert.poly.to_string() << "\n";
  os << "x0: " << cert.x0.to_string() << "\n";
  os << "start_index: " << cert.start_index << "\n";
  os << "integrality_basis: " << to_string(cert.basis) << "\n";
  os << "sequence_integral: " << (cert.sequence_integral ? "yes" : "no") << "\n";
  os << "orbit_status: " << to_string(cert.orbit_status) << "\n";
  if (cert.escape_index) os << "escape_index: " << *cert.escape_index << "\n";
  os << "conjugated: " << (cert.conjugated ? "yes" : "no") << "\n";
  if (cert.alpha) {
    os << "alpha_low: " << cert.alpha->lower().to_string() << "\n";
    os << "alpha_high: " << cert.alpha->upper().to_string() << "\n";
    auto dec = ball_to_decimal(*cert.alpha, certified_digit_estimate(*cert.alpha));
    if (dec.kind != DecimalKind::InsufficientRadius)
      os << "alpha_decimal: " << dec.digits << "\n";
    IntegerScan scan = contains_integer(*cert.alpha);
    if (scan.kind == IntegerScanKind::NoInteger) {
      os << "excluded_integers: ceil(alpha_low) = " << cert.alpha->lower().ceil()
         << " > floor(alpha_high) = " << cert.alpha->upper().floor() << "\n";
    }
  }
  if (cert.growth) {
    os << "depth: " << cert.growth->depth_N << "\n";
    os << "tail_bound: " << cert.growth->tail_bound.to_string() << "\n";
    os << "precision_bits: " << cert.growth->precision_bits << "\n";
  }
  if (cert.integer_value) {
    os << "integer_value: " << cert.integer_value->get_str() << "\n";
    os << "exact_integer: " << (cert.exact_integer ? "yes" : "no") << "\n";
  }
  for (const auto& c : cert.caveats) os << "caveat: " << c << "\n";
  return os.str();
}

std::vector<AlgebraicCandidate> search_algebraic_candidates(
    const Ball& alpha, int max_degree, long max_height,
    std::optional<Rational> zero_tolerance) {
  if (max_degree < 1 || max_height < 1)
    throw DomainError("candidate search needs degree >= 1 and height >= 1");
  if (alpha.rad().is_zero() && alpha.mid().is_zero())
    throw DomainError("candidate search on the zero ball");

  // Magnitude bound M >= max(1, |alpha|+rad).
  Dyadic mag = alpha.upper().abs() + alpha.lower().abs();  // >= |alpha| + rad
  Rational M = std::max(Rational(1), mag.to_rational());
  Rational Mpow = M.pow(static_cast<unsigned long>(max_degree));

  // Precondition (heuristic, documented): the alpha enclosure must be
  // narrow enough that value enclosures at this degree/height scale are
  // discriminating; we require the propagated width to stay below 10^-6.
  Rational rad_q = alpha.rad().to_rational();
  Rational spread = rad_q * Rational(max_height) *
                    Rational((max_degree + 1) * (max_degree + 1)) * Mpow;
  if (spread > Rational::pow10_neg(6))
    throw DomainError(
        "alpha enclosure too wide for a discriminating candidate search at "
        "this degree/height");

  // Default tolerance: what the alpha radius makes achievable, floored by
  // the certified-digit scale (avoids vacuous matches from wide balls).
  Rational tol;
  if (zero_tolerance) {
    tol = *zero_tolerance;
  } else {
    unsigned digits = certified_digit_estimate(alpha);
    Rational floor_tol = Rational::pow10_neg(digits > 5 ? digits - 5 : 1);
    tol = std::max(Rational(10) * spread, floor_tol);
  }

  int bits = 64;
  if (!alpha.rad().is_zero()) {
    double r = alpha.rad().to_double();
    if (r > 0) bits = static_cast<int>(-std::log2(r)) + 64;
  } else {
    bits = 512;
  }
  Precision prec(std::min(bits, 1 << 20));

  std::vector<AlgebraicCandidate> found;
  std::vector<long> c(static_cast<std::size_t>(max_degree) + 1, 0);
  for (int deg = 1; deg <= max_degree; ++deg) {
    auto ud = static_cast<std::size_t>(deg);
    // Odometer over coefficients c[0..deg-1] in [-H, H], leading in [1, H].
    std::fill(c.begin(), c.end(), 0);
    for (long lead = 1; lead <= max_height; ++lead) {
      for (std::size_t i = 0; i < ud; ++i) c[i] = -max_height;
      for (;;) {
        // Content and leading checks.
        Integer g = Integer(lead);
        for (std::size_t i = 0; i < ud; ++i) g = gcd(g, Integer(c[i]));
        if (g == 1) {
          Ball v = Ball::exact_int(lead);
          for (int j = deg - 1; j >= 0; --j) {
            v = ball_mul(v, alpha, prec);
            v = ball_add_rational(v, Rational(c[static_cast<std::size_t>(j)]), prec);
          }
          if (v.contains_zero() && Dyadic::cmp(v.rad(), tol) <= 0) {
            AlgebraicCandidate cand;
            std::vector<Rational> coeffs;
            coeffs.reserve(ud + 1);
            for (std::size_t i = 0; i < ud; ++i) coeffs.emplace_back(c[i]);
            coeffs.emplace_back(lead);
            cand.poly = RationalPoly(std::move(coeffs));
            cand.value = v;
            cand.degree = deg;
            long h = lead;
            for (std::size_t i = 0; i < ud; ++i) h = std::max(h, std::labs(c[i]));
            cand.height = Integer(h);
            found.push_back(std::move(cand));
          }
        }
        // Advance the odometer.
        std::size_t i = 0;
        while (i < ud) {
          if (c[i] < max_height) {
            ++c[i];
            break;
          }
          c[i] = -max_height;
          ++i;
        }
        if (i == ud) break;
      }
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const AlgebraicCandidate& a, const AlgebraicCandidate& b) {
                     if (a.degree != b.degree) return a.degree < b.degree;
                     return a.height < b.height;
                   });
  return found;
}

}  // namespace polygrowth
