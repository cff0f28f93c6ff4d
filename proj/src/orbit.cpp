#include "polygrowth/orbit.hpp"

#include <map>

#include "polygrowth/errors.hpp"

namespace polygrowth {

namespace {

std::size_t rational_digits(const Rational& q) {
  return dec_digit_count(q.num()) + dec_digit_count(q.den());
}

bool within_budget(const Rational& q, std::size_t digit_budget) {
  return rational_digits(q) <= digit_budget;
}

}  // namespace

const char* to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::DivergesToInfinity: return "diverges_to_infinity";
    case OrbitStatus::Cycle: return "cycle";
    default: return "undetermined";
  }
}

IterateResult iterate(const RationalPoly& p, const Rational& x0,
                      std::size_t steps, std::size_t digit_budget) {
  IterateResult r;
  r.values.reserve(steps + 1);
  r.values.push_back(x0);
  for (std::size_t k = 0; k < steps; ++k) {
    Rational next = p.eval(r.values.back());
    if (!within_budget(next, digit_budget)) {
      r.budget_stop = k;
      return r;
    }
    r.values.push_back(std::move(next));
  }
  return r;
}

bool escape_holds(const NormalizationData& n, const Rational& x) {
  Rational shifted = x + n.shift;
  if (shifted.sign() <= 0) return false;
  // y >= y*  <=>  lambda^(d-1) (x+s)^(d-1) >= (y*)^(d-1)
  //          <=>  cd * (x+s)^(d-1) >= (y*)^(d-1),
  // since lambda^(d-1) = cd exactly. Everything here is rational.
  auto e = static_cast<unsigned long>(n.d - 1);
  return n.cd * shifted.pow(e) >= n.escape.pow(e);
}

SignNormalization normalize_sign(const RationalPoly& p, const Rational& x0) {
  int d = p.degree();
  if (d < 2) throw StructuralError("degree must be at least 2");
  int lead_sign = p.leading().sign();
  bool odd = (d % 2) != 0;

  if (lead_sign < 0) {
    // Negative leading coefficient: for even d the orbit is eventually
    // bounded above, and conjugation is out of scope by contract; for odd
    // d both tails repel (x large positive maps far negative and vice
    // versa), so the orbit oscillates and cannot tend to +/- infinity
    // monotonically. Conjugation does not change the leading sign when d
    // is odd, so there is nothing to reduce to.
    throw StructuralError(odd
                              ? "negative leading coefficient with odd degree: "
                                "the orbit oscillates and cannot diverge to infinity"
                              : "negative leading coefficient with even degree: "
                                "the orbit cannot diverge to +infinity");
  }
  if (!odd) return {p, x0, false};

  // Odd degree, positive leading coefficient: the orbit may run to
  // -infinity; probe a bounded number of exact steps against both the
  // original and the conjugated escape thresholds.
  NormalizationData fwd = derive_normalization(p);
  RationalPoly conj;  // -P(-x)
  {
    std::vector<Rational> c(p.coeffs());
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j % 2 == 0) c[j] = -c[j];
    }
    conj = RationalPoly(std::move(c));
  }
  NormalizationData bwd = derive_normalization(conj);

  constexpr std::size_t kProbeSteps = 48;
  constexpr std::size_t kProbeDigits = 100'000;
  Rational v = x0;
  for (std::size_t k = 0; k <= kProbeSteps; ++k) {
    if (escape_holds(fwd, v)) return {p, x0, false};
    if (escape_holds(bwd, -v)) return {conj, -x0, true};
    Rational next = p.eval(v);
    if (!within_budget(next, kProbeDigits) || next == v) break;
    v = std::move(next);
  }
  // Inconclusive probe: hand the original through; classification will
  // report Cycle or Undetermined honestly.
  return {p, x0, false};
}

OrbitRecord certify_divergence(const RationalPoly& p, const Rational& x0,
                               const OrbitBudget& budget) {
  NormalizationData norm = derive_normalization(p);

  OrbitRecord rec;
  rec.poly = p;
  rec.x0 = x0;
  rec.values.push_back(x0);

  std::map<Rational, std::size_t> seen;
  seen.emplace(x0, 0);

  for (std::size_t k = 0;; ++k) {
    const Rational& current = rec.values.back();
    if (escape_holds(norm, current)) {
      rec.status = OrbitStatus::DivergesToInfinity;
      rec.escape_index = k;
      break;
    }
    if (k >= budget.max_steps) {
      rec.status = OrbitStatus::Undetermined;
      break;
    }
    Rational next = p.eval(current);
    if (!within_budget(next, budget.digit_budget)) {
      rec.status = OrbitStatus::Undetermined;
      rec.budget_stop = k;
      break;
    }
    auto [it, inserted] = seen.emplace(next, k + 1);
    if (!inserted) {
      rec.status = OrbitStatus::Cycle;
      rec.cycle_entry = it->second;
      rec.cycle_period = k + 1 - it->second;
      rec.values.push_back(std::move(next));
      break;
    }
    rec.values.push_back(std::move(next));
  }

  rec.all_integers = true;
  for (const auto& v : rec.values) {
    if (!v.is_integer()) {
      rec.all_integers = false;
      break;
    }
  }
  return rec;
}

}  // namespace polygrowth
