#pragma once

#include <optional>
#include <vector>

#include "polygrowth/ball.hpp"
#include "polygrowth/orbit.hpp"
#include "polygrowth/polynomial.hpp"

namespace polygrowth {

struct GrowthOptions {
  /// The enclosure of log(alpha) is refined until its radius is at most
  /// this rational (or budgets run out).
  Rational target_radius = Rational::pow10_neg(12);
  /// Sequence index assigned to x0 in the asymptotic normalization
  /// x_n ~ A*alpha^(d^n) + B. OEIS-style sequences start at 0; some
  /// presentations index their first element as 1.
  int start_index = 0;
  OrbitBudget orbit_budget;
  int max_bits = 1 << 20;
  /// Fixes the truncation depth N instead of choosing it adaptively
  /// (diagnostics and tail-soundness testing).
  std::optional<std::size_t> fixed_depth;
};

/// Certified enclosure of the growth constant together with everything
/// needed to audit it.
struct GrowthConstant {
  Ball log_alpha;  // radius includes the series tail bound
  Ball alpha;      // exp enclosure of log_alpha
  Ball A;          // enclosure of cd^(-1/(d-1))
  Ball log_A;      // enclosure of -log(cd)/(d-1)
  Rational B;      // exact: -c_{d-1}/(d*cd)
  int d = 0;
  int start_index = 0;        // n0
  std::size_t start_m = 0;    // escape index of the normalized orbit
  std::size_t depth_N = 0;    // ratio terms summed for k = start_m..depth_N-1
  Dyadic tail_bound;          // rigorous bound on the unsummed tail
  NormalizationData norm;
  bool conjugated = false;    // analysis ran on the negated orbit
  bool converged = false;     // target radius reached
  int precision_bits = 0;
  RationalPoly poly;          // normalized polynomial
  Rational x0;                // normalized start value
  std::vector<Rational> values;  // exact normalized iterates x_0..x_depth_N
};

/// The exact rational y_{k+1}/y_k^d = (x_{k+1}+s) / (cd*(x_k+s)^d); the
/// irrational lambda-powers cancel. Requires k+1 < values.size().
Rational step_ratio(const NormalizationData& norm,
                    const std::vector<Rational>& values, std::size_t k);

/// Certified enclosure of log(alpha) =
///   d^-(n0+m) * log y_m + sum_{k>=m} d^-(n0+k+1) * log(y_{k+1}/y_k^d),
/// where m is the escape index, with the sum truncated at depth N and the
/// remainder covered by a rigorous tail bound added to the radius.
/// Throws NotDivergentError unless divergence is certified.
GrowthConstant compute_log_alpha(const RationalPoly& p, const Rational& x0,
                                 const GrowthOptions& opts = {});

/// Independent enclosure of alpha along the product route
///   alpha = y_m^(d^-(n0+m)) * prod_{k>=m} ratio_k^(d^-(n0+k+1)),
/// computed with integer roots instead of logarithms; cross-checks
/// compute_log_alpha.
Ball product_formula_alpha(const RationalPoly& p, const Rational& x0,
                           const GrowthOptions& opts = {});

/// Ball enclosing the predicted sequence value A*alpha^(d^n) + B at
/// sequence index n (negated when the analysis ran on the conjugated
/// orbit). Computed as exp(d^n*log_alpha + log_A) + B. Throws
/// PrecisionError when d^n * rad(log_alpha) >= 1.
Ball predict_term(const GrowthConstant& gc, int n, Precision prec);

/// Ball enclosing x_n - (A*alpha^(d^n) + B) for the original orbit values.
Ball residual(const GrowthConstant& gc, const std::vector<Rational>& orbit_values,
              int n, Precision prec);

enum class RoundMode { Floor, Round, Auto };
enum class Verdict { Verified, Failed, AmbiguousRadius };

struct ClosedFormRow {
  int n = 0;
  Ball prediction;        // the interval whose floor/round is tested
  Verdict verdict = Verdict::AmbiguousRadius;
  Integer predicted_int;  // meaningful when the floor/round is unique
};

struct ClosedFormReport {
  RoundMode requested = RoundMode::Floor;
  RoundMode chosen = RoundMode::Floor;  // differs only for Auto
  int from_n = 0, to_n = 0;
  std::vector<ClosedFormRow> rows;
  bool all_verified() const;
  bool any_failed() const;
  bool any_ambiguous() const;
};

/// Checks floor(A*alpha^(d^n)+B) = x_n (mode Floor) or the same with an
/// extra +1/2 (mode Round, i.e. rounding to the nearest integer) for each
/// n in [from_n, to_n]. Mode Auto picks Floor when the residual is
/// certifiably <= 0 at the first index and Round otherwise, recording
/// the choice. `orbit_values` are the original-orbit iterates and must
/// cover the range.
ClosedFormReport verify_closed_form(const GrowthConstant& gc,
                                    const std::vector<Rational>& orbit_values,
                                    RoundMode mode, int from_n, int to_n);

/// Target radius for log(alpha) that makes verify_closed_form decisive
/// up to sequence index to_n: the prediction residual shrinks like
/// alpha^(-d^n), so the enclosure must undercut that. Derived from a
/// coarse first pass. Throws PrecisionError when the requirement exceeds
/// max_bits.
Rational recommended_verify_target(const GrowthConstant& coarse, int to_n,
                                   int max_bits = 1 << 20);

}  // namespace polygrowth
