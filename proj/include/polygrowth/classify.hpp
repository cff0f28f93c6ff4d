#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polygrowth/growth.hpp"

namespace polygrowth {

enum class IntegralityBasis {
  IntegerCoefficients,       // integer coefficients and integer start value
  IntegerValuedPolynomial,   // P maps Z to Z, integer start value
  ObservedPrefixOnly,        // only the computed prefix was integral
};

enum class CertificateKind {
  IrrationalByTheorem1,
  ConsistentWithInteger,
  Inconclusive,
};

/// The full evidence trail behind a classification claim. A certificate
/// of kind IrrationalByTheorem1 asserts: the sequence is integral (by a
/// basis stronger than observation), it certifiably diverges, and the
/// certified enclosure of its growth constant contains no integer -- which
/// leaves only the irrational branch of the dichotomy.
struct Certificate {
  CertificateKind kind = CertificateKind::Inconclusive;
  RationalPoly poly;  // as given
  Rational x0;        // as given
  int start_index = 0;
  IntegralityBasis basis = IntegralityBasis::ObservedPrefixOnly;
  bool sequence_integral = false;  // under the recorded basis
  OrbitStatus orbit_status = OrbitStatus::Undetermined;
  std::optional<std::size_t> escape_index;
  std::optional<Ball> alpha;
  std::optional<Integer> integer_value;  // for ConsistentWithInteger
  bool exact_integer = false;            // pure-power special case
  bool conjugated = false;
  std::optional<GrowthConstant> growth;  // present when divergence certified
  std::vector<std::string> caveats;
};

struct ClassifyOptions {
  Rational target_radius = Rational::pow10_neg(12);
  int start_index = 0;
  OrbitBudget orbit_budget;
  int max_bits = 1 << 20;
  /// When the enclosure still contains an integer, retry this many times
  /// with the target radius shrunk by 10^8 each round before settling on
  /// ConsistentWithInteger.
  int tighten_rounds = 3;
};

/// Runs normalize -> certify divergence -> growth enclosure and assembles
/// the certificate. Never throws for mathematical outcomes; structural
/// problems (degree < 2 etc.) are reported as Inconclusive with caveats.
Certificate certify_irrational(const RationalPoly& p, const Rational& x0,
                               const ClassifyOptions& opts = {});

const char* to_string(CertificateKind k);
const char* to_string(IntegralityBasis b);

/// Stable line-oriented "key: value" rendering for audit and parsing.
std::string format_certificate(const Certificate& cert);

/// Integer polynomial m with m(alpha) ~ 0, found by brute force.
struct AlgebraicCandidate {
  RationalPoly poly;     // integer coefficients, positive leading, content 1
  Ball value;            // enclosure of m(alpha); contains zero
  Integer height;        // max |coefficient|
  int degree = 0;
};

/// Enumerates integer polynomials with degree <= max_degree, height <=
/// max_height, content 1 and positive leading coefficient, returning those
/// whose value enclosure at alpha contains zero within the tolerance,
/// sorted by (degree, height). A heuristic screen: results are candidates,
/// never proofs. Requires rad(alpha) small enough to discriminate at the
/// requested height (throws DomainError otherwise).
std::vector<AlgebraicCandidate> search_algebraic_candidates(
    const Ball& alpha, int max_degree, long max_height,
    std::optional<Rational> zero_tolerance = std::nullopt);

}  // namespace polygrowth
