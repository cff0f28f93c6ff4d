#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polygrowth/polynomial.hpp"

namespace polygrowth {

/// Limits on exact iteration. The iterates' digit counts grow like d^n,
/// so the budgets make the failure mode explicit instead of letting a
/// run exhaust memory.
struct OrbitBudget {
  std::size_t max_steps = 64;
  std::size_t digit_budget = 10'000'000;  // decimal digits per iterate
};

struct IterateResult {
  std::vector<Rational> values;  // x_0 .. x_last
  /// Set when the digit budget stopped iteration early; holds the last
  /// completed index.
  std::optional<std::size_t> budget_stop;
};

/// Computes x_0..x_steps exactly, stopping early if an iterate would
/// exceed the digit budget.
IterateResult iterate(const RationalPoly& p, const Rational& x0,
                      std::size_t steps, std::size_t digit_budget = 10'000'000);

struct SignNormalization {
  RationalPoly poly;
  Rational x0;
  bool conjugated = false;  // poly/x0 describe the negated orbit
};

/// Reduces divergence toward -infinity (odd degree only) to the
/// +infinity case by conjugating with x -> -x. Degrees and leading signs
/// for which the orbit cannot tend to +infinity at all raise
/// StructuralError.
SignNormalization normalize_sign(const RationalPoly& p, const Rational& x0);

enum class OrbitStatus { DivergesToInfinity, Cycle, Undetermined };

const char* to_string(OrbitStatus s);

struct OrbitRecord {
  RationalPoly poly;
  Rational x0;
  std::vector<Rational> values;
  bool all_integers = false;
  std::optional<std::size_t> escape_index;
  OrbitStatus status = OrbitStatus::Undetermined;
  std::size_t cycle_entry = 0;   // valid when status == Cycle
  std::size_t cycle_period = 0;  // valid when status == Cycle
  std::optional<std::size_t> budget_stop;
};

/// Exact escape test: does x lie beyond the normalization's escape
/// threshold, i.e. y = lambda*(x+s) >= y*? Decided without evaluating
/// the irrational lambda, by comparing cd*(x+s)^(d-1) with (y*)^(d-1).
bool escape_holds(const NormalizationData& n, const Rational& x);

/// Iterates until an iterate certifiably escapes (DivergesToInfinity),
/// an exact repeat occurs (Cycle), or budgets run out (Undetermined).
/// Requires derive_normalization(p) to succeed.
OrbitRecord certify_divergence(const RationalPoly& p, const Rational& x0,
                               const OrbitBudget& budget = {});

}  // namespace polygrowth
