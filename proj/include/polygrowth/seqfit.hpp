#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polygrowth/growth.hpp"

namespace polygrowth {

/// Integer sequence data, typically read from an OEIS b-file.
struct SequenceSample {
  struct Entry {
    long long n;
    Integer value;
  };
  std::vector<Entry> entries;     // indices strictly increasing
  bool contiguous = false;        // consecutive indices throughout
  std::vector<std::string> diagnostics;  // malformed-line reports
};

/// Parses b-file text: optional '#' comments and blank lines, then
/// "index value" pairs, LF or CRLF. Malformed lines are collected as
/// diagnostics; throws ParseError when no valid entries remain or the
/// indices are not strictly increasing.
SequenceSample load_bfile(std::istream& in);

/// Estimates for the model G_n = A*alpha^n + B + O(alpha^(-eps*n)).
/// Explicitly NON-certified: plain high-precision floating estimates.
struct FitResult {
  // Decimal renderings of the high-precision estimates.
  std::string alpha_hat;
  std::string A_hat;
  std::string B_hat;
  double eps_hat = 0.0;
  std::vector<double> residuals;  // per window entry, G_n - A*alpha^n - B
  long long window_first = 0;
  std::size_t window_length = 0;
  bool converged = false;      // ratio estimates settled
  bool non_geometric = false;  // ratio estimates did not settle
  double alpha_hat_d = 0.0;    // double views, for quick numeric use
  double A_hat_d = 0.0;
  double B_hat_d = 0.0;
};

struct FitOptions {
  /// Number of trailing entries of the contiguous run to use; 0 = all.
  std::size_t window = 0;
  int float_bits = 256;
};

/// Fits the geometric model on a contiguous window (>= 5 entries):
/// alpha from second-difference ratios averaged over the window tail
/// (the first ceil(len/3) ratios are dropped as transient), A from
/// first differences, B as the median of G_n - A*alpha^n, eps from the
/// least-squares slope of log|residual| against n*log(alpha).
/// Throws DomainError for short windows, non-contiguous samples, or
/// degenerate (constant) differences.
FitResult fit_geometric(const SequenceSample& sample, const FitOptions& opts = {});

/// Reconciles orbit-sample values against the certified growth data:
/// for each sampled index j, compares the implied (G_j - B)/alpha^(d^j)
/// against A, and G_j - A*alpha^(d^j) against B.
struct CrosscheckReport {
  double max_rel_dev_A = 0.0;
  double max_abs_dev_B = 0.0;
  std::size_t compared = 0;
  bool exact_agreement = false;  // deviations below 1e-12
};

CrosscheckReport crosscheck_with_growth(const SequenceSample& sample,
                                        const GrowthConstant& gc, int d);

}  // namespace polygrowth
