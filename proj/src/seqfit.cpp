#include "polygrowth/seqfit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <sstream>

#include "polygrowth/errors.hpp"

namespace polygrowth {

namespace {

bool parse_integer_token(const std::string& tok, Integer* out) {
  if (tok.empty()) return false;
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  }
  out->set_str(tok, 10);
  return true;
}

std::string mpf_to_string(const mpf_class& v, int digits = 25) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

mpf_class mpf_abs(const mpf_class& v) { return v < 0 ? mpf_class(-v) : v; }

// log of a nonzero mpf via its 2-exponent decomposition; double accuracy
// is plenty for the diagnostic slope fit.
double mpf_log_abs(const mpf_class& v) {
  long e = 0;
  double m = mpf_get_d_2exp(&e, v.get_mpf_t());
  return std::log(std::abs(m)) + static_cast<double>(e) * 0.6931471805599453;
}

mpf_class median_of(std::vector<mpf_class> xs) {
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

}  // namespace

SequenceSample load_bfile(std::istream& in) {
  SequenceSample s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok_n, tok_v, extra;
    ls >> tok_n >> tok_v;
    Integer n_big, value;
    if (tok_v.empty() || !parse_integer_token(tok_n, &n_big) ||
        !parse_integer_token(tok_v, &value) || (ls >> extra)) {
      s.diagnostics.push_back("line " + std::to_string(lineno) + ": malformed entry");
      continue;
    }
    if (!n_big.fits_slong_p()) {
      s.diagnostics.push_back("line " + std::to_string(lineno) + ": index out of range");
      continue;
    }
    s.entries.push_back({static_cast<long long>(n_big.get_si()), std::move(value)});
  }
  if (s.entries.empty()) throw ParseError("no valid entries", lineno);
  for (std::size_t i = 1; i < s.entries.size(); ++i) {
    if (s.entries[i].n <= s.entries[i - 1].n)
      throw ParseError("indices are not strictly increasing", i);
  }
  s.contiguous = true;
  for (std::size_t i = 1; i < s.entries.size(); ++i) {
    if (s.entries[i].n != s.entries[i - 1].n + 1) {
      s.contiguous = false;
      break;
    }
  }
  return s;
}

FitResult fit_geometric(const SequenceSample& sample, const FitOptions& opts) {
  if (!sample.contiguous)
    throw DomainError("sample has index gaps; fitting refuses to interpolate");
  std::size_t len = sample.entries.size();
  std::size_t W = (opts.window == 0 || opts.window > len) ? len : opts.window;
  if (W < 5) throw DomainError("window too short (need at least 5 entries)");
  std::size_t start = len - W;
  if (sample.entries[start].n < 0)
    throw DomainError("window indices must be nonnegative");

  const int bits = opts.float_bits;
  auto G = [&](std::size_t i) { return sample.entries[start + i]; };

  // First differences, exact.
  std::vector<Integer> diff(W - 1);
  for (std::size_t i = 0; i + 1 < W; ++i) diff[i] = G(i + 1).value - G(i).value;

  // Second-difference ratios; the first ceil(W/3) are transient (B and the
  // error term bias them) and are dropped.
  std::size_t n_ratios = W - 2;
  std::size_t drop = (W + 2) / 3;
  if (drop >= n_ratios) drop = n_ratios - 1;
  std::vector<mpf_class> kept;
  for (std::size_t i = drop; i < n_ratios; ++i) {
    if (sgn(diff[i]) == 0)
      throw DomainError("degenerate differences (constant stretch) in the window");
    mpf_class num(diff[i + 1], bits), den(diff[i], bits);
    kept.push_back(num / den);
  }

  FitResult fr;
  fr.window_first = sample.entries[start].n;
  fr.window_length = W;

  mpf_class alpha = median_of(kept);
  mpf_class spread = 0;
  for (const auto& r : kept) spread = std::max(spread, mpf_abs(r - alpha));
  bool settled = spread <= mpf_abs(alpha) * mpf_class(0.02, bits);
  fr.converged = settled && alpha > 1;
  fr.non_geometric = !fr.converged;

  // A from first differences: D_n = A alpha^n (alpha - 1) + o(1).
  std::vector<mpf_class> a_ests;
  mpf_class am1 = alpha - 1;
  if (sgn(am1) != 0) {
    for (std::size_t i = drop; i < W - 1; ++i) {
      long long n = G(i).n;
      mpf_class p(1, bits);
      mpf_pow_ui(p.get_mpf_t(), alpha.get_mpf_t(), static_cast<unsigned long>(n));
      if (sgn(p) == 0) continue;
      mpf_class d(diff[i], bits);
      a_ests.push_back(d / (p * am1));
    }
  }
  mpf_class A = a_ests.empty() ? mpf_class(0, bits) : median_of(a_ests);

  // B as the median of G_n - A alpha^n over the whole window.
  std::vector<mpf_class> b_ests;
  std::vector<mpf_class> model(W);
  for (std::size_t i = 0; i < W; ++i) {
    long long n = G(i).n;
    mpf_class p(1, bits);
    mpf_pow_ui(p.get_mpf_t(), alpha.get_mpf_t(), static_cast<unsigned long>(n));
    model[i] = A * p;
    b_ests.push_back(mpf_class(G(i).value, bits) - model[i]);
  }
  mpf_class B = median_of(b_ests);

  // Residuals and the error-exponent estimate: slope of log|residual|
  // against n log(alpha), sign-flipped.
  double log_alpha = mpf_log_abs(alpha);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int pts = 0;
  fr.residuals.reserve(W);
  for (std::size_t i = 0; i < W; ++i) {
    mpf_class resid = mpf_class(G(i).value, bits) - model[i] - B;
    fr.residuals.push_back(resid.get_d());
    if (sgn(resid) != 0 && alpha > 1) {
      double x = static_cast<double>(G(i).n) * log_alpha;
      double y = mpf_log_abs(resid);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++pts;
    }
  }
  if (pts >= 3 && sxx * pts - sx * sx > 1e-12) {
    double slope = (sxy * pts - sx * sy) / (sxx * pts - sx * sx);
    fr.eps_hat = -slope;
  }

  fr.alpha_hat = mpf_to_string(alpha);
  fr.A_hat = mpf_to_string(A);
  fr.B_hat = mpf_to_string(B);
  fr.alpha_hat_d = alpha.get_d();
  fr.A_hat_d = A.get_d();
  fr.B_hat_d = B.get_d();
  return fr;
}

CrosscheckReport crosscheck_with_growth(const SequenceSample& sample,
                                        const GrowthConstant& gc, int d) {
  if (d != gc.d) throw DomainError("degree does not match the growth data");
  Precision prec(std::max(64, gc.precision_bits));
  Rational B_orig = gc.conjugated ? -gc.B : gc.B;

  // Compare on the deepest sampled indices where the prediction enclosure
  // is absolutely tight; shallow indices sit outside the asymptotic
  // regime and deep ones may exceed the enclosure's reach. Deviations are
  // formed in ball arithmetic: at these magnitudes a double subtraction
  // would drown the signal in conversion noise.
  struct Usable {
    double dev_a;
    double dev_b;
  };
  std::vector<Usable> usable;
  for (const auto& e : sample.entries) {
    if (e.n < gc.start_index) continue;
    try {
      Ball pred = predict_term(gc, static_cast<int>(e.n), prec);
      if (pred.rad().to_double() > 1e-8) continue;
      Rational g{Integer(e.value)};
      Ball dev_b_ball = ball_sub(ball_from_rational(g, prec), pred, prec);
      Ball den = ball_add_rational(pred, -B_orig, prec);
      if (den.contains_zero()) continue;
      Ball ratio = ball_div(ball_from_rational(g - B_orig, prec), den, prec);
      double dev_a =
          std::abs(ball_add_rational(ratio, Rational(-1), prec).mid().to_double());
      double dev_b = std::abs(dev_b_ball.mid().to_double());
      usable.push_back({dev_a, dev_b});
    } catch (const PrecisionError&) {
      break;
    }
  }
  if (usable.size() < 3)
    throw DomainError("insufficient overlapping indices for a crosscheck");

  CrosscheckReport rep;
  std::size_t take = std::min<std::size_t>(4, usable.size());
  for (std::size_t i = usable.size() - take; i < usable.size(); ++i) {
    rep.max_rel_dev_A = std::max(rep.max_rel_dev_A, usable[i].dev_a);
    rep.max_abs_dev_B = std::max(rep.max_abs_dev_B, usable[i].dev_b);
    ++rep.compared;
  }
  rep.exact_agreement = rep.max_rel_dev_A <= 1e-12 && rep.max_abs_dev_B <= 1e-12;
  return rep;
}

}  // namespace polygrowth
