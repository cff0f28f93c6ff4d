// polygrowth: growth constants of polynomial recursions x_{n+1} = P(x_n),
// with certified enclosures, closed-form verification, irrationality
// certificates and b-file fitting.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polygrowth/classify.hpp"
#include "polygrowth/errors.hpp"
#include "polygrowth/growth.hpp"
#include "polygrowth/orbit.hpp"
#include "polygrowth/seqfit.hpp"

using nlohmann::ordered_json;
using namespace polygrowth;

namespace {

struct Output {
  bool json = false;
  bool no_timing = false;
  ordered_json doc;
  std::ostringstream text;

  void kv(const std::string& key, const std::string& value) {
    doc[key] = value;
    text << key << ": " << value << "\n";
  }
  void kv(const std::string& key, long long value) {
    doc[key] = value;
    text << key << ": " << value << "\n";
  }
  void kv(const std::string& key, bool value) {
    doc[key] = value;
    text << key << ": " << (value ? "yes" : "no") << "\n";
  }
  void line(const std::string& s) { text << s << "\n"; }

  void emit(double elapsed_ms) {
    if (!no_timing) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.1f", elapsed_ms);
      doc["time_ms"] = std::string(buf);
      text << "time_ms: " << buf << "\n";
    }
    if (json) {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << text.str();
    }
  }
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string interval_string(const Ball& b) {
  return "[" + fmt_double(b.lower().to_double()) + ", " +
         fmt_double(b.upper().to_double()) + "]";
}

RationalPoly parse_poly_or_report(const std::string& text) {
  try {
    return parse_poly(text);
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.position() << ": " << e.what()
              << "\n  " << text << "\n  " << std::string(e.position(), ' ')
              << "^\n";
    throw;
  }
}

Rational parse_x0_or_report(const std::string& text) {
  auto q = Rational::parse(text);
  if (!q) {
    std::cerr << "invalid x0 (expected p, p/q or a plain decimal): " << text << "\n";
    throw ParseError("invalid rational", 0);
  }
  return *q;
}

const char* verdict_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::Failed: return "Failed";
    default: return "AmbiguousRadius";
  }
}

const char* mode_string(RoundMode m) {
  switch (m) {
    case RoundMode::Floor: return "floor";
    case RoundMode::Round: return "round";
    default: return "auto";
  }
}

// ---------------------------------------------------------------------------

struct CommonArgs {
  std::string poly;
  std::string x0 = "0";
  int n0 = 0;
  unsigned digits = 10;
  std::string target_radius;  // overrides the digits-derived default
  std::size_t max_steps = 64;
  std::size_t digit_budget = 10'000'000;
  int max_bits = 1 << 20;
};

GrowthOptions growth_options(const CommonArgs& a) {
  GrowthOptions o;
  o.target_radius = a.target_radius.empty()
                        ? Rational::pow10_neg(a.digits + 2)
                        : [&] {
                            auto q = Rational::parse(a.target_radius);
                            if (!q || q->sign() <= 0)
                              throw ParseError("invalid target radius", 0);
                            return *q;
                          }();
  o.start_index = a.n0;
  o.orbit_budget.max_steps = a.max_steps;
  o.orbit_budget.digit_budget = a.digit_budget;
  o.max_bits = a.max_bits;
  return o;
}

int run_iterate(const CommonArgs& a, std::size_t steps, std::size_t digits_only_above,
                Output& out) {
  RationalPoly p = parse_poly_or_report(a.poly);
  Rational x0 = parse_x0_or_report(a.x0);
  IterateResult r = iterate(p, x0, steps, a.digit_budget);
  ordered_json values = ordered_json::array();
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    const Rational& v = r.values[k];
    std::string s = v.to_string();
    if (digits_only_above > 0 && s.size() > digits_only_above) {
      out.line(std::to_string(k) + " <" + std::to_string(s.size()) + " digits>");
      values.push_back({{"n", k}, {"digits", s.size()}});
    } else {
      out.line(std::to_string(k) + " " + s);
      values.push_back({{"n", k}, {"value", s}});
    }
  }
  out.doc["values"] = values;
  if (r.budget_stop) {
    out.kv("budget_exceeded_after", static_cast<long long>(*r.budget_stop));
    return 3;
  }
  return 0;
}

int run_alpha(const CommonArgs& a, Output& out) {
  RationalPoly p = parse_poly_or_report(a.poly);
  Rational x0 = parse_x0_or_report(a.x0);
  GrowthOptions opts = growth_options(a);
  GrowthConstant gc = compute_log_alpha(p, x0, opts);

  auto dec = ball_to_decimal(gc.alpha, a.digits);
  if (dec.kind == DecimalKind::InsufficientRadius) {
    out.kv("alpha_digits", std::string("uncertified"));
    out.kv("note", std::string("the enclosure straddles a digit boundary; "
                               "no truncated digit string is certifiable"));
  } else {
    out.kv("alpha_digits", dec.digits);
    out.kv("digits_exact", dec.kind == DecimalKind::Exact);
  }
  out.kv("digits_requested", static_cast<long long>(a.digits));
  out.kv("alpha_low", gc.alpha.lower().to_string());
  out.kv("alpha_high", gc.alpha.upper().to_string());
  out.kv("radius_approx", fmt_double(gc.alpha.rad().to_double()));
  out.kv("A_low", gc.A.lower().to_string());
  out.kv("A_high", gc.A.upper().to_string());
  out.kv("B", gc.B.to_string());
  out.kv("escape_index", static_cast<long long>(gc.start_m));
  out.kv("depth", static_cast<long long>(gc.depth_N));
  out.kv("tail_bound", gc.tail_bound.to_string());
  out.kv("precision_bits", static_cast<long long>(gc.precision_bits));
  out.kv("start_index", static_cast<long long>(gc.start_index));
  out.kv("conjugated", gc.conjugated);
  out.kv("converged", gc.converged);
  return gc.converged ? 0 : 3;
}

int run_verify(const CommonArgs& a, const std::string& mode_name, int from_n,
               int to_n, Output& out) {
  RationalPoly p = parse_poly_or_report(a.poly);
  Rational x0 = parse_x0_or_report(a.x0);
  RoundMode mode = RoundMode::Auto;
  if (mode_name == "floor") mode = RoundMode::Floor;
  else if (mode_name == "round") mode = RoundMode::Round;
  else if (mode_name != "auto") throw ParseError("mode must be floor, round or auto", 0);
  if (from_n > to_n) throw DomainError("--from must not exceed --to");
  if (from_n < a.n0) throw DomainError("--from below the start index");

  // First a coarse enclosure, then retarget so the prediction interval at
  // to_n undercuts the closed-form residual.
  GrowthOptions opts = growth_options(a);
  GrowthConstant coarse = compute_log_alpha(p, x0, opts);
  opts.target_radius = recommended_verify_target(coarse, to_n, a.max_bits);
  GrowthConstant gc = compute_log_alpha(p, x0, opts);

  auto span = static_cast<std::size_t>(to_n - a.n0);
  IterateResult orbit = iterate(p, x0, span, a.digit_budget);
  if (orbit.budget_stop)
    throw PrecisionError("digit budget exhausted before the requested range");

  ClosedFormReport rep = verify_closed_form(gc, orbit.values, mode, from_n, to_n);
  out.kv("mode_requested", std::string(mode_string(rep.requested)));
  out.kv("mode", std::string(mode_string(rep.chosen)));
  ordered_json rows = ordered_json::array();
  for (const auto& row : rep.rows) {
    std::string iv = interval_string(row.prediction);
    std::string verdict = verdict_string(row.verdict);
    std::string extra;
    if (row.verdict != Verdict::AmbiguousRadius)
      extra = (rep.chosen == RoundMode::Floor ? " floor " : " round ") +
              row.predicted_int.get_str();
    out.line(std::to_string(row.n) + "  " + iv + "  " + verdict + extra);
    ordered_json jr;
    jr["n"] = row.n;
    jr["interval"] = iv;
    jr["verdict"] = verdict;
    if (row.verdict != Verdict::AmbiguousRadius)
      jr["predicted_int"] = row.predicted_int.get_str();
    rows.push_back(jr);
  }
  out.doc["rows"] = rows;
  out.kv("all_verified", rep.all_verified());
  if (rep.any_failed()) return 1;
  if (rep.any_ambiguous()) return 5;
  return 0;
}

int run_classify(const CommonArgs& a, int alg_degree, long alg_height, Output& out) {
  RationalPoly p = parse_poly_or_report(a.poly);
  Rational x0 = parse_x0_or_report(a.x0);
  ClassifyOptions opts;
  opts.target_radius = growth_options(a).target_radius;
  opts.start_index = a.n0;
  opts.orbit_budget.max_steps = a.max_steps;
  opts.orbit_budget.digit_budget = a.digit_budget;
  opts.max_bits = a.max_bits;

  Certificate cert = certify_irrational(p, x0, opts);
  std::string block = format_certificate(cert);
  out.text << block;
  {
    std::istringstream is(block);
    std::string line;
    ordered_json caveats = ordered_json::array();
    while (std::getline(is, line)) {
      auto pos = line.find(": ");
      if (pos == std::string::npos) continue;
      std::string key = line.substr(0, pos), value = line.substr(pos + 2);
      if (key == "caveat") {
        caveats.push_back(value);
      } else {
        out.doc[key] = value;
      }
    }
    out.doc["caveats"] = caveats;
  }

  if (alg_degree > 0 && cert.alpha) {
    auto cands = search_algebraic_candidates(*cert.alpha, alg_degree, alg_height);
    ordered_json arr = ordered_json::array();
    for (const auto& c : cands) {
      out.line("candidate: " + c.poly.to_string() + " (degree " +
               std::to_string(c.degree) + ", height " + c.height.get_str() + ")");
      arr.push_back({{"poly", c.poly.to_string()},
                     {"degree", c.degree},
                     {"height", c.height.get_str()}});
    }
    out.doc["candidates"] = arr;
    if (cands.empty()) out.line("candidates: none");
  }

  bool divergent = cert.orbit_status == OrbitStatus::DivergesToInfinity;
  return divergent ? 0 : 4;
}

int run_fit(const std::string& bfile, std::size_t window, int float_bits, Output& out) {
  std::ifstream in(bfile);
  if (!in) {
    std::cerr << "cannot open b-file: " << bfile << "\n";
    return 2;
  }
  SequenceSample sample = load_bfile(in);
  for (const auto& d : sample.diagnostics) out.kv("diagnostic", d);
  out.kv("entries", static_cast<long long>(sample.entries.size()));
  out.kv("contiguous", sample.contiguous);

  FitOptions fo;
  fo.window = window;
  fo.float_bits = float_bits;
  FitResult fr;
  try {
    fr = fit_geometric(sample, fo);
  } catch (const DomainError& e) {
    out.kv("error", std::string(e.what()));
    return 6;
  }
  out.kv("window_first", fr.window_first);
  out.kv("window_length", static_cast<long long>(fr.window_length));
  out.kv("alpha_hat", fr.alpha_hat);
  out.kv("A_hat", fr.A_hat);
  out.kv("B_hat", fr.B_hat);
  out.kv("eps_hat", fmt_double(fr.eps_hat));
  out.kv("converged", fr.converged);
  out.kv("non_geometric", fr.non_geometric);
  {
    std::ostringstream rs;
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < fr.residuals.size(); ++i) {
      if (i) rs << " ";
      rs << fmt_double(fr.residuals[i]);
      arr.push_back(fmt_double(fr.residuals[i]));
    }
    out.doc["residuals"] = arr;
    out.text << "residuals: " << rs.str() << "\n";
  }
  return fr.non_geometric ? 6 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified growth constants of polynomial recursions x_{n+1} = P(x_n)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from a key = value file");

  std::string output_mode = "text";
  bool no_timing = false;
  app.add_option("--output", output_mode, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--no-timing", no_timing, "omit the wall-time line");

  CommonArgs args;
  std::size_t steps = 5, digits_only_above = 0, window = 0;
  int from_n = 0, to_n = 8, alg_degree = 0, float_bits = 256;
  long alg_height = 2;
  std::string mode_name = "auto", bfile;

  auto add_common = [&](CLI::App* cmd, bool needs_poly = true) {
    auto* po = cmd->add_option("--poly", args.poly, "polynomial in x, e.g. \"x^2+1\"");
    if (needs_poly) po->required();
    cmd->add_option("--x0", args.x0, "start value (integer, p/q or decimal)");
    cmd->add_option("--n0", args.n0, "sequence index of x0 (default 0)");
    cmd->add_option("--max-steps", args.max_steps, "orbit classification step budget");
    cmd->add_option("--digit-budget", args.digit_budget, "decimal digits per iterate");
    cmd->add_option("--max-bits", args.max_bits, "working precision cap in bits");
  };

  CLI::App* c_iter = app.add_subcommand("iterate", "print exact iterates x_0..x_N");
  add_common(c_iter);
  c_iter->add_option("--steps", steps, "number of steps");
  c_iter->add_option("--digits-only-above", digits_only_above,
                     "print only the digit count for values longer than this");

  CLI::App* c_alpha = app.add_subcommand("alpha", "certified decimal digits of alpha");
  add_common(c_alpha);
  c_alpha->add_option("--digits", args.digits, "significant digits (truncated)");
  c_alpha->add_option("--target-radius", args.target_radius,
                      "enclosure radius target (default 10^-(digits+2))");

  CLI::App* c_verify =
      app.add_subcommand("verify", "check floor/round closed forms against iterates");
  add_common(c_verify);
  c_verify->add_option("--mode", mode_name, "floor, round or auto");
  c_verify->add_option("--from", from_n, "first sequence index");
  c_verify->add_option("--to", to_n, "last sequence index");

  CLI::App* c_classify =
      app.add_subcommand("classify", "irrationality certificate for the growth constant");
  add_common(c_classify);
  c_classify->add_option("--digits", args.digits, "precision goal in digits");
  c_classify->add_option("--target-radius", args.target_radius, "enclosure radius target");
  c_classify->add_option("--alg-degree", alg_degree,
                         "also search algebraic candidates up to this degree");
  c_classify->add_option("--alg-height", alg_height, "candidate coefficient bound");

  CLI::App* c_fit = app.add_subcommand("fit", "fit G_n ~ A*alpha^n + B to b-file data");
  c_fit->add_option("--bfile", bfile, "OEIS-style b-file")->required();
  c_fit->add_option("--window", window, "use only the last N entries (0 = all)");
  c_fit->add_option("--float-bits", float_bits, "estimator precision in bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Output out;
  out.json = output_mode == "json";
  out.no_timing = no_timing;

  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (c_iter->parsed()) {
      out.doc["command"] = "iterate";
      code = run_iterate(args, steps, digits_only_above, out);
    } else if (c_alpha->parsed()) {
      out.doc["command"] = "alpha";
      code = run_alpha(args, out);
    } else if (c_verify->parsed()) {
      out.doc["command"] = "verify";
      code = run_verify(args, mode_name, from_n, to_n, out);
    } else if (c_classify->parsed()) {
      out.doc["command"] = "classify";
      code = run_classify(args, alg_degree, alg_height, out);
    } else if (c_fit->parsed()) {
      out.doc["command"] = "fit";
      code = run_fit(bfile, window, float_bits, out);
      if (code == 2) return 2;
    }
  } catch (const ParseError&) {
    return 2;
  } catch (const NotDivergentError& e) {
    std::cerr << "divergence not certified: " << e.what() << "\n";
    return 4;
  } catch (const StructuralError& e) {
    std::cerr << "structural: " << e.what() << "\n";
    return 4;
  } catch (const PrecisionError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  auto t1 = std::chrono::steady_clock::now();
  out.emit(std::chrono::duration<double, std::milli>(t1 - t0).count());
  return code;
}
