#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "alladi/characters.hpp"
#include "alladi/checkpoint.hpp"
#include "alladi/empirical.hpp"
#include "alladi/parallel.hpp"
#include "alladi/verify.hpp"

namespace alladi::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string complex2(std::complex<double> z) { return fixed2(z.real()) + " + " + fixed2(z.imag()) + " i"; }

std::string complex_precise(std::complex<double> z, int digits = 8) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*f + %.*f i", digits, z.real(), digits, z.imag());
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["prime_bound"] = c.truncation.prime_bound;
  j["power_bound"] = c.truncation.power_bound;
  j["target_abs_error"] = c.truncation.target_abs_error;
  j["segment_size"] = c.segment_size;
  j["threads"] = c.threads;
  j["format"] = c.format;
  j["method"] = to_string(c.method);
  j["checkpoint"] = c.checkpoint ? Json(*c.checkpoint) : Json(nullptr);
  return j;
}

struct Emitted {
  Json inputs = Json::object();
  std::optional<std::complex<double>> value;
  std::optional<double> tail_bound;
  Json extra = Json::object();
};

void emit_json(std::ostream& out, const RunConfig& c, const Emitted& e, double runtime_ms) {
  Json j;
  j["command"] = c.target.empty() ? c.command : c.command + " " + c.target;
  j["inputs"] = e.inputs;
  j["value_re"] = e.value ? Json(e.value->real()) : Json(nullptr);
  j["value_im"] = e.value ? Json(e.value->imag()) : Json(nullptr);
  j["tail_bound"] = e.tail_bound ? Json(*e.tail_bound) : Json(nullptr);
  j["runtime_ms"] = runtime_ms;
  j["config"] = config_json(c);
  for (const auto& [k, v] : e.extra.items()) j[k] = v;
  out << j.dump(2) << '\n';
}

CountOptions counting(const RunConfig& c) {
  CountOptions o;
  o.segment_size = c.segment_size;
  o.threads = c.threads;
  if (c.checkpoint) o.checkpoint = std::filesystem::path(*c.checkpoint);
  return o;
}

std::uint64_t reduce(std::int64_t h, std::uint64_t q) {
  const auto qq = static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(((h % qq) + qq) % qq);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

// Each command fills `e` and writes text/CSV itself; returns the exit code.

int cmd_expsum(const RunConfig& c, std::ostream& out, Emitted& e) {
  require(c.x >= 1, "--x must be >= 1");
  require(c.q >= 2, "--q must be >= 2");
  const ExpSumResult r = exp_sum(c.x, reduce(c.h, c.q), c.q, counting(c));
  e.inputs = {{"x", c.x}, {"h", c.h}, {"q", c.q}};
  e.value = r.value;
  e.extra["counts"] = r.derived_from.counts;
  if (c.format == "text") out << complex2(r.value) << '\n';
  if (c.format == "csv") {
    out << "x,h,q,value_re,value_im\n"
        << c.x << ',' << c.h << ',' << c.q << ',' << full(r.value.real()) << ',' << full(r.value.imag()) << '\n';
  }
  return kOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out, Emitted& e) {
  require(c.q > 2, "--q must be > 2");
  require(c.x_real >= 16.0, "--x must be >= 16");
  PredictOptions opts;
  opts.method = c.method;
  opts.c_slit = c.c_slit;
  opts.threads = c.threads;
  const PredictionReport r = predict_main(c.x_real, c.h, c.q, c.truncation, opts);
  const std::complex<double> value = r.quadrature_term.value_or(r.main_term);

  e.inputs = {{"x", c.x_real}, {"h", c.h}, {"q", c.q}, {"method", to_string(c.method)}};
  e.value = value;
  e.tail_bound = r.constant.constant.tail_bound;
  e.extra["main_term_re"] = r.main_term.real();
  e.extra["main_term_im"] = r.main_term.imag();
  e.extra["constant_re"] = r.constant.constant.value.real();
  e.extra["constant_im"] = r.constant.constant.value.imag();
  e.extra["constant_vanishes"] = r.constant.vanishes;
  e.extra["error_class"] = r.error_class;
  if (r.quadrature) {
    e.extra["quadrature"] = {{"refinement_error", r.quadrature->refinement_error},
                             {"truncation_error", r.quadrature->truncation_error},
                             {"lower_sigma", r.quadrature->lower_sigma},
                             {"evaluations", r.quadrature->evaluations},
                             {"panels", r.quadrature->panels}};
  }

  if (c.format == "text") {
    out << "x = " << c.x_real << ", h = " << c.h << ", q = " << c.q << '\n';
    if (r.constant.vanishes) {
      out << "main term   0 (mu(q) = 0, no main term)\n";
    } else {
      out << "main term   " << complex2(r.main_term) << '\n';
      out << "constant    " << complex_precise(r.constant.constant.value) << "  (tail <= "
          << sci(r.constant.constant.tail_bound) << ")\n";
    }
    if (r.quadrature_term) out << to_string(c.method) << "  " << complex2(*r.quadrature_term) << '\n';
    if (r.quadrature) {
      out << "quadrature  error " << sci(r.quadrature->refinement_error + r.quadrature->truncation_error)
          << ", sigma from " << r.quadrature->lower_sigma << ", " << r.quadrature->panels << " panels\n";
    }
    out << "error term  " << r.error_class << '\n';
  }
  if (c.format == "csv") {
    out << "x,h,q,method,main_re,main_im,value_re,value_im,error_class\n"
        << full(c.x_real) << ',' << c.h << ',' << c.q << ',' << to_string(c.method) << ','
        << full(r.main_term.real()) << ',' << full(r.main_term.imag()) << ',' << full(value.real()) << ','
        << full(value.imag()) << ",\"" << r.error_class << "\"\n";
  }
  return kOk;
}

int cmd_constants(const RunConfig& c, std::ostream& out, Emitted& e) {
  require(c.q > 2, "--q must be > 2");
  const MainTermConstant mt = main_term_constant(c.h, c.q, c.truncation);
  const ConstantResult v = correction_factor(c.h, c.q, c.truncation);
  const ConstantResult u = log_correction(1.0, c.h, c.q, c.truncation);
  const ConstantResult t = higher_power_sum(1.0, c.h, c.q, c.truncation);

  struct Row {
    const char* name;
    const ConstantResult* r;
  };
  const Row rows[] = {{"C", &mt.constant}, {"V", &v}, {"U(1)", &u}, {"T(1)", &t}};

  e.inputs = {{"h", c.h}, {"q", c.q}};
  e.value = mt.constant.value;
  e.tail_bound = mt.constant.tail_bound;
  e.extra["constant_vanishes"] = mt.vanishes;
  Json parts = Json::object();
  for (const auto& row : rows) {
    parts[row.name] = {{"value_re", row.r->value.real()},
                       {"value_im", row.r->value.imag()},
                       {"tail_bound", row.r->tail_bound}};
  }
  e.extra["components"] = parts;

  std::optional<ClassCoefficients> coeffs;
  if (mobius(c.q) != 0) coeffs = class_coefficients(c.q, c.truncation);
  if (coeffs) {
    e.extra["class_coefficients"] = coeffs->c;
    e.extra["class_log_power"] = coeffs->log_power;
  }

  if (c.format == "text") {
    for (const auto& row : rows) {
      out << row.name << (row.r == &mt.constant && mt.vanishes ? " (mu(q) = 0)" : "") << " = "
          << complex_precise(row.r->value, 10) << "  tail_bound " << sci(row.r->tail_bound) << '\n';
    }
    if (coeffs) {
      for (std::size_t a = 0; a < coeffs->c.size(); ++a) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "c_%zu = %.8f\n", a, coeffs->c[a]);
        out << buf;
      }
    }
  }
  if (c.format == "csv") {
    out << "name,value_re,value_im,tail_bound\n";
    for (const auto& row : rows) {
      out << row.name << ',' << full(row.r->value.real()) << ',' << full(row.r->value.imag()) << ','
          << full(row.r->tail_bound) << '\n';
    }
  }
  return kOk;
}

int cmd_counts(const RunConfig& c, std::ostream& out, Emitted& e) {
  require(c.x >= 1, "--x must be >= 1");
  require(c.q >= 2, "--q must be >= 2");
  const ResidueCounts r = residue_counts(c.x, c.q, counting(c));
  e.inputs = {{"x", c.x}, {"q", c.q}};
  e.extra["counts"] = r.counts;
  if (c.format == "text") {
    for (std::uint64_t a = 0; a < c.q; ++a) out << a << ' ' << r.counts[a] << '\n';
  }
  if (c.format == "csv") {
    out << "a,count\n";
    for (std::uint64_t a = 0; a < c.q; ++a) out << a << ',' << r.counts[a] << '\n';
  }
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, Emitted& e) {
  std::vector<CheckOutcome> checks;
  if (c.target == "identity") {
    require(c.q > 2, "--q must be > 2");
    checks.push_back(check_euler_product_identity(c.s, c.h, c.q, c.truncation));
    e.inputs = {{"s", c.s}, {"h", c.h}, {"q", c.q}};
  } else if (c.target == "lemma22" || c.target == "reconstruct") {
    require(c.qmax >= 3, "--qmax must be >= 3");
    checks.push_back(check_unit_root_reconstruction(c.qmax));
    e.inputs = {{"qmax", c.qmax}};
  } else if (c.target == "gauss") {
    require(c.qmax >= 3, "--qmax must be >= 3");
    checks.push_back(check_orthogonality(c.qmax));
    checks.push_back(check_gauss_modulus(c.qmax));
    checks.push_back(check_conjugation_involution(c.qmax));
    e.inputs = {{"qmax", c.qmax}};
  } else if (c.target == "mod2") {
    require(c.s > 1.0, "--s must be > 1");
    require(c.N >= 1000, "--N must be >= 1000");
    checks.push_back(check_mod2_identity(c.s, c.N));
    e.inputs = {{"s", c.s}, {"N", c.N}};
  } else {
    VerifyOptions opts;
    opts.qmax = c.qmax;
    opts.truncation = c.truncation;
    opts.threads = c.threads;
    checks = verify_all(opts);
    e.inputs = {{"qmax", c.qmax}};
  }

  bool all = true;
  double worst = 0.0;
  Json rows = Json::array();
  for (const auto& k : checks) {
    all = all && k.passed;
    worst = std::max(worst, k.residual);
    rows.push_back({{"name", k.name},
                    {"residual", k.residual},
                    {"bound", k.bound},
                    {"passed", k.passed},
                    {"detail", k.detail}});
  }
  e.extra["passed"] = all;
  e.extra["checks"] = rows;
  e.value = std::complex<double>{worst, 0.0};

  if (c.format == "text") {
    for (const auto& k : checks) {
      out << (k.passed ? "PASS " : "FAIL ") << k.name << "  residual " << sci(k.residual) << "  bound "
          << sci(k.bound);
      if (!k.detail.empty()) out << "  (" << k.detail << ')';
      out << '\n';
    }
  }
  if (c.format == "csv") {
    out << "name,residual,bound,passed\n";
    for (const auto& k : checks) {
      out << '"' << k.name << "\"," << full(k.residual) << ',' << full(k.bound) << ','
          << (k.passed ? "true" : "false") << '\n';
    }
  }
  return all ? kOk : kFailure;
}

int cmd_report(const RunConfig& c, std::ostream& out, Emitted& e) {
  require(c.x >= 16, "--x must be >= 16");
  require(c.q >= 2, "--q must be >= 2");
  PredictOptions opts;
  opts.method = c.method;
  opts.c_slit = c.c_slit;
  opts.threads = c.threads;
  const ComparisonReport r = compare(c.x, c.h, c.q, c.truncation, counting(c), opts);

  e.inputs = {{"x", c.x}, {"h", c.h}, {"q", c.q}, {"method", to_string(c.method)}};
  e.value = r.empirical.value;
  if (r.predicted) e.tail_bound = r.predicted->constant.constant.tail_bound;
  e.extra["predicted_re"] = r.predicted_value.real();
  e.extra["predicted_im"] = r.predicted_value.imag();
  e.extra["predicted_basis"] = r.predicted_basis;
  e.extra["abs_gap"] = r.abs_gap;
  e.extra["rel_gap"] = r.rel_gap;
  Json classes = Json::array();
  for (const auto& row : r.classes) {
    Json j = {{"a", row.a}, {"count", row.count}, {"first_order", row.first_order}};
    j["second_order"] = row.second_order ? Json(*row.second_order) : Json(nullptr);
    j["coefficient"] = row.coefficient ? Json(*row.coefficient) : Json(nullptr);
    classes.push_back(j);
  }
  e.extra["classes"] = classes;

  if (c.format == "text") {
    out << "empirical  " << complex2(r.empirical.value) << '\n';
    out << "predicted  " << complex2(r.predicted_value) << "  [" << r.predicted_basis << "]\n";
    out << "gap        " << fixed2(r.abs_gap) << " (relative " << sci(r.rel_gap) << ")\n";
    out << "a  count  x/q  x/q + c_a x/(log x)^k\n";
    for (const auto& row : r.classes) {
      out << row.a << "  " << row.count << "  " << fixed2(row.first_order) << "  "
          << (row.second_order ? fixed2(*row.second_order) : std::string("-")) << '\n';
    }
  }
  if (c.format == "csv") {
    out << "a,count,first_order,second_order\n";
    for (const auto& row : r.classes) {
      out << row.a << ',' << row.count << ',' << full(row.first_order) << ','
          << (row.second_order ? full(*row.second_order) : std::string()) << '\n';
    }
  }
  return kOk;
}

}  // namespace

std::uint64_t parse_integer_flag(const std::string& text) {
  std::size_t used = 0;
  long double v = 0.0L;
  try {
    v = std::stold(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: " + text);
  }
  if (used != text.size()) throw std::invalid_argument("not a number: " + text);
  if (!std::isfinite(v) || v < 0.0L || v != std::floor(v)) {
    throw std::invalid_argument("expected a non-negative integer: " + text);
  }
  if (v > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    throw std::invalid_argument("value too large: " + text);
  }
  return static_cast<std::uint64_t>(v);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  c.threads = default_thread_count();
  c.segment_size = kDefaultSegmentSize;

  CLI::App app{"Residue-class statistics of the sum of prime factors with multiplicity"};
  app.set_help_flag("--help", "print help");  // -h would collide with --h
  app.require_subcommand(1);

  std::string x_text;
  std::string n_text;
  std::string p_text;
  std::string segment_text;
  std::string method_text = "closed";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "worker threads (default: $ALLADI_THREADS or all cores)")
        ->check(CLI::Range(1u, 4096u));
    sub->add_option("--format", c.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--P", p_text, "prime bound for truncated constants");
    sub->add_option("--K", c.truncation.power_bound, "prime-power bound for truncated constants")
        ->check(CLI::Range(2u, 4096u));
    sub->add_option("--target", c.truncation.target_abs_error, "required tail bound")
        ->check(CLI::PositiveNumber);
  };
  auto add_counting = [&](CLI::App* sub) {
    sub->add_option("--segment", segment_text, "sieve segment length");
    sub->add_option("--checkpoint", c.checkpoint, "resume file for per-segment counts");
  };
  auto add_hq = [&](CLI::App* sub) {
    sub->add_option("--h", c.h, "frequency h");
    sub->add_option("--q", c.q, "modulus q")->check(CLI::Range(std::uint64_t{1}, kMaxModulus));
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", method_text, "closed, quadrature or zeta")
        ->check(CLI::IsMember({"closed", "closed_form", "quadrature", "slit", "slit_quadrature", "zeta",
                               "zeta_integral"}));
    sub->add_option("--c-slit", c.c_slit, "depth of the slit integral")->check(CLI::PositiveNumber);
  };

  auto* expsum = app.add_subcommand("expsum", "S(x; h, q) from exact residue counts");
  expsum->add_option("--x", x_text, "upper limit (1e7 accepted)")->required();
  add_hq(expsum);
  add_counting(expsum);
  add_common(expsum);

  auto* predict = app.add_subcommand("predict", "asymptotic prediction for S(x; h, q)");
  predict->add_option("--x", x_text, "upper limit")->required();
  add_hq(predict);
  add_method(predict);
  add_common(predict);

  auto* constants = app.add_subcommand("constants", "main-term constant and its factors");
  add_hq(constants);
  add_common(constants);

  auto* counts = app.add_subcommand("counts", "residue-class counts of A(n) mod q");
  counts->add_option("--x", x_text, "upper limit")->required();
  counts->add_option("--q", c.q, "modulus q")->check(CLI::Range(std::uint64_t{1}, kMaxModulus));
  add_counting(counts);
  add_common(counts);

  auto* verify = app.add_subcommand("verify", "identity and invariant checks");
  verify->add_option("suite", c.target, "identity, reconstruct, gauss, mod2 or all")
      ->required()
      ->check(CLI::IsMember({"identity", "lemma22", "reconstruct", "gauss", "mod2", "all"}));
  add_hq(verify);
  verify->add_option("--s", c.s, "Dirichlet series exponent");
  verify->add_option("--N", n_text, "series cutoff");
  verify->add_option("--qmax", c.qmax, "largest modulus")->check(CLI::Range(std::uint64_t{3}, std::uint64_t{4096}));
  add_common(verify);

  auto* report = app.add_subcommand("report", "empirical sum against prediction, with class table");
  report->add_option("--x", x_text, "upper limit")->required();
  add_hq(report);
  add_method(report);
  add_counting(report);
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

  try {
    if (!x_text.empty()) {
      if (c.command == "predict") {
        std::size_t used = 0;
        c.x_real = std::stod(x_text, &used);
        if (used != x_text.size()) throw UsageError("--x: not a number: " + x_text);
      } else {
        c.x = parse_integer_flag(x_text);
        c.x_real = static_cast<double>(c.x);
      }
    }
    if (!n_text.empty()) c.N = parse_integer_flag(n_text);
    if (!p_text.empty()) c.truncation.prime_bound = parse_integer_flag(p_text);
    if (!segment_text.empty()) c.segment_size = parse_integer_flag(segment_text);
    require(c.segment_size >= 1, "--segment must be >= 1");
    require(c.truncation.prime_bound >= 100, "--P must be >= 100");
    c.method = *parse_method(method_text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  using Handler = std::function<int(const RunConfig&, std::ostream&, Emitted&)>;
  const Handler handler = c.command == "expsum"      ? Handler(cmd_expsum)
                          : c.command == "predict"   ? Handler(cmd_predict)
                          : c.command == "constants" ? Handler(cmd_constants)
                          : c.command == "counts"    ? Handler(cmd_counts)
                          : c.command == "verify"    ? Handler(cmd_verify)
                                                     : Handler(cmd_report);

  const auto start = std::chrono::steady_clock::now();
  try {
    Emitted e;
    const int code = handler(c, out, e);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.format == "json") emit_json(out, c, e, ms);
    return code;
  } catch (const CheckpointMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kCheckpoint;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << " (partial tail bound " << sci(e.partial().tail_bound) << ")\n";
    return kFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace alladi::cli
