#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "varmult/varmult.hpp"

namespace varmult::cli {

namespace {

using nlohmann::json;

// Largest order whose f_0..f_{n-1} flags are registered.
constexpr int kMaxLowerFlags = kMaxJetIndex / 2;

struct Options {
  int order = 0;
  std::optional<int> lagrangian_order;
  std::string expr;
  std::string R;
  std::string N;
  std::string rho;
  std::string lagrangian;
  std::vector<std::optional<std::string>> f_lower = std::vector<std::optional<std::string>>(kMaxLowerFlags);
  bool json_output = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  int trials = 1;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("VARMULT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      std::uint64_t s = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return s;
    } catch (const std::exception&) {
    }
    throw UsageError("VARMULT_SEED is not an unsigned integer");
  }
  return ZeroTestConfig{}.seed;
}

ZeroTestConfig zero_config(const Options& o) {
  ZeroTestConfig cfg;
  cfg.seed = o.seed ? *o.seed : default_seed();
  if (o.samples) cfg.samples = *o.samples;
  if (o.tol) {
    cfg.atol = *o.tol;
    cfg.rtol = *o.tol;
  }
  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// Parses one flag value, reporting the flag name alongside the byte offset.
Expr parse_flag(const std::string& flag, const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(flag + ": " + e.detail(), e.offset());
  }
}

std::string text(const Expr& e) { return render(e); }

json point_json(const Point& p) {
  json out = json::object();
  for (const auto& [v, value] : p) out[v.name()] = value;
  return out;
}

json verdict_json(const ZeroVerdict& v) {
  json out{{"verdict", verdict_name(v)}};
  if (const auto* z = std::get_if<ZeroNumeric>(&v)) out["points_tested"] = z->points_tested;
  if (const auto* nz = std::get_if<NonZero>(&v)) {
    out["witness"] = point_json(nz->witness);
    out["value"] = nz->value;
  }
  if (const auto* inc = std::get_if<Inconclusive>(&v)) out["reason"] = inc->reason;
  return out;
}

std::string verdict_text(const ZeroVerdict& v) {
  std::ostringstream s;
  s << verdict_name(v);
  if (const auto* z = std::get_if<ZeroNumeric>(&v)) s << " (" << z->points_tested << " points)";
  if (const auto* nz = std::get_if<NonZero>(&v)) {
    s << " (value " << nz->value;
    if (!nz->witness.empty()) s << " at";
    for (const auto& [var, value] : nz->witness) s << " " << var.name() << "=" << value;
    s << ")";
  }
  if (const auto* inc = std::get_if<Inconclusive>(&v)) s << " (" << inc->reason << ")";
  return s.str();
}

json envelope(const std::string& subcommand, json input, json result, json trace = json::array()) {
  return json{{"tool", kToolName},     {"version", kVersion}, {"subcommand", subcommand},
              {"input", std::move(input)}, {"result", std::move(result)}, {"trace", std::move(trace)}};
}

json config_json(const ZeroTestConfig& cfg) {
  return json{{"seed", cfg.seed}, {"samples", cfg.samples}, {"atol", cfg.atol}, {"rtol", cfg.rtol}};
}

// --- check ---

json trace_json(const CheckReport& r) {
  json trace = json::array();
  for (const auto& e : r.trace) {
    json entry{{"step", e.step.to_string()},
               {"label", e.label},
               {"checked", text(e.checked)},
               {"verdict", verdict_json(e.verdict)},
               {"defensive", e.defensive}};
    if (e.derived) entry["derived"] = json{{"name", e.derived->first}, {"value", text(e.derived->second)}};
    trace.push_back(std::move(entry));
  }
  return trace;
}

int report_exit(const CheckReport& r) {
  if (r.accepted()) return kOk;
  if (r.rejected()) return kRejected;
  return kInconclusive;
}

Result run_check(const Options& o) {
  if (o.order < 2) throw UsageError("--order must be at least 2");
  const ZeroTestConfig cfg = zero_config(o);
  const Expr f = parse_flag("--expr", o.expr);
  const CheckReport report = check(f, o.order, cfg);

  json result;
  std::ostringstream plain;
  std::visit(
      [&](const auto& outcome) {
        using T = std::decay_t<decltype(outcome)>;
        if constexpr (std::is_same_v<T, CheckAccepted>) {
          json lower = json::array();
          for (const auto& fl : outcome.f_lower) lower.push_back(text(fl));
          result = json{{"outcome", "Accepted"}, {"R", text(outcome.R)}, {"rho", text(outcome.rho)},
                        {"f_lower", lower},      {"L", text(outcome.L)}, {"residual", verdict_json(outcome.residual)}};
          plain << "outcome: Accepted\n"
                << "R: " << text(outcome.R) << "\n"
                << "rho: " << text(outcome.rho) << "\n";
          for (std::size_t l = 0; l < outcome.f_lower.size(); ++l) plain << "f_" << l << ": " << text(outcome.f_lower[l]) << "\n";
          plain << "L: " << text(outcome.L) << "\n"
                << "residual: " << verdict_text(outcome.residual) << "\n";
        } else if constexpr (std::is_same_v<T, CheckRejected>) {
          result = json{{"outcome", "Rejected"},
                        {"step", outcome.step.to_string()},
                        {"witness", text(outcome.witness)},
                        {"verdict", verdict_json(outcome.verdict)}};
          plain << "outcome: Rejected\n"
                << "step: " << outcome.step.to_string() << "\n"
                << "witness: " << text(outcome.witness) << "\n"
                << "verdict: " << verdict_text(outcome.verdict) << "\n";
        } else {
          result = json{{"outcome", "Inconclusive"},
                        {"step", outcome.step.to_string()},
                        {"witness", text(outcome.witness)},
                        {"reason", outcome.reason}};
          plain << "outcome: Inconclusive\n"
                << "step: " << outcome.step.to_string() << "\n"
                << "reason: " << outcome.reason << "\n";
        }
      },
      report.outcome);
  json notes = json::array();
  for (const auto& n : report.notes) notes.push_back(json{{"step", n.step.to_string()}, {"text", n.text}});
  result["notes"] = notes;
  result["checks"] = report.check_count();

  Result out;
  out.exit_code = report_exit(report);
  if (o.json_output) {
    json input{{"order", o.order}, {"expr", text(f)}, {"config", config_json(cfg)}};
    out.out = envelope("check", std::move(input), std::move(result), trace_json(report)).dump(2) + "\n";
  } else {
    plain << "trace:\n";
    for (const auto& e : report.trace) {
      plain << "  " << e.step.to_string() << " " << e.label << ": " << verdict_name(e.verdict)
            << (e.defensive ? " [defensive]" : "") << "\n";
    }
    for (const auto& n : report.notes) plain << "note " << n.step.to_string() << ": " << n.text << "\n";
    out.out = plain.str();
  }
  return out;
}

// --- construct ---

ParamSet params_from(const Options& o, json& input) {
  if (o.order < 2) throw UsageError("--order must be at least 2");
  if (o.order > kMaxLowerFlags) throw UsageError("--order is too large");
  if (o.R.empty()) throw UsageError("--R is required");
  for (int l = o.order; l < kMaxLowerFlags; ++l) {
    if (o.f_lower[static_cast<std::size_t>(l)]) {
      throw UsageError("--f" + std::to_string(l) + " is not a lower function for order " + std::to_string(o.order));
    }
  }
  std::vector<Expr> f;
  json lower = json::array();
  for (int l = 0; l < o.order; ++l) {
    const auto& flag = o.f_lower[static_cast<std::size_t>(l)];
    f.push_back(flag ? parse_flag("--f" + std::to_string(l), *flag) : Expr());
    lower.push_back(text(f.back()));
  }
  Expr R = parse_flag("--R", o.R);
  Expr N = o.N.empty() ? Expr() : parse_flag("--N", o.N);
  const int m = o.lagrangian_order.value_or(o.order);
  input = json{{"order", o.order}, {"lagrangian_order", m}, {"R", text(R)}, {"f_lower", lower}, {"N", text(N)}};
  return ParamSet(o.order, R, std::move(f), N, m);
}

Result run_construct(const Options& o) {
  json input;
  const ParamSet params = params_from(o, input);
  const VariationalTriple t = construct(params);
  Result out;
  if (o.json_output) {
    json result{{"f", text(t.f)}, {"rho", text(t.rho)}, {"L", text(t.L)}, {"n", t.n}, {"m", t.m}};
    out.out = envelope("construct", std::move(input), std::move(result)).dump(2) + "\n";
  } else {
    out.out = "f: " + text(t.f) + "\nrho: " + text(t.rho) + "\nL: " + text(t.L) + "\n";
  }
  return out;
}

// --- fels ---

Result run_fels(const Options& o) {
  const ZeroTestConfig cfg = zero_config(o);
  const Expr f3 = parse_flag("--expr", o.expr);
  const Expr t5 = fels_T5(f3);
  const Expr i1 = fels_I1(f3);
  const ZeroVerdict v5 = is_zero(t5, cfg);
  const ZeroVerdict v1 = is_zero(i1, cfg);
  Result out;
  out.exit_code = is_zero_verdict(v5) && is_zero_verdict(v1) ? kOk : kRejected;
  if (o.json_output) {
    json result{{"T5", text(t5)}, {"T5_verdict", verdict_json(v5)}, {"I1", text(i1)}, {"I1_verdict", verdict_json(v1)}};
    json input{{"expr", text(f3)}, {"config", config_json(cfg)}};
    out.out = envelope("fels", std::move(input), std::move(result)).dump(2) + "\n";
  } else {
    out.out = "T5: " + text(t5) + "\nT5 verdict: " + verdict_text(v5) + "\nI1: " + text(i1) +
              "\nI1 verdict: " + verdict_text(v1) + "\n";
  }
  return out;
}

// --- verify ---

int verdict_exit(const ZeroVerdict& v) {
  if (is_zero_verdict(v)) return kOk;
  return std::holds_alternative<NonZero>(v) ? kRejected : kInconclusive;
}

Result run_verify(const Options& o) {
  if (o.order < 2) throw UsageError("--order must be at least 2");
  if (o.rho.empty() || o.lagrangian.empty()) throw UsageError("--rho and --lagrangian are required");
  const ZeroTestConfig cfg = zero_config(o);
  VariationalTriple t;
  t.n = o.order;
  t.f = parse_flag("--expr", o.expr);
  t.rho = parse_flag("--rho", o.rho);
  t.L = parse_flag("--lagrangian", o.lagrangian);
  t.m = std::max(o.order, max_jet(t.L));
  if (max_jet(t.f) > 2 * t.n - 1) throw UsageError("--expr may depend on at most p" + std::to_string(2 * t.n - 1));
  if (2 * t.m > kMaxJetIndex) throw UsageError("Lagrangian order is too large");
  const Expr residual = triple_residual(t);
  const ZeroVerdict v = is_zero(residual, cfg);
  Result out;
  out.exit_code = verdict_exit(v);
  if (o.json_output) {
    json input{{"order", t.n}, {"expr", text(t.f)}, {"rho", text(t.rho)}, {"lagrangian", text(t.L)},
               {"config", config_json(cfg)}};
    json result{{"lagrangian_order", t.m}, {"residual", text(residual)}, {"verdict", verdict_json(v)}};
    out.out = envelope("verify", std::move(input), std::move(result)).dump(2) + "\n";
  } else {
    out.out = "residual: " + text(residual) + "\nverdict: " + verdict_text(v) + "\n";
  }
  return out;
}

// --- roundtrip ---

// Per-trial generator seed, decorrelated from the base seed by a splitmix step.
std::uint64_t trial_seed(std::uint64_t base, int trial) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Result run_roundtrip(const Options& o) {
  if (o.order < 2) throw UsageError("--order must be at least 2");
  if (o.trials < 1) throw UsageError("--trials must be at least 1");
  const ZeroTestConfig cfg = zero_config(o);
  const int m = o.lagrangian_order.value_or(o.order);
  if (m < o.order) throw UsageError("--lagrangian-order must be at least --order");

  json trials = json::array();
  std::ostringstream plain;
  int failed = 0;
  for (int i = 0; i < o.trials; ++i) {
    GenConfig gen;
    gen.seed = trial_seed(cfg.seed, i);
    gen.allow_exp = true;
    const ParamSet params = gen_params(o.order, m, gen);
    const VariationalTriple t = construct(params);
    const ZeroVerdict verified = verify_triple(t, cfg);
    const CheckReport report = check(t.f, o.order, cfg);
    std::string outcome = report.accepted() ? "Accepted" : report.rejected() ? "Rejected" : "Inconclusive";
    std::optional<ZeroVerdict> agreement;
    bool passed = is_zero_verdict(verified) && report.accepted();
    if (const auto* a = std::get_if<CheckAccepted>(&report.outcome)) {
      agreement = is_zero(total_derivative(o.order + 1, a->R - params.R()), cfg);
      passed = passed && is_zero_verdict(*agreement);
    }
    if (!passed) ++failed;
    json trial{{"trial", i},
               {"generator_seed", gen.seed},
               {"R", text(params.R())},
               {"f", text(t.f)},
               {"verify", verdict_json(verified)},
               {"check", outcome},
               {"passed", passed}};
    if (agreement) trial["R_agreement"] = verdict_json(*agreement);
    trials.push_back(std::move(trial));
    plain << "trial " << i << ": " << (passed ? "pass" : "FAIL") << " (verify " << verdict_name(verified)
          << ", check " << outcome;
    if (agreement) plain << ", R agreement " << verdict_name(*agreement);
    plain << ")\n";
  }
  plain << (o.trials - failed) << "/" << o.trials << " trials passed\n";

  Result out;
  out.exit_code = failed == 0 ? kOk : kRejected;
  if (o.json_output) {
    json input{{"order", o.order}, {"lagrangian_order", m}, {"trials", o.trials}, {"config", config_json(cfg)}};
    json result{{"trials", trials}, {"passed", o.trials - failed}, {"failed", failed}};
    out.out = envelope("roundtrip", std::move(input), std::move(result)).dump(2) + "\n";
  } else {
    out.out = plain.str();
  }
  return out;
}

void add_zero_test_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Seed for the probabilistic zero test (default: VARMULT_SEED or built-in)");
  cmd->add_option("--samples", o.samples, "Sample points per zero test")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "Absolute and relative tolerance of the zero test")->check(CLI::PositiveNumber);
}

}  // namespace

Result run(const std::vector<std::string>& args) {
  CLI::App app{"Variational multiplier toolkit for u^(2n) = f(x, u, ..., u^(2n-1))", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto* check_cmd = app.add_subcommand("check", "Decide whether p_{2n} = f admits a variational multiplier");
  check_cmd->add_option("--order", o.order, "Half order n")->required();
  check_cmd->add_option("--expr", o.expr, "Right-hand side f")->required();
  check_cmd->add_flag("--json", o.json_output, "Emit a JSON report");
  add_zero_test_flags(check_cmd, o);

  auto* construct_cmd = app.add_subcommand("construct", "Build (f, rho, L) from free data");
  construct_cmd->add_option("--order", o.order, "Half order n")->required();
  construct_cmd->add_option("--lagrangian-order", o.lagrangian_order, "Lagrangian order m >= n");
  construct_cmd->add_option("--R", o.R, "R_n, depending on at most p_n")->required();
  for (int l = 0; l < kMaxLowerFlags; ++l) {
    construct_cmd->add_option("--f" + std::to_string(l), o.f_lower[static_cast<std::size_t>(l)],
                              l == 0 ? "Lower function f_l (one flag per l < n, default 0)" : "");
  }
  construct_cmd->add_option("--N", o.N, "Gauge function N, depending on at most p_{n-1}");
  construct_cmd->add_flag("--json", o.json_output, "Emit a JSON report");

  auto* fels_cmd = app.add_subcommand("fels", "Evaluate the T5 and I1 invariants of p4 = f3");
  fels_cmd->add_option("--expr", o.expr, "Right-hand side f3")->required();
  fels_cmd->add_flag("--json", o.json_output, "Emit a JSON report");
  add_zero_test_flags(fels_cmd, o);

  auto* verify_cmd = app.add_subcommand("verify", "Test rho (p_{2n} - f) = E L");
  verify_cmd->add_option("--order", o.order, "Half order n")->required();
  verify_cmd->add_option("--expr", o.expr, "Right-hand side f")->required();
  verify_cmd->add_option("--rho", o.rho, "Multiplier")->required();
  verify_cmd->add_option("--lagrangian", o.lagrangian, "Lagrangian")->required();
  verify_cmd->add_flag("--json", o.json_output, "Emit a JSON report");
  add_zero_test_flags(verify_cmd, o);

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Run construct, check and verify on random free data");
  roundtrip_cmd->add_option("--order", o.order, "Half order n")->required();
  roundtrip_cmd->add_option("--trials", o.trials, "Number of trials")->required();
  roundtrip_cmd->add_option("--seed", o.seed, "Seed for generation and zero tests")->required();
  roundtrip_cmd->add_option("--lagrangian-order", o.lagrangian_order, "Lagrangian order m >= n");
  roundtrip_cmd->add_option("--samples", o.samples, "Sample points per zero test")->check(CLI::PositiveNumber);
  roundtrip_cmd->add_option("--tol", o.tol, "Absolute and relative tolerance")->check(CLI::PositiveNumber);
  roundtrip_cmd->add_flag("--json", o.json_output, "Emit a JSON report");

  Result result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::CallForVersion&) {
    result.out = std::string(kVersion) + "\n";
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kUsage;
    result.err = std::string("error: ") + e.what() + "\n";
    return result;
  }

  try {
    if (check_cmd->parsed()) return run_check(o);
    if (construct_cmd->parsed()) return run_construct(o);
    if (fels_cmd->parsed()) return run_fels(o);
    if (verify_cmd->parsed()) return run_verify(o);
    return run_roundtrip(o);
  } catch (const ParseError& e) {
    result.exit_code = kUsage;
    result.err = "parse error at byte " + std::to_string(e.offset()) + ": " + e.detail() + "\n";
  } catch (const UsageError& e) {
    result.exit_code = kUsage;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const Error& e) {
    result.exit_code = kUsage;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    result.exit_code = kUsage;
    result.err = std::string("internal error: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace varmult::cli
