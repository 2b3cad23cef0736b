#include "varmult/checker.hpp"

#include <string>

#include "varmult/errors.hpp"
#include "varmult/jetops.hpp"
#include "varmult/varcore.hpp"

namespace varmult {

namespace {

std::string d(int k) { return "d" + std::to_string(k); }

Expr sign(int k) { return Expr(k % 2 == 0 ? 1 : -1); }

struct Stop {};

class Run {
 public:
  Run(int n, const ZeroTestConfig& cfg, CheckReport& report) : n_(n), cfg_(cfg), report_(report) {}

  // Records a zero check; ends the run on a nonzero or undecidable verdict.
  void require_zero(StepId step, std::string label, const Expr& e, bool defensive = false) {
    ZeroVerdict v = is_zero(e, cfg_);
    report_.trace.push_back(TraceEntry{step, std::move(label), e, v, defensive, std::nullopt});
    if (is_zero_verdict(v)) return;
    if (auto* inc = std::get_if<Inconclusive>(&v)) {
      report_.outcome = CheckInconclusive{step, e, inc->reason};
    } else {
      report_.outcome = CheckRejected{step, e, v};
    }
    throw Stop{};
  }

  void derive(std::string name, const Expr& value) {
    report_.trace.back().derived = std::make_pair(std::move(name), value);
  }

  void note(StepId step, std::string text) { report_.notes.push_back(TraceNote{step, std::move(text)}); }

  void execute(const Expr& f) {
    const int top = 2 * n_ - 1;
    const Var p_top = Var::jet(top);
    const Expr df = diff(f, p_top);

    // S1
    const StepId s1{StepKind::S1, 0};
    for (int k = n_ + 2; k <= top; ++k) require_zero(s1, d(k) + " " + d(top) + " f", diff(df, Var::jet(k)));
    Expr g = Rational(1, n_) * df;
    if (report_.trace.empty()) {
      note(s1, "g_" + std::to_string(n_ + 1) + " = " + render(g));
    } else {
      derive("g_" + std::to_string(n_ + 1), g);
    }

    // S2
    Expr R_acc;
    std::vector<Expr> slopes(static_cast<std::size_t>(n_ + 2));
    for (int k = n_ + 1; k >= 1; --k) {
      const StepId step{StepKind::S2, k};
      const Var pk = Var::jet(k);
      const Expr slope = diff(g, pk);
      require_zero(step, d(k) + "^2 g_" + std::to_string(k), diff(slope, pk));
      const Expr integral = antideriv(slope, Var::jet(k - 1), 1);
      R_acc += integral;
      slopes[static_cast<std::size_t>(k)] = slope;
      if (k == 1) g1_ = g;
      g = g - slope * Expr::jet(k) - total_derivative(k - 1, integral);
      derive("g_" + std::to_string(k - 1), g);
    }

    // S3
    const StepId s3{StepKind::S3, 0};
    require_zero(s3, "d0 g_0", diff(g, Var::jet(0)));
    R_ = R_acc + antideriv(g, Var::x(), 1);
    derive("R", R_);
    compare_shifted_R(slopes);
    const Expr half_quadratic =
        f - df * Expr::jet(top) + Rational(1, 2) * diff(df, p_top) * pow(Expr::jet(top), 2);
    Expr h = -exp(-R_) * half_quadratic -
             sign(n_) * euler_op(2 * n_ - 2, n_, antideriv(exp(-R_), Var::jet(n_), 2));
    note(s3, "h_" + std::to_string(2 * n_ - 2) + " = " + render(h));

    // S4
    f_lower_.assign(static_cast<std::size_t>(n_), Expr());
    for (int j = 1; j <= n_ - 1; ++j) {
      const StepId step{StepKind::S4, j};
      const int even = 2 * n_ - 2 * j;
      const int l = n_ - j;
      const std::string h_name = "h_" + std::to_string(even);
      require_zero(step, d(even + 1) + " " + h_name, diff(h, Var::jet(even + 1)));
      const Expr fl = diff(h, Var::jet(even));
      for (int k = n_ + 1 - j; k <= even; ++k) require_zero(step, d(k) + " " + d(even) + " " + h_name, diff(fl, Var::jet(k)));
      f_lower_[static_cast<std::size_t>(l)] = fl;
      h = h - fl * Expr::jet(even) - sign(l) * euler_op(2 * l - 1, l, antideriv(fl, Var::jet(l), 2));
      derive("f_" + std::to_string(l), fl);
    }

    // S5
    const StepId s5{StepKind::S5, 0};
    require_zero(s5, "d1 h_0", diff(h, Var::jet(1)));
    for (Var v : h.free_vars().to_vector()) {
      if (v.jet_index() >= 2) require_zero(s5, d(v.jet_index()) + " h_0", diff(h, v), true);
    }
    f_lower_[0] = h;
    derive("f_0", h);
  }

  // R assembled with slopes integrated in p_k instead of p_{k-1}; differences are reported as a note only.
  void compare_shifted_R(const std::vector<Expr>& slopes) {
    Expr shifted;
    for (int k = 1; k <= n_; ++k) shifted += antideriv(slopes[static_cast<std::size_t>(k)], Var::jet(k), 1);
    shifted += antideriv(g1_ - slopes[1] * Expr::jet(1), Var::x(), 1);
    ZeroVerdict v = is_zero(total_derivative(n_ + 1, shifted - R_), cfg_);
    if (!is_zero_verdict(v)) {
      note({StepKind::S3, 0},
           "shifted-index R assembly disagrees with the recursion (D_" + std::to_string(n_ + 1) +
               " of the difference: " + verdict_name(v) + "); using the recursion");
    }
  }

  const Expr& R() const { return R_; }
  const std::vector<Expr>& f_lower() const { return f_lower_; }

 private:
  int n_;
  const ZeroTestConfig& cfg_;
  CheckReport& report_;
  Expr g1_;
  Expr R_;
  std::vector<Expr> f_lower_;
};

}  // namespace

std::string StepId::to_string() const {
  switch (kind) {
    case StepKind::S1:
      return "S1";
    case StepKind::S2:
      return "S2(k=" + std::to_string(index) + ")";
    case StepKind::S3:
      return "S3";
    case StepKind::S4:
      return "S4(j=" + std::to_string(index) + ")";
    case StepKind::S5:
      return "S5";
  }
  return "?";
}

int CheckReport::check_count() const {
  int c = 0;
  for (const auto& e : trace) c += e.defensive ? 0 : 1;
  return c;
}

int expected_check_count(int n) {
  // S1: n-2 (none for n = 2); S2: n+1; S3: 1; S4: sum_j (n+1-j); S5: 1.
  const int s1 = n >= 3 ? n - 2 : 0;
  return s1 + (n + 1) + 1 + (n - 1) + n * (n - 1) / 2 + 1;
}

CheckReport check(const Expr& f_in, int n, const ZeroTestConfig& cfg) {
  if (n < 2) throw PreconditionError("check: n must be at least 2");
  if (2 * n > kMaxJetIndex) throw PreconditionError("check: order exceeds the jet index limit");
  const Expr f = simplify(f_in);
  if (max_jet(f) > 2 * n - 1) {
    throw PreconditionError("check: f may depend on at most p" + std::to_string(2 * n - 1));
  }
  cfg.validate();

  CheckReport report;
  report.n = n;
  Run run(n, cfg, report);
  try {
    run.execute(f);
  } catch (const Stop&) {
    return report;
  }

  const StepId s5{StepKind::S5, 0};
  VariationalTriple triple;
  try {
    triple = construct(ParamSet(n, run.R(), run.f_lower(), Expr()));
  } catch (const DependenceError& err) {
    report.outcome = CheckInconclusive{s5, run.R(), std::string("reconstructed data out of bounds: ") + err.what()};
    return report;
  }
  // The constructor rebuilds the right-hand side from the reconstructed data; the
  // residual is taken against the input equation.
  triple.f = f;
  ZeroVerdict residual = verify_triple(triple, cfg);
  if (!is_zero_verdict(residual)) {
    const std::string reason = std::holds_alternative<Inconclusive>(residual)
                                   ? std::get<Inconclusive>(residual).reason
                                   : "every check passed but the reconstructed triple does not verify";
    report.outcome = CheckInconclusive{s5, triple_residual(triple), reason};
    return report;
  }
  report.outcome = CheckAccepted{run.R(), triple.rho, run.f_lower(), triple.L, residual};
  return report;
}

}  // namespace varmult
