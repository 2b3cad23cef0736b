#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "varmult/expr.hpp"
#include "varmult/symexpr.hpp"

namespace varmult {

enum class StepKind { S1, S2, S3, S4, S5 };

/// Step of the decision procedure; S2 carries k, S4 carries j.
struct StepId {
  StepKind kind = StepKind::S1;
  int index = 0;

  /// "S1", "S2(k=3)", "S3", "S4(j=1)", "S5".
  std::string to_string() const;
  friend bool operator==(const StepId&, const StepId&) = default;
};

/// One zero check. `derived` holds the quantity defined once the step's checks pass.
struct TraceEntry {
  StepId step;
  std::string label;
  Expr checked;
  ZeroVerdict verdict;
  bool defensive = false;
  std::optional<std::pair<std::string, Expr>> derived;
};

struct TraceNote {
  StepId step;
  std::string text;
};

struct CheckAccepted {
  Expr R;
  Expr rho;
  std::vector<Expr> f_lower;  // f_0 .. f_{n-1}
  Expr L;
  ZeroVerdict residual;
};

struct CheckRejected {
  StepId step;
  Expr witness;
  ZeroVerdict verdict;
};

struct CheckInconclusive {
  StepId step;
  Expr witness;
  std::string reason;
};

struct CheckReport {
  int n = 2;
  std::variant<CheckAccepted, CheckRejected, CheckInconclusive> outcome;
  std::vector<TraceEntry> trace;
  std::vector<TraceNote> notes;

  bool accepted() const { return std::holds_alternative<CheckAccepted>(outcome); }
  bool rejected() const { return std::holds_alternative<CheckRejected>(outcome); }
  bool inconclusive() const { return std::holds_alternative<CheckInconclusive>(outcome); }
  /// Number of non-defensive checks recorded.
  int check_count() const;
};

/// Number of non-defensive checks a run that reaches the last step performs.
int expected_check_count(int n);

/// Decides whether p_{2n} = f admits a multiplier exp(-R) and reconstructs
/// (R, f_0..f_{n-1}, L) when it does. Throws PreconditionError if n < 2 or
/// max_jet(f) > 2n - 1.
CheckReport check(const Expr& f, int n, const ZeroTestConfig& cfg = {});

}  // namespace varmult
