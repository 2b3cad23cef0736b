#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "varmult/expr.hpp"

namespace varmult {

// --- parsing and printing -------------------------------------------------

/// Parses the expression grammar (x, p<k>, rationals, decimals, + - * / ^,
/// exp/log/sin/cos, Int(expr, var)) into a canonical expression.
/// Throws ParseError with the byte offset of the offending token.
Expr parse(std::string_view text);

enum class RenderFormat { Plain, Json };

/// Plain text re-parses to the same canonical expression; JSON is the nested
/// {"op": ..., "args": [...]} form with {"const"}, {"var"}, {"jet"} leaves.
std::string render(const Expr& e, RenderFormat format = RenderFormat::Plain);

// --- algebra and calculus ---------------------------------------------------

/// Canonical form: flattened, ordered, like terms combined, constants folded.
Expr simplify(const Expr& e);

/// Exact partial derivative treating x and every p_k as independent.
Expr diff(const Expr& e, Var v);

/// Definite antiderivative from 0 in v, applied `times` (1 or 2) times.
/// Falls back to an opaque Int node when no closed-form rule applies.
Expr antideriv(const Expr& e, Var v, int times = 1);

/// Simultaneous substitution followed by simplification.
/// Throws SubstitutionError when a binding would rebind or capture the
/// integration variable of an Int node (binding it to 0 is allowed and yields 0).
Expr substitute(const Expr& e, const std::map<Var, Expr>& bindings);

/// Largest k such that p_k occurs in the simplified expression, -1 if none.
int max_jet(const Expr& e);

// --- numerics -----------------------------------------------------------------

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

struct ZeroTestConfig {
  int samples = 20;
  Interval box{};                            // sampling interval for every variable...
  std::map<Var, Interval> box_overrides{};  // ...unless overridden here
  double atol = 1e-9;
  double rtol = 1e-8;
  std::uint64_t seed = 0x5eed2024ULL;
  int max_retries_per_point = 50;
  int quadrature_order = 32;
  int quadrature_panels = 4;

  /// Throws PreconditionError unless samples >= 1, tolerances > 0 and every box is nonempty.
  void validate() const;
  Interval interval_for(Var v) const;
};

using Point = std::map<Var, double>;

/// Floating-point value; Int nodes by composite Gauss-Legendre quadrature.
/// Throws DomainError on log of a nonpositive value, poles, or non-finite results,
/// and PreconditionError if a free variable is unassigned.
double eval(const Expr& e, const Point& point, const ZeroTestConfig& cfg = {});

struct Evaluation {
  double value = 0.0;
  /// Largest absolute value of any subterm visited, used to scale tolerances.
  double scale = 0.0;
};
Evaluation eval_with_scale(const Expr& e, const Point& point, const ZeroTestConfig& cfg = {});

struct ZeroStructural {};
struct ZeroNumeric {
  int points_tested = 0;
};
struct NonZero {
  Point witness;
  double value = 0.0;
};
struct Inconclusive {
  std::string reason;
};
using ZeroVerdict = std::variant<ZeroStructural, ZeroNumeric, NonZero, Inconclusive>;

/// True for ZeroStructural and ZeroNumeric.
bool is_zero_verdict(const ZeroVerdict& v);
std::string verdict_name(const ZeroVerdict& v);

/// Structural check first, then sampling from cfg.box with the configured seed.
ZeroVerdict is_zero(const Expr& e, const ZeroTestConfig& cfg = {});

}  // namespace varmult
