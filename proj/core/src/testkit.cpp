#include "varmult/testkit.hpp"

#include <map>
#include <random>

#include "varmult/errors.hpp"
#include "varmult/jetops.hpp"

namespace varmult {

namespace {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  // Uniform integer in [lo, hi].
  int between(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng_() % span);
  }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool coin(double p) { return unit() < p; }
  std::uint64_t fork() { return rng_(); }

  Rational coefficient(int limit) {
    int num = between(1, limit) * (coin(0.5) ? -1 : 1);
    return Rational(num, between(1, limit));
  }

 private:
  std::mt19937_64 rng_;
};

Expr polynomial(Source& src, const std::vector<Var>& vars, int max_degree, int max_terms, int limit) {
  Expr out;
  const int terms = src.between(1, max_terms);
  for (int t = 0; t < terms; ++t) {
    Expr mono = Expr(src.coefficient(limit));
    const int degree = src.between(1, max_degree);
    for (int i = 0; i < degree; ++i) {
      mono *= Expr::var(vars[static_cast<std::size_t>(src.between(0, static_cast<int>(vars.size()) - 1))]);
    }
    out += mono;
  }
  return out;
}

Expr generate(Source& src, const std::vector<Var>& vars, const GenConfig& cfg, bool allow_exp) {
  Expr out = polynomial(src, vars, cfg.max_degree, cfg.max_terms, cfg.coeff_limit);
  if (allow_exp && src.coin(0.5)) {
    Expr arg = polynomial(src, vars, std::min(cfg.max_degree, 2), std::min(cfg.max_terms, 2), cfg.coeff_limit);
    out += Expr(src.coefficient(cfg.coeff_limit)) * exp(arg);
  }
  return out;
}

}  // namespace

void GenConfig::validate() const {
  if (max_degree < 1 || max_terms < 1 || coeff_limit < 1) {
    throw PreconditionError("GenConfig: max_degree, max_terms and coeff_limit must be at least 1");
  }
  if (!(component_probability >= 0.0 && component_probability <= 1.0)) {
    throw PreconditionError("GenConfig: component_probability must lie in [0, 1]");
  }
}

std::vector<Var> jet_vars(int k) {
  std::vector<Var> out{Var::x()};
  for (int j = 0; j <= k; ++j) out.push_back(Var::jet(j));
  return out;
}

Expr gen_expr(const std::vector<Var>& vars, const GenConfig& cfg) {
  cfg.validate();
  if (vars.empty()) throw PreconditionError("gen_expr: variable set must be nonempty");
  Source src(cfg.seed);
  return generate(src, vars, cfg, cfg.allow_exp);
}

ParamSet gen_params(int n, int m, const GenConfig& cfg) {
  cfg.validate();
  if (n < 2 || m < n) throw PreconditionError("gen_params: requires m >= n >= 2");
  Source src(cfg.seed);
  auto component = [&](int top, bool allow_exp) {
    // Every component consumes one fork so later components do not shift with the probability.
    Source sub(src.fork());
    if (!src.coin(cfg.component_probability)) return Expr();
    return generate(sub, jet_vars(top), cfg, allow_exp);
  };
  Expr R = component(n, false);
  std::vector<Expr> f;
  for (int l = 0; l < n; ++l) f.push_back(component(l, cfg.allow_exp));
  Expr N = component(n - 1, cfg.allow_exp);
  return ParamSet(n, R, std::move(f), N, m);
}

Expr brute_d_pow(int m, int k, const Expr& e) {
  if (m < 0 || k < 0) throw PreconditionError("brute_d_pow: m and k must be nonnegative");
  Expr out = e;
  for (int i = 0; i < k; ++i) out = total_derivative(m, out);
  return out;
}

PolynomialPath::PolynomialPath(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

int PolynomialPath::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

PolynomialPath PolynomialPath::derivative(int j) const {
  std::vector<Rational> c = coeffs_;
  for (int r = 0; r < j && !c.empty(); ++r) {
    for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = c[i] * Rational(static_cast<std::int64_t>(i));
    c.pop_back();
  }
  return PolynomialPath(std::move(c));
}

Rational PolynomialPath::value(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Expr PolynomialPath::as_expr() const {
  Expr out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out += coeffs_[i] * pow(Expr::x(), static_cast<int>(i));
  return out;
}

PolynomialPath gen_path(int degree, const GenConfig& cfg) {
  cfg.validate();
  Source src(cfg.seed);
  std::vector<Rational> c;
  for (int i = 0; i <= degree; ++i) c.push_back(src.coefficient(cfg.coeff_limit));
  return PolynomialPath(std::move(c));
}

std::vector<OraclePair> el_path_oracle(const Expr& L, int n, const PolynomialPath& u,
                                       const std::vector<Rational>& xs) {
  if (max_jet(L) > n) throw DependenceError("el_path_oracle: L may depend on at most p" + std::to_string(n));
  if (u.degree() > 2 * n + 2) throw PreconditionError("el_path_oracle: path degree exceeds 2n + 2");

  std::map<Var, Expr> along;
  for (int j = 0; j <= n; ++j) along.emplace(Var::jet(j), u.derivative(j).as_expr());

  // Left side: a univariate expression in x, differentiated in x only.
  Expr lhs_expr;
  for (int k = 0; k <= n; ++k) {
    Expr term = substitute(diff(L, Var::jet(k)), along);
    for (int r = 0; r < k; ++r) term = diff(term, Var::x());
    lhs_expr += (k % 2 == 0 ? Expr(1) : Expr(-1)) * term;
  }
  const Expr rhs_expr = euler_op(2 * n, n, L);

  std::vector<OraclePair> out;
  for (const Rational& x : xs) {
    Point lhs_point{{Var::x(), x.to_double()}};
    Point rhs_point{{Var::x(), x.to_double()}};
    for (int j = 0; j <= 2 * n; ++j) rhs_point[Var::jet(j)] = u.derivative(j).value(x).to_double();
    Evaluation l = eval_with_scale(lhs_expr, lhs_point);
    Evaluation r = eval_with_scale(rhs_expr, rhs_point);
    out.push_back(OraclePair{x, l.value, r.value, std::max(l.scale, r.scale)});
  }
  return out;
}

}  // namespace varmult
