#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "varmult/errors.hpp"
#include "varmult/symexpr.hpp"

namespace varmult {

namespace {

struct Rule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

// Legendre roots by Newton iteration from the Chebyshev-like initial guess.
Rule gauss_legendre(int order) {
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(order));
  r.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    auto lo = static_cast<std::size_t>(i);
    auto hi = static_cast<std::size_t>(order - 1 - i);
    r.nodes[lo] = -z;
    r.nodes[hi] = z;
    r.weights[lo] = w;
    r.weights[hi] = w;
  }
  return r;
}

class Evaluator {
 public:
  explicit Evaluator(const ZeroTestConfig& cfg)
      : rule_(gauss_legendre(cfg.quadrature_order)), panels_(cfg.quadrature_panels) {}

  Evaluation run(const Expr& e, const Point& point) {
    env_.fill(0.0);
    assigned_.reset();
    for (const auto& [v, value] : point) {
      env_[slot(v)] = value;
      assigned_.set(slot(v));
    }
    for (Var v : e.free_vars().to_vector()) {
      if (!assigned_.test(slot(v))) throw PreconditionError("eval: no value for " + v.name());
    }
    memo_.clear();
    depth_ = 0;
    scale_ = 0.0;
    double value = eval(e);
    return {value, std::max(scale_, std::abs(value))};
  }

 private:
  static std::size_t slot(Var v) { return static_cast<std::size_t>(v.jet_index() + 1); }

  double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
    scale_ = std::max(scale_, std::abs(v));
    return v;
  }

  double eval(const Expr& e) {
    // Int and function nodes are memoized only outside quadrature, where the environment is fixed.
    const bool memoize = depth_ == 0 && (e.kind() == Kind::Int || e.kind() == Kind::Exp);
    if (memoize) {
      if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    }
    double v = compute(e);
    if (memoize) memo_.emplace(e.node(), v);
    return v;
  }

  double compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const:
        return e.value().to_double();
      case Kind::X:
        return env_[0];
      case Kind::Jet:
        return env_[static_cast<std::size_t>(e.jet_index() + 1)];
      case Kind::Sum: {
        double acc = 0.0;
        for (const auto& t : e.args()) acc += eval(t);
        return checked(acc, "sum");
      }
      case Kind::Prod: {
        double acc = 1.0;
        for (const auto& f : e.args()) acc *= eval(f);
        return checked(acc, "product");
      }
      case Kind::Pow: {
        double b = eval(e.arg());
        if (b == 0.0 && e.exponent() < 0) throw DomainError("division by zero");
        return checked(std::pow(b, e.exponent()), "power");
      }
      case Kind::Exp:
        return checked(std::exp(eval(e.arg())), "exp");
      case Kind::Log: {
        double a = eval(e.arg());
        if (a <= 0.0) throw DomainError("log of a nonpositive value");
        return checked(std::log(a), "log");
      }
      case Kind::Sin:
        return checked(std::sin(eval(e.arg())), "sin");
      case Kind::Cos:
        return checked(std::cos(eval(e.arg())), "cos");
      case Kind::Int:
        return checked(quadrature(e), "antiderivative");
    }
    throw Error("eval: unknown node kind");
  }

  // Composite Gauss-Legendre over [0, t] in the integration variable.
  double quadrature(const Expr& e) {
    const std::size_t s = slot(e.int_var());
    const double t = env_[s];
    if (t == 0.0) return 0.0;
    const double width = t / panels_;
    double total = 0.0;
    ++depth_;
    for (int panel = 0; panel < panels_; ++panel) {
      const double mid = width * (panel + 0.5);
      for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        env_[s] = mid + 0.5 * width * rule_.nodes[i];
        total += rule_.weights[i] * eval(e.arg());
      }
    }
    --depth_;
    env_[s] = t;
    return 0.5 * width * total;
  }

  Rule rule_;
  int panels_;
  std::array<double, kMaxJetIndex + 2> env_{};
  std::bitset<kMaxJetIndex + 2> assigned_;
  std::unordered_map<const detail::Node*, double> memo_;
  int depth_ = 0;
  double scale_ = 0.0;
};

double uniform(std::mt19937_64& rng, Interval box) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return box.lo + (box.hi - box.lo) * u;
}

}  // namespace

void ZeroTestConfig::validate() const {
  if (samples < 1) throw PreconditionError("samples must be at least 1");
  if (!(atol > 0.0) || !(rtol > 0.0)) throw PreconditionError("tolerances must be positive");
  if (max_retries_per_point < 0) throw PreconditionError("max_retries_per_point must be nonnegative");
  if (quadrature_order < 1 || quadrature_panels < 1) throw PreconditionError("quadrature sizes must be positive");
  auto check = [](Interval b) {
    if (!(b.lo <= b.hi)) throw PreconditionError("sampling box is empty");
  };
  check(box);
  for (const auto& [v, b] : box_overrides) check(b);
}

Interval ZeroTestConfig::interval_for(Var v) const {
  auto it = box_overrides.find(v);
  return it == box_overrides.end() ? box : it->second;
}

Evaluation eval_with_scale(const Expr& e, const Point& point, const ZeroTestConfig& cfg) {
  cfg.validate();
  return Evaluator(cfg).run(e, point);
}

double eval(const Expr& e, const Point& point, const ZeroTestConfig& cfg) {
  return eval_with_scale(e, point, cfg).value;
}

bool is_zero_verdict(const ZeroVerdict& v) {
  return std::holds_alternative<ZeroStructural>(v) || std::holds_alternative<ZeroNumeric>(v);
}

std::string verdict_name(const ZeroVerdict& v) {
  static constexpr std::array<const char*, 4> names{"ZeroStructural", "ZeroNumeric", "NonZero", "Inconclusive"};
  return names[v.index()];
}

ZeroVerdict is_zero(const Expr& e, const ZeroTestConfig& cfg) {
  cfg.validate();
  const Expr s = simplify(e);
  if (s.is_zero()) return ZeroStructural{};

  const std::vector<Var> vars = s.free_vars().to_vector();
  std::mt19937_64 rng(cfg.seed);
  Evaluator evaluator(cfg);
  int tested = 0;
  std::string last_error;
  for (int sample = 0; sample < cfg.samples; ++sample) {
    for (int attempt = 0; attempt <= cfg.max_retries_per_point; ++attempt) {
      Point pt;
      for (Var v : vars) pt[v] = uniform(rng, cfg.interval_for(v));
      Evaluation r;
      try {
        r = evaluator.run(s, pt);
      } catch (const DomainError& err) {
        last_error = err.what();
        continue;
      }
      if (std::abs(r.value) > cfg.atol + cfg.rtol * r.scale) return NonZero{std::move(pt), r.value};
      ++tested;
      break;
    }
  }
  if (tested == 0) return Inconclusive{"no sample point could be evaluated: " + last_error};
  return ZeroNumeric{tested};
}

}  // namespace varmult
