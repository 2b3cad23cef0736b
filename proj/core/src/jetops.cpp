#include "varmult/jetops.hpp"

#include <algorithm>
#include <functional>

#include "jet_poly.hpp"
#include "varmult/errors.hpp"

namespace varmult {

namespace detail {

Poly total_derivative(const Poly& p, int m) {
  Poly out;
  for (Var w : p.vars().to_vector()) {
    if (w.is_x()) {
      out.add(diff(p, w));
    } else if (w.jet_index() < m) {
      out.add(Poly::atom(Expr::jet(w.jet_index() + 1)) * diff(p, w));
    }
  }
  return out;
}

Poly d_pow(const Poly& p, int m, int k) {
  Poly out = p;
  for (int i = 0; i < k && !out.is_zero(); ++i) out = total_derivative(out, m);
  return out;
}

Poly euler_op(const Poly& p, int m, int n) {
  Poly out;
  const VarSet vars = p.vars();
  for (int k = 0; k <= n; ++k) {
    if (!vars.contains(Var::jet(k))) continue;
    out.add(d_pow(diff(p, Var::jet(k)), m, k), Rational(k % 2 == 0 ? 1 : -1));
  }
  return out;
}

}  // namespace detail

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

Expr total_derivative(int m, const Expr& e) {
  require(m >= 0, "total_derivative: m must be nonnegative");
  return detail::to_expr(detail::total_derivative(detail::to_poly(e), m));
}

Expr d_pow(int m, int k, const Expr& e) {
  require(m >= 0 && k >= 0, "d_pow: m and k must be nonnegative");
  return detail::to_expr(detail::d_pow(detail::to_poly(e), m, k));
}

Expr euler_op(int m, int n, const Expr& e) {
  require(m >= 0 && n >= 0, "euler_op: m and n must be nonnegative");
  return detail::to_expr(detail::euler_op(detail::to_poly(e), m, n));
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  require(!entries_.empty(), "MultiIndex: length must be at least 1");
  require(!has_negative(), "MultiIndex: entries must be nonnegative");
}

MultiIndex MultiIndex::zero(int m) {
  require(m >= 1, "MultiIndex: length must be at least 1");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(m), 0));
}

int MultiIndex::at(int label) const {
  require(label >= 0 && label < length(), "MultiIndex: label out of range");
  return entries_[static_cast<std::size_t>(length() - 1 - label)];
}

int MultiIndex::abs() const {
  int s = 0;
  for (int i : entries_) s += i;
  return s;
}

int MultiIndex::norm() const {
  int s = 0;
  for (std::size_t j = 0; j < entries_.size(); ++j) s += static_cast<int>(j + 1) * entries_[j];
  return s;
}

Rational MultiIndex::star_norm() const {
  Rational out(1);
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    out *= varmult::factorial(static_cast<int>(j + 1)).pow(entries_[j]);
  }
  return out;
}

Rational MultiIndex::factorial() const {
  Rational out(1);
  for (int i : entries_) out *= varmult::factorial(i);
  return out;
}

MultiIndex MultiIndex::shifted(int j, int delta) const {
  require(j >= 1 && j <= length(), "MultiIndex: slot out of range");
  std::vector<int> e = entries_;
  e[static_cast<std::size_t>(j - 1)] += delta;
  return MultiIndex(std::move(e), Unchecked{});
}

bool MultiIndex::has_negative() const {
  return std::any_of(entries_.begin(), entries_.end(), [](int i) { return i < 0; });
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (j > 0) out += ",";
    out += std::to_string(entries_[j]);
  }
  return out + ")";
}

Rational a_coeff(const MultiIndex& index, int k) {
  if (k < 0 || index.has_negative()) return Rational(0);
  const int w = index.norm();
  if (w > k) return Rational(0);
  return factorial(k) / (index.star_norm() * index.factorial() * factorial(k - w));
}

std::vector<OperatorTerm> expand_d_pow(int m, int k) {
  require(k >= 1 && m > k, "expand_d_pow: requires m > k >= 1");
  // Only the k leftmost slots (weights 1..k) can be nonzero when ||I|| <= k.
  std::vector<std::vector<int>> found;
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> visit = [&](int weight, int budget) {
    if (weight > k) {
      found.push_back(counts);
      return;
    }
    for (int c = 0; c * weight <= budget; ++c) {
      counts[static_cast<std::size_t>(weight - 1)] = c;
      visit(weight + 1, budget - c * weight);
    }
    counts[static_cast<std::size_t>(weight - 1)] = 0;
  };
  visit(1, k);

  std::vector<OperatorTerm> terms;
  for (const auto& c : found) {
    std::vector<int> entries(static_cast<std::size_t>(m), 0);
    std::copy(c.begin(), c.end(), entries.begin());
    MultiIndex index(std::move(entries));
    Rational a = a_coeff(index, k);
    if (a.is_zero()) continue;
    terms.push_back(OperatorTerm{a, index.abs(), k - index.norm(), std::move(index)});
  }
  std::sort(terms.begin(), terms.end(), [](const OperatorTerm& a, const OperatorTerm& b) {
    if (a.index.norm() != b.index.norm()) return a.index.norm() < b.index.norm();
    return a.index.entries() > b.index.entries();
  });
  return terms;
}

Expr apply_terms(int m, const std::vector<OperatorTerm>& terms, const Expr& e) {
  require(m >= 1, "apply_terms: m must be at least 1");
  const detail::Poly p = detail::to_poly(e);
  const detail::Poly pm = detail::Poly::atom(Expr::jet(m));
  detail::Poly out;
  for (const auto& t : terms) {
    require(t.index.length() == m, "apply_terms: multi-index length must equal m");
    detail::Poly q = p;
    for (int label = 0; label < m && !q.is_zero(); ++label) {
      for (int r = 0; r < t.index.at(label); ++r) q = detail::diff(q, Var::jet(label));
    }
    q = detail::d_pow(q, m - 1, t.d_power);
    out.add(detail::power(pm, t.pm_power) * q, t.coeff);
  }
  return detail::to_expr(out);
}

}  // namespace varmult
