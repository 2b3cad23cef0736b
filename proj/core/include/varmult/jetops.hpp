#pragma once

#include <string>
#include <vector>

#include "varmult/expr.hpp"
#include "varmult/rational.hpp"

namespace varmult {

/// D_m = d/dx + sum_{j=1..m} p_j d/dp_{j-1}, applied exactly. Requires m >= 0.
Expr total_derivative(int m, const Expr& e);

/// D_m applied k times.
Expr d_pow(int m, int k, const Expr& e);

/// E_m^n = sum_{k=0..n} (-1)^k D_m^k d/dp_k, evaluated right to left.
Expr euler_op(int m, int n, const Expr& e);

/// Multi-index I = (i_{m-1}, ..., i_0). The slot j-th from the left (1-based)
/// holds i_{m-j} and carries weight j.
class MultiIndex {
 public:
  /// Entries in descending label order. Throws PreconditionError if empty or any entry < 0.
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zero(int m);

  int length() const { return static_cast<int>(entries_.size()); }
  /// i_label for 0 <= label < m.
  int at(int label) const;
  /// Entry in the slot of weight j, i.e. i_{m-j}, for 1 <= j <= m.
  int slot(int j) const { return at(length() - j); }
  const std::vector<int>& entries() const { return entries_; }

  /// |I| = sum of entries.
  int abs() const;
  /// ||I|| = sum_j j * i_{m-j}.
  int norm() const;
  /// ||I||* = prod_j (j!)^{i_{m-j}}.
  Rational star_norm() const;
  /// I! = prod of entry factorials.
  Rational factorial() const;

  /// I with the slot of weight j shifted by delta. The result may hold a negative entry.
  MultiIndex shifted(int j, int delta) const;
  bool has_negative() const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  struct Unchecked {};
  MultiIndex(std::vector<int> entries, Unchecked) : entries_(std::move(entries)) {}
  std::vector<int> entries_;
};

/// a_I^(k) = k! / (||I||* I! (k - ||I||)!), and 0 when ||I|| > k or some entry is negative.
Rational a_coeff(const MultiIndex& index, int k);

/// One term coeff * p_m^pm_power * D_{m-1}^d_power * d^I of the expansion of D_m^k.
struct OperatorTerm {
  Rational coeff;
  int pm_power = 0;
  int d_power = 0;
  MultiIndex index = MultiIndex::zero(1);
};

/// Terms of D_m^k with nonzero coefficient, ordered by ||I|| then lexicographically
/// on the entries. Throws PreconditionError unless m > k >= 1.
std::vector<OperatorTerm> expand_d_pow(int m, int k);

/// Applies an operator-term list of D_m^k (as produced by expand_d_pow(m, k)) to e.
Expr apply_terms(int m, const std::vector<OperatorTerm>& terms, const Expr& e);

}  // namespace varmult
