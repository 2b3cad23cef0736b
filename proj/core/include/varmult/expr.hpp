#pragma once

#include <bitset>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "varmult/rational.hpp"

namespace varmult {

/// Largest jet index p_k accepted anywhere in the kernel.
inline constexpr int kMaxJetIndex = 64;

/// An independent coordinate of the jet space: x or one of p_0, p_1, ...
class Var {
 public:
  static constexpr Var x() { return Var(-1); }
  /// Throws std::out_of_range unless 0 <= k <= kMaxJetIndex.
  static Var jet(int k);

  bool is_x() const { return id_ < 0; }
  bool is_jet() const { return id_ >= 0; }
  /// Jet order k of p_k; -1 for x.
  int jet_index() const { return id_; }
  std::string name() const;

  friend constexpr auto operator<=>(const Var&, const Var&) = default;

 private:
  constexpr explicit Var(int id) : id_(id) {}
  int id_;
};

/// Set of variables; bit 0 is x, bit k+1 is p_k.
class VarSet {
 public:
  void insert(Var v) { bits_.set(slot(v)); }
  void erase(Var v) { bits_.reset(slot(v)); }
  bool contains(Var v) const { return bits_.test(slot(v)); }
  bool empty() const { return bits_.none(); }
  bool intersects(const VarSet& o) const { return (bits_ & o.bits_).any(); }
  VarSet& operator|=(const VarSet& o) {
    bits_ |= o.bits_;
    return *this;
  }
  /// Highest jet index present, -1 if none.
  int max_jet() const;
  /// Members in order x, p0, p1, ...
  std::vector<Var> to_vector() const;

  friend bool operator==(const VarSet&, const VarSet&) = default;

 private:
  static std::size_t slot(Var v) { return static_cast<std::size_t>(v.jet_index() + 1); }
  std::bitset<kMaxJetIndex + 2> bits_;
};

enum class Kind : std::uint8_t { Const, X, Jet, Pow, Prod, Sum, Exp, Log, Sin, Cos, Int };

class Expr;

namespace detail {
struct Node;
}

/// Immutable symbolic expression over x, the jet variables p_k, elementary
/// functions and opaque antiderivative nodes.
///
/// Values are cheap to copy (shared immutable nodes). The static builders
/// (`sum`, `product`, ...) assemble raw trees without rewriting; the
/// arithmetic operators and all calculus operations return canonical
/// (simplified) expressions.
class Expr {
 public:
  /// The constant 0.
  Expr();
  Expr(const Rational& value);  // NOLINT(implicit)
  Expr(std::int64_t value) : Expr(Rational(value)) {}  // NOLINT(implicit)
  Expr(int value) : Expr(Rational(value)) {}  // NOLINT(implicit)

  static Expr constant(const Rational& value) { return Expr(value); }
  static Expr x();
  static Expr jet(int k);
  static Expr var(Var v);

  // Raw builders. Sum/product operand lists may be of any length.
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr pow(Expr base, int exponent);
  static Expr exp(Expr arg);
  static Expr log(Expr arg);
  static Expr sin(Expr arg);
  static Expr cos(Expr arg);
  /// Definite integral of `integrand` over `v` from 0 to the current value of v.
  static Expr antideriv_node(Expr integrand, Var v);

  Kind kind() const;
  /// Value of a Const node.
  const Rational& value() const;
  /// Index of a Jet node.
  int jet_index() const;
  /// Exponent of a Pow node.
  int exponent() const;
  /// Operands: Sum/Prod terms, Pow base, function argument or Int integrand.
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i = 0) const { return args()[i]; }
  /// Integration variable of an Int node.
  Var int_var() const;

  /// Variables the value depends on (an Int node depends on its own variable).
  const VarSet& free_vars() const;
  /// Highest p_k occurring syntactically, -1 if none.
  int max_jet() const;
  bool depends_on(Var v) const { return free_vars().contains(v); }

  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero() const;
  bool is_one() const;
  /// Produced by the simplifier (or a leaf) and therefore in canonical form.
  bool is_canonical() const;

  std::size_t hash() const;
  const detail::Node* node() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  /// Deterministic structural total order.
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

  /// Canonical arithmetic.
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const detail::Node> node_;
};

/// Canonical power, exponential and elementary functions.
Expr pow(const Expr& base, int exponent);
Expr exp(const Expr& arg);
Expr log(const Expr& arg);
Expr sin(const Expr& arg);
Expr cos(const Expr& arg);

namespace detail {

struct Node {
  Kind kind;
  bool canonical = false;
  int index = 0;  // Jet index, Pow exponent, Int variable id (-1 = x)
  Rational value;
  std::vector<Expr> args;
  VarSet vars;
  std::size_t hash = 0;
};

/// Builds a node and fills in its variable set and hash.
Expr make_node(Kind kind, std::vector<Expr> args, int index, Rational value, bool canonical);

}  // namespace detail

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

}  // namespace varmult
