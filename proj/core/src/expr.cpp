#include "varmult/expr.hpp"

#include <stdexcept>

namespace varmult {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  // boost::hash_combine constant
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int kind_rank(Kind k) { return static_cast<int>(k); }

std::strong_ordering compare_nodes(const detail::Node* a, const detail::Node* b) {
  if (a == b) return std::strong_ordering::equal;
  if (a->kind != b->kind) return kind_rank(a->kind) <=> kind_rank(b->kind);
  switch (a->kind) {
    case Kind::Const:
      return a->value <=> b->value;
    case Kind::X:
      return std::strong_ordering::equal;
    case Kind::Jet:
      return a->index <=> b->index;
    case Kind::Int:
      if (a->index != b->index) return a->index <=> b->index;
      break;
    case Kind::Pow: {
      auto c = compare_nodes(a->args[0].node(), b->args[0].node());
      if (c != 0) return c;
      return a->index <=> b->index;
    }
    default:
      break;
  }
  std::size_t n = std::min(a->args.size(), b->args.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = compare_nodes(a->args[i].node(), b->args[i].node());
    if (c != 0) return c;
  }
  return a->args.size() <=> b->args.size();
}

bool equal_nodes(const detail::Node* a, const detail::Node* b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->index != b->index || a->value != b->value ||
      a->args.size() != b->args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!equal_nodes(a->args[i].node(), b->args[i].node())) return false;
  }
  return true;
}

}  // namespace

Var Var::jet(int k) {
  if (k < 0 || k > kMaxJetIndex) throw std::out_of_range("jet index out of range: " + std::to_string(k));
  return Var(k);
}

std::string Var::name() const {
  return is_x() ? std::string("x") : "p" + std::to_string(id_);
}

int VarSet::max_jet() const {
  for (int k = kMaxJetIndex; k >= 0; --k) {
    if (bits_.test(static_cast<std::size_t>(k + 1))) return k;
  }
  return -1;
}

std::vector<Var> VarSet::to_vector() const {
  std::vector<Var> out;
  if (bits_.test(0)) out.push_back(Var::x());
  for (int k = 0; k <= kMaxJetIndex; ++k) {
    if (bits_.test(static_cast<std::size_t>(k + 1))) out.push_back(Var::jet(k));
  }
  return out;
}

namespace detail {

Expr make_node(Kind kind, std::vector<Expr> args, int index, Rational value, bool canonical) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->canonical = canonical;
  node->index = index;
  node->value = value;
  std::size_t h = mix(static_cast<std::size_t>(kind) * 0x100000001b3ULL, static_cast<std::size_t>(index));
  h = mix(h, std::hash<std::int64_t>{}(value.num()));
  h = mix(h, std::hash<std::int64_t>{}(value.den()));
  for (const auto& a : args) {
    h = mix(h, a.hash());
    node->vars |= a.free_vars();
  }
  if (kind == Kind::X) node->vars.insert(Var::x());
  if (kind == Kind::Jet) node->vars.insert(Var::jet(index));
  if (kind == Kind::Int) node->vars.insert(index < 0 ? Var::x() : Var::jet(index));
  node->hash = h;
  node->args = std::move(args);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

}  // namespace detail

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(const Rational& value) {
  if (value.is_zero()) {
    static const Expr zero = detail::make_node(Kind::Const, {}, 0, Rational(0), true);
    node_ = zero.node_;
    return;
  }
  node_ = detail::make_node(Kind::Const, {}, 0, value, true).node_;
}

Expr Expr::x() {
  static const Expr x = detail::make_node(Kind::X, {}, 0, Rational(0), true);
  return x;
}

Expr Expr::jet(int k) {
  Var::jet(k);  // range check
  return detail::make_node(Kind::Jet, {}, k, Rational(0), true);
}

Expr Expr::var(Var v) {
  return v.is_x() ? x() : jet(v.jet_index());
}

Expr Expr::sum(std::vector<Expr> terms) {
  return detail::make_node(Kind::Sum, std::move(terms), 0, Rational(0), false);
}

Expr Expr::product(std::vector<Expr> factors) {
  return detail::make_node(Kind::Prod, std::move(factors), 0, Rational(0), false);
}

Expr Expr::pow(Expr base, int exponent) {
  return detail::make_node(Kind::Pow, {std::move(base)}, exponent, Rational(0), false);
}

Expr Expr::exp(Expr arg) {
  return detail::make_node(Kind::Exp, {std::move(arg)}, 0, Rational(0), false);
}

Expr Expr::log(Expr arg) {
  return detail::make_node(Kind::Log, {std::move(arg)}, 0, Rational(0), false);
}

Expr Expr::sin(Expr arg) {
  return detail::make_node(Kind::Sin, {std::move(arg)}, 0, Rational(0), false);
}

Expr Expr::cos(Expr arg) {
  return detail::make_node(Kind::Cos, {std::move(arg)}, 0, Rational(0), false);
}

Expr Expr::antideriv_node(Expr integrand, Var v) {
  return detail::make_node(Kind::Int, {std::move(integrand)}, v.jet_index(), Rational(0), false);
}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
int Expr::jet_index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
std::span<const Expr> Expr::args() const { return node_->args; }
Var Expr::int_var() const { return node_->index < 0 ? Var::x() : Var::jet(node_->index); }
const VarSet& Expr::free_vars() const { return node_->vars; }
int Expr::max_jet() const { return node_->vars.max_jet(); }
bool Expr::is_zero() const { return node_->kind == Kind::Const && node_->value.is_zero(); }
bool Expr::is_one() const { return node_->kind == Kind::Const && node_->value.is_one(); }
bool Expr::is_canonical() const { return node_->canonical; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  return equal_nodes(a.node(), b.node());
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  return compare_nodes(a.node(), b.node());
}

}  // namespace varmult
