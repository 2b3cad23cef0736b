#include "varmult/rational.hpp"

#include <limits>
#include <stdexcept>

namespace varmult {

namespace {

using wide = detail::int128;

wide wide_gcd(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(wide num, wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  wide num = 0;
  wide den = 1;
  bool seen_digit = false;
  bool in_fraction = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (in_fraction) den *= 10;
      seen_digit = true;
      if (!fits(num) || !fits(den)) throw std::overflow_error("literal too large: " + std::string(text));
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else if (c == '/' && !in_fraction) {
      if (!seen_digit) break;
      Rational denominator = parse(text.substr(pos + 1));
      if (denominator.is_negative()) throw std::invalid_argument("bad rational literal: " + std::string(text));
      Rational head = from_wide(negative ? -num : num, 1);
      return head / denominator;
    } else {
      throw std::invalid_argument("bad rational literal: " + std::string(text));
    }
  }
  if (!seen_digit) throw std::invalid_argument("bad rational literal: " + std::string(text));
  return from_wide(negative ? -num : num, den);
}

Rational Rational::operator-() const {
  return from_wide(-static_cast<wide>(num_), den_);
}

Rational Rational::inverse() const {
  if (num_ == 0) throw std::domain_error("division by zero");
  return from_wide(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == 1 && b.den_ == 1) return Rational::from_wide(static_cast<wide>(a.num_) + b.num_, 1);
  return Rational::from_wide(static_cast<wide>(a.num_) * b.den_ + static_cast<wide>(b.num_) * a.den_,
                             static_cast<wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return a + (-b);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<wide>(a.num_) * b.num_, static_cast<wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero");
  return Rational::from_wide(static_cast<wide>(a.num_) * b.den_, static_cast<wide>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  wide lhs = static_cast<wide>(a.num_) * b.den_;
  wide rhs = static_cast<wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(int exponent) const {
  Rational base = exponent < 0 ? inverse() : *this;
  unsigned e = exponent < 0 ? static_cast<unsigned>(-exponent) : static_cast<unsigned>(exponent);
  Rational result(1);
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

Rational factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

Rational binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return Rational(0);
  Rational out(1);
  for (int i = 1; i <= r; ++i) out = out * Rational(n - r + i) / Rational(i);
  return out;
}

}  // namespace varmult
