#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace varmult {

namespace detail {
__extension__ typedef __int128 int128;
}

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always stored in lowest terms with a positive denominator. Arithmetic is
/// carried out in 128-bit intermediates; a result that does not fit back into
/// 64 bits throws std::overflow_error instead of silently wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }
  int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "a" for integers, "a/b" otherwise.
  std::string to_string() const;

  /// Parses "123", "-7", "3/4" or a decimal literal such as "0.125" (exactly).
  static Rational parse(std::string_view text);

  Rational operator-() const;
  Rational inverse() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  /// Integer power; negative exponents invert.
  Rational pow(int exponent) const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(detail::int128 num, detail::int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// n! as an exact rational; throws std::overflow_error past 20!.
Rational factorial(int n);

/// Binomial coefficient C(n, r); 0 when r < 0, n < 0 or r > n.
Rational binomial(int n, int r);

}  // namespace varmult
