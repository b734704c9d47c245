#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fpp {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

// Parses "num/den", "num" or "-num/den". Throws Error(ParseError).
Rational parse_rational(std::string_view text);

// Always "num/den" in lowest terms, including integers ("2/1").
std::string to_string(const Rational& r);

// Decimal rendering with `digits` fractional digits, truncated toward zero.
std::string to_decimal(const Rational& r, int digits);

BigInt lcm(const BigInt& a, const BigInt& b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t to_int64(const BigInt& v);  // throws Overflow

// Largest ell >= 0 with ell^k <= v (exact integer root).
std::int64_t floor_root(std::int64_t v, int k);

// A non-negative exact passage time, or BLOCKED (semantically +infinity).
class Weight {
 public:
  Weight() = default;
  Weight(const Rational& value);  // NOLINT: implicit, throws on negative
  Weight(std::int64_t value) : Weight(Rational(value)) {}  // NOLINT

  static Weight blocked() {
    Weight w;
    w.blocked_ = true;
    return w;
  }

  bool is_blocked() const noexcept { return blocked_; }
  const Rational& value() const;  // throws ValidationError when blocked

  Weight& operator+=(const Weight& other);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }

  friend bool operator==(const Weight& a, const Weight& b);
  friend std::strong_ordering operator<=>(const Weight& a, const Weight& b);

 private:
  Rational value_{0};
  bool blocked_ = false;
};

Weight parse_weight(std::string_view text);  // accepts "BLOCKED"
std::string to_string(const Weight& w);

}  // namespace fpp
