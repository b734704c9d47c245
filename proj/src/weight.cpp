#include "fpp/weight.hpp"

#include <charconv>
#include <limits>

#include "fpp/error.hpp"

namespace fpp {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty integer in '" + std::string(whole) + "'");
  std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (start == text.size()) throw Error(ErrorKind::ParseError, "bad integer in '" + std::string(whole) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw Error(ErrorKind::ParseError, "bad rational '" + std::string(whole) + "'");
    }
  }
  BigInt v(std::string(text.substr(start)));
  return text.front() == '-' ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  BigInt num = parse_integer(text.substr(0, slash), text);
  BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::string to_decimal(const Rational& r, int digits) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = num * scale / den;
  std::string body = (scaled / scale).str();
  if (digits > 0) {
    std::string frac = (scaled % scale).str();
    body += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return (negative && scaled != 0 ? "-" : "") + body;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "int64 multiplication");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "int64 addition");
  return out;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::Overflow, "value " + v.str() + " exceeds int64");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t floor_root(std::int64_t v, int k) {
  if (v < 0 || k < 1) throw Error(ErrorKind::ValidationError, "floor_root domain");
  auto pow_le = [&](std::int64_t base) {
    BigInt p = 1;
    for (int i = 0; i < k; ++i) p *= base;
    return p <= v;
  };
  std::int64_t lo = 0, hi = 1;
  while (pow_le(hi)) hi *= 2;
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (pow_le(mid) ? lo : hi) = mid;
  }
  return lo;
}

Weight::Weight(const Rational& value) : value_(value) {
  if (value < 0) throw Error(ErrorKind::ValidationError, "negative weight " + to_string(value));
}

const Rational& Weight::value() const {
  if (blocked_) throw Error(ErrorKind::ValidationError, "value() of BLOCKED weight");
  return value_;
}

Weight& Weight::operator+=(const Weight& other) {
  if (blocked_ || other.blocked_) {
    blocked_ = true;
    value_ = 0;
  } else {
    value_ += other.value_;
  }
  return *this;
}

bool operator==(const Weight& a, const Weight& b) {
  if (a.blocked_ || b.blocked_) return a.blocked_ == b.blocked_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
  if (a.blocked_ || b.blocked_) {
    if (a.blocked_ == b.blocked_) return std::strong_ordering::equal;
    return a.blocked_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Weight parse_weight(std::string_view text) {
  if (text == "BLOCKED") return Weight::blocked();
  Rational r = parse_rational(text);
  if (r < 0) throw Error(ErrorKind::ParseError, "negative weight '" + std::string(text) + "'");
  return Weight(r);
}

std::string to_string(const Weight& w) { return w.is_blocked() ? "BLOCKED" : to_string(w.value()); }

}  // namespace fpp
