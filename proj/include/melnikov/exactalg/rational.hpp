#pragma once

// Exact rational scalars on top of GMP.
//
// Rational always holds a canonical value (lowest terms, positive
// denominator, zero is 0/1). Operators return fresh values so no GMP
// expression templates leak into calling code.

#include <gmpxx.h>

#include <cstdint>
#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace melnikov::exactalg {

using Integer = mpz_class;

class Rational {
 public:
  Rational() = default;
  Rational(int v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : value_(Integer(std::to_string(v))) {}  // NOLINT
  Rational(const Integer& v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
  explicit Rational(const mpq_class& v) : value_(v) { value_.canonicalize(); }

  // Accepts "p", "p/q", and decimal/scientific forms such as "-1.25e-3".
  // Decimal input is converted exactly (0.1 is 1/10).
  static Rational parse(std::string_view text);

  [[nodiscard]] const mpq_class& raw() const { return value_; }
  [[nodiscard]] Integer num() const { return value_.get_num(); }
  [[nodiscard]] Integer den() const { return value_.get_den(); }

  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] Rational abs() const { return Rational(mpq_class(::abs(value_))); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }

  // "p/q" or "p".
  [[nodiscard]] std::string str() const { return value_.get_str(); }
  // Scientific notation with the given number of significant digits,
  // rounded to nearest.
  [[nodiscard]] std::string to_decimal(int digits) const;
  // Plain positional decimal when the expansion terminates, else "p/q".
  [[nodiscard]] std::string to_exact_string() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

 private:
  mpq_class value_{0};
};

inline Rational pow(const Rational& base, unsigned exponent) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), exponent);
  return {n, d};
}

inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return r;
}

inline Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer pow2(unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline Integer pow10(unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// Number of bits in |v|; zero for v == 0.
inline long bit_length(const Integer& v) {
  return v == 0 ? 0 : static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

// floor(log2 |q|) up to one unit; used only to size precision targets.
inline long magnitude_bits(const Rational& q) {
  return bit_length(q.num()) - bit_length(q.den());
}

// Multiply by 2^e for signed e.
inline Rational ldexp(const Rational& q, long e) {
  if (e >= 0) return q * Rational(pow2(static_cast<unsigned>(e)));
  return q / Rational(pow2(static_cast<unsigned>(-e)));
}

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("cannot parse rational '" + std::string(text) + "'");
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  if (s.empty()) return fail();

  auto parse_int = [&](std::string_view digits) -> Integer {
    std::string_view body = digits;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
    if (body.empty()) fail();
    for (char c : body)
      if (c < '0' || c > '9') fail();
    std::string buf(digits);
    if (buf.front() == '+') buf.erase(0, 1);
    return Integer(buf, 10);
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer n = parse_int(trim(s.substr(0, slash)));
    Integer d = parse_int(trim(s.substr(slash + 1)));
    if (d == 0) fail();
    return {n, d};
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Integer ex = parse_int(s.substr(e + 1));
    if (!ex.fits_slong_p()) fail();
    exponent = ex.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_point) fail();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      fail();
    }
  }
  if (digits.empty()) fail();
  Rational value{Integer(digits, 10)};
  long shift = exponent - frac_digits;
  if (shift > 0) value *= Rational(pow10(static_cast<unsigned>(shift)));
  if (shift < 0) value /= Rational(pow10(static_cast<unsigned>(-shift)));
  return negative ? -value : value;
}

inline std::string Rational::to_decimal(int digits) const {
  if (digits < 1) digits = 1;
  if (is_zero()) {
    std::string out = "0";
    if (digits > 1) out += "." + std::string(static_cast<std::size_t>(digits - 1), '0');
    return out + "e+00";
  }
  Rational a = abs();
  // Decimal exponent: 10^e <= a < 10^(e+1).
  long e = static_cast<long>(static_cast<double>(magnitude_bits(a)) * 0.30102999566398120);
  auto scaled = [&](long ex) {
    return ex >= 0 ? a / Rational(pow10(static_cast<unsigned>(ex)))
                   : a * Rational(pow10(static_cast<unsigned>(-ex)));
  };
  while (scaled(e) >= Rational(10)) ++e;
  while (scaled(e) < Rational(1)) --e;
  // Round a * 10^(digits-1-e) to nearest integer.
  Rational m = scaled(e - (digits - 1));
  Integer mant = floor(m + Rational(1, 2));
  if (mant >= pow10(static_cast<unsigned>(digits))) {
    ++e;
    mant = floor(scaled(e - (digits - 1)) + Rational(1, 2));
  }
  std::string ds = mant.get_str();
  std::string out = sign() < 0 ? "-" : "";
  out += ds.substr(0, 1);
  if (ds.size() > 1) out += "." + ds.substr(1);
  char buf[32];
  std::snprintf(buf, sizeof buf, "e%c%02ld", e < 0 ? '-' : '+', e < 0 ? -e : e);
  return out + buf;
}

inline std::string Rational::to_exact_string() const {
  Integer d = den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) { d /= 2; ++twos; }
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) { d /= 5; ++fives; }
  if (d != 1 || is_integer()) return str();
  const unsigned places = std::max(twos, fives);
  const Integer scaled = abs().num() * pow10(places) / abs().den();
  std::string ds = scaled.get_str();
  if (ds.size() <= places) ds.insert(0, places + 1 - ds.size(), '0');
  ds.insert(ds.size() - places, ".");
  return (sign() < 0 ? "-" : "") + ds;
}

inline std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace melnikov::exactalg
