#pragma once

// Closed intervals with exact rational endpoints.
//
// Used two ways: as isolating intervals for real roots, and as rigorous
// enclosures of real numbers. Arithmetic is exact on the endpoints; the
// only rounding happens in round_outward() and sqrt(), both of which
// move endpoints away from the enclosed set.

#include <melnikov/exactalg/rational.hpp>

#include <stdexcept>
#include <string>

namespace melnikov::exactalg {

class Interval {
 public:
  Interval() = default;
  Interval(const Rational& point) : lo_(point), hi_(point) {}  // NOLINT(google-explicit-constructor)
  Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
    if (hi < lo) throw std::invalid_argument("Interval: lo > hi");
  }

  [[nodiscard]] const Rational& lo() const { return lo_; }
  [[nodiscard]] const Rational& hi() const { return hi_; }
  [[nodiscard]] Rational width() const { return hi_ - lo_; }
  [[nodiscard]] Rational midpoint() const { return (lo_ + hi_) / Rational(2); }
  [[nodiscard]] bool is_point() const { return lo_ == hi_; }
  [[nodiscard]] bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  [[nodiscard]] bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  // +1 / -1 when the whole interval has that sign, 0 when it straddles or touches zero.
  [[nodiscard]] int certain_sign() const {
    if (lo_.sign() > 0) return 1;
    if (hi_.sign() < 0) return -1;
    return 0;
  }
  [[nodiscard]] bool overlaps(const Interval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }

  friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }
  friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }
  friend Interval operator-(const Interval& a) { return {-a.hi_, -a.lo_}; }
  friend Interval operator*(const Interval& a, const Interval& b) {
    if (a.is_point() && b.is_point()) return Interval(a.lo_ * b.lo_);
    Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("Interval: division by an interval containing zero");
    return a * Interval(Rational(1) / b.hi_, Rational(1) / b.lo_);
  }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

  [[nodiscard]] std::string str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

 private:
  Rational lo_, hi_;
};

// Largest dyadic with `bits` significant bits that is <= q (resp. smallest >= q).
inline Rational round_down(const Rational& q, long bits) {
  if (q.is_zero()) return q;
  const long shift = bits - magnitude_bits(q);
  return ldexp(Rational(floor(ldexp(q, shift))), -shift);
}

inline Rational round_up(const Rational& q, long bits) {
  if (q.is_zero()) return q;
  const long shift = bits - magnitude_bits(q);
  return ldexp(Rational(ceil(ldexp(q, shift))), -shift);
}

// Replaces endpoints with short dyadics, never shrinking the interval.
inline Interval round_outward(const Interval& iv, long bits) {
  if (iv.is_point() && iv.lo().den() == 1 && bit_length(iv.lo().num()) <= bits) return iv;
  return {round_down(iv.lo(), bits), round_up(iv.hi(), bits)};
}

namespace detail {

// floor(sqrt(q * 4^k)) and its ceiling counterpart.
inline Integer isqrt_floor(const Rational& q, long k) {
  Integer scaled = floor(ldexp(q, 2 * k));
  Integer r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  return r;
}

inline Integer isqrt_ceil(const Rational& q, long k) {
  Integer scaled = ceil(ldexp(q, 2 * k));
  Integer r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  if (r * r < scaled) ++r;
  return r;
}

}  // namespace detail

// Enclosure of {sqrt(x) : x in iv}, endpoints accurate to about `bits`
// significant bits. Requires iv.lo() >= 0.
inline Interval sqrt(const Interval& iv, long bits) {
  if (iv.lo().sign() < 0) throw std::domain_error("Interval sqrt of negative value");
  auto k_for = [&](const Rational& q) {
    long k = bits - magnitude_bits(q) / 2 + 2;
    return k < 0 ? 0L : k;
  };
  Rational lo, hi;
  if (!iv.lo().is_zero()) {
    const long k = k_for(iv.lo());
    lo = ldexp(Rational(detail::isqrt_floor(iv.lo(), k)), -k);
  }
  if (!iv.hi().is_zero()) {
    const long k = k_for(iv.hi());
    hi = ldexp(Rational(detail::isqrt_ceil(iv.hi(), k)), -k);
  }
  return {lo, hi};
}

inline Interval pow(const Interval& base, unsigned exponent) {
  Interval result(Rational(1));
  for (unsigned i = 0; i < exponent; ++i) result = result * base;
  if (exponent % 2 == 0 && base.contains_zero() && exponent > 0)
    return {Rational(0), result.hi()};
  return result;
}

// Tight enclosure of pi, accurate to about `bits` bits (Machin's formula in
// fixed point with a counted truncation error).
inline Interval pi_enclosure(long bits) {
  const long guard = 16;
  const unsigned prec = static_cast<unsigned>(bits + guard);
  const Integer one = pow2(prec);
  long terms = 0;
  // arctan(1/x) * 2^prec, each division truncated toward zero (error < 1 ulp).
  auto arctan_inv = [&](long x) {
    Integer sum = 0;
    Integer power = one / x;  // 2^prec / x^(2k+1)
    const long x2 = x * x;
    for (long k = 0; power != 0; ++k) {
      Integer term = power / (2 * k + 1);
      if (k % 2 == 0) sum += term; else sum -= term;
      power /= x2;
      terms += 2;
    }
    return sum;
  };
  Integer approx = 16 * arctan_inv(5) - 4 * arctan_inv(239);
  // Each truncated term is off by < 1 ulp, scaled by at most 16.
  Integer err = 16 * (terms + 2);
  return {Rational(approx - err, one), Rational(approx + err, one)};
}

}  // namespace melnikov::exactalg
