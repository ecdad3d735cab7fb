#pragma once

// Rigorous enclosures of the Melnikov function.
//
// Both normal forms are rewritten as a short sum of terms
//   N(h) / rho(h)^e * (1 / sqrt(rho(h)))^s,   s in {0, 1},
// so a point evaluation is exact except for one square root per radical.
// Interval evaluation over [a, b] uses Horner's scheme in interval
// arithmetic with dyadic outward rounding.

#include <melnikov/core/normal_form.hpp>
#include <melnikov/exactalg/interval.hpp>

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace melnikov::core {

using exactalg::Interval;

struct RadicalTerm {
  Polynomial numerator;  // in h
  Polynomial rho;        // in h, positive on [0, H0)
  int rho_power = 0;     // e
  bool inverse_sqrt = false;
};

// Phi / pi as a sum of radical terms; h0 is the end of the annulus.
struct RadicalSum {
  std::vector<RadicalTerm> terms;
  Rational h0;
};

inline RadicalSum to_radical_sum(const MelnikovNormalForm& nf) {
  RadicalSum s;
  s.h0 = nf.family.h0();
  if (!nf.P.is_zero()) s.terms.push_back({nf.P, rho(nf.family.alpha1()), nf.p_order - 1, true});
  if (!nf.Q.is_zero()) s.terms.push_back({nf.Q, rho(nf.family.alpha2()), nf.q_order - 1, true});
  if (!nf.R.is_zero()) s.terms.push_back({nf.R, Polynomial::constant(Rational(1)), 0, false});
  return s;
}

// Pr(r) = E(r^2) + r O(r^2) gives
//   Pr(r) / r^(2m-1) = E(rho) / (rho^(m-1) r) + O(rho) / rho^(m-1).
inline RadicalSum to_radical_sum(const ConfluentNormalForm& nf) {
  RadicalSum s;
  s.h0 = nf.h0();
  std::vector<Rational> even, odd;
  const auto c = nf.Pr.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) (k % 2 == 0 ? even : odd).push_back(c[k]);
  const Polynomial rh = rho(nf.alpha);
  const Polynomial e = Polynomial(even).compose(rh);
  const Polynomial o = Polynomial(odd).compose(rh);
  if (!e.is_zero()) s.terms.push_back({e, rh, nf.m - 1, true});
  if (!o.is_zero()) s.terms.push_back({o, rh, nf.m - 1, false});
  return s;
}

namespace detail {

inline Interval eval_poly(const Polynomial& p, const Interval& x, long bits) {
  if (x.is_point()) return Interval(p(x.lo()));
  Interval acc(Rational(0));
  const auto c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = exactalg::round_outward(acc * x + Interval(*it), bits);
  return acc;
}

}  // namespace detail

// Enclosure of Phi(h)/pi for h in `hs` with endpoints carrying ~`bits` bits.
inline Interval enclose(const RadicalSum& sum, const Interval& hs, long bits) {
  Interval total(Rational(0));
  for (const auto& t : sum.terms) {
    const Interval num = detail::eval_poly(t.numerator, hs, bits);
    const Interval rh = detail::eval_poly(t.rho, hs, bits);
    if (rh.lo().sign() <= 0) throw std::domain_error("radical argument is not positive on the interval");
    Interval term = num / exactalg::pow(rh, static_cast<unsigned>(t.rho_power));
    if (t.inverse_sqrt) term = term * exactalg::sqrt(Interval(Rational(1)) / rh, bits);
    total = total + (hs.is_point() && !t.inverse_sqrt ? term : exactalg::round_outward(term, bits));
  }
  return total;
}

// Rigorous enclosure of Phi(h) (pi included) of width <= 10^-digits.
template <typename NormalForm>
Interval evaluate_normal_form(const NormalForm& nf, const Rational& h, int digits) {
  if (digits < 1) throw std::invalid_argument("evaluate_normal_form: precision must be positive");
  const RadicalSum sum = to_radical_sum(nf);
  if (h.sign() < 0 || h >= sum.h0) throw std::domain_error("evaluate_normal_form: h outside [0, H0)");
  if (sum.terms.empty()) return Interval(Rational(0));
  const Rational target(Integer(1), exactalg::pow10(static_cast<unsigned>(digits)));
  long bits = static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 32;
  for (;;) {
    const Interval v = enclose(sum, Interval(h), bits) * exactalg::pi_enclosure(bits);
    if (v.width() <= target) return v;
    bits *= 2;
  }
}

// Sign of Phi at a rational h: +1 / -1 when certified, 0 when the enclosure
// still contains zero at `max_bits` (Phi(h) may vanish exactly).
inline int certified_sign(const RadicalSum& sum, const Rational& h, long max_bits = 4096) {
  if (sum.terms.empty()) return 0;
  for (long bits = 64; bits <= max_bits; bits *= 2) {
    const int s = enclose(sum, Interval(h), bits).certain_sign();
    if (s != 0) return s;
  }
  return 0;
}

}  // namespace melnikov::core
