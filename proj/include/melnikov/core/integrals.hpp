#pragma once

// Closed forms for the period integrals over the circles
//
//   L_h : x = sqrt(h) sin t,  y = sqrt(h) cos t,  0 <= t <= 2 pi.
//
// Every closed form here is a rational multiple of pi; the polynomials
// returned store that rational part. Radical parts are written over
// r^(2m-1) with r = sqrt(1 - alpha^2 h).

#include <melnikov/core/family.hpp>
#include <melnikov/exactalg/polynomial.hpp>

#include <stdexcept>
#include <vector>

namespace melnikov::core {

using exactalg::binomial;
using exactalg::Integer;

// (numerator(h) / r^(2 order - 1)) * pi with r = sqrt(1 - alpha^2 h).
struct RadicalPart {
  Polynomial numerator;
  int order = 1;
  Rational alpha;
};

// Radical part plus a polynomial in h (also in units of pi).
struct PowerIntegral {
  RadicalPart radical;
  Polynomial poly;
};

namespace detail {

inline Integer double_factorial(int n) {
  Integer r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace detail

// Integral of x^i y^j dt over L_h, in units of pi.
inline Polynomial circle_moment(int i, int j) {
  if (i < 0 || j < 0) throw std::invalid_argument("circle_moment: negative exponent");
  if (i % 2 != 0 || j % 2 != 0) return {};
  // 2 pi (i-1)!! (j-1)!! / (i+j)!!
  Rational c(Integer(2) * detail::double_factorial(i - 1) * detail::double_factorial(j - 1),
             detail::double_factorial(i + j));
  return Polynomial::monomial(c, static_cast<std::size_t>((i + j) / 2));
}

// Polynomials c_m(rho) with
//   integral_0^{2pi} (1 - a sin t)^(-m) dt = 2 pi c_m(rho) / rho^(m - 1/2),  rho = 1 - a^2,
// from the integration-by-parts recurrence
//   m rho J_{m+1} = (2m - 1) J_m - (m - 1) J_{m-1}.
// Entry m-1 holds c_m; deg c_m = floor((m-1)/2).
inline std::vector<Polynomial> power_integral_constants(int max_m) {
  if (max_m < 1) throw std::invalid_argument("power_integral_constants: m must be >= 1");
  std::vector<Polynomial> c;
  c.push_back(Polynomial::constant(Rational(1)));
  if (max_m >= 2) c.push_back(Polynomial::constant(Rational(1)));
  const Polynomial rho_var = Polynomial::monomial(Rational(1), 1);
  for (int m = 2; m < max_m; ++m) {
    const auto& cm = c[static_cast<std::size_t>(m - 1)];
    const auto& cm1 = c[static_cast<std::size_t>(m - 2)];
    Polynomial next = cm.scaled(Rational(2 * m - 1)) - (rho_var * cm1).scaled(Rational(m - 1));
    c.push_back(next.scaled(Rational(1, m)));
  }
  return c;
}

// Closed form of the integral of dt / (1 - alpha x)^m over L_h.
inline RadicalPart i00_power_integral(int m, const Rational& alpha) {
  if (m < 1) throw std::invalid_argument("i00_power_integral: m must be >= 1");
  const Polynomial cm = power_integral_constants(m).back();
  return {cm.compose(rho(alpha)).scaled(Rational(2)), m, alpha};
}

// Closed form of the integral of x^k dt / (1 - alpha x)^m over L_h, via
// x = (1 - u) / alpha with u = 1 - alpha x:
//   x^k / u^m = alpha^(-k) sum_j C(k, j) (-1)^j u^(j - m).
// Terms with j < m are pole integrals; the rest are polynomial in x.
inline PowerIntegral ik0_power_integral(int k, int m, const Rational& alpha) {
  if (k < 0) throw std::invalid_argument("ik0_power_integral: k must be >= 0");
  if (m < 1) throw std::invalid_argument("ik0_power_integral: m must be >= 1");
  const std::vector<Polynomial> c = power_integral_constants(m);
  const Polynomial rh = rho(alpha);
  PowerIntegral out;
  out.radical.order = m;
  out.radical.alpha = alpha;
  const Rational scale = Rational(1) / exactalg::pow(alpha, static_cast<unsigned>(k));
  for (int j = 0; j <= k; ++j) {
    Rational w = scale * Rational(binomial(static_cast<unsigned>(k), static_cast<unsigned>(j)));
    if (j % 2 == 1) w = -w;
    if (j < m) {
      // J_{m-j} = 2 pi c_{m-j}(rho) / r^(2(m-j)-1) = 2 pi c_{m-j}(rho) rho^j / r^(2m-1)
      Polynomial num = c[static_cast<std::size_t>(m - j - 1)].compose(rh) *
                       pow(rh, static_cast<unsigned>(j));
      out.radical.numerator += num.scaled(Rational(2) * w);
    } else {
      const int e = j - m;
      for (int l = 0; l <= e; ++l) {
        Rational t = w * Rational(binomial(static_cast<unsigned>(e), static_cast<unsigned>(l))) *
                     exactalg::pow(-alpha, static_cast<unsigned>(l));
        out.poly += circle_moment(l, 0).scaled(t);
      }
    }
  }
  return out;
}

// x^k / D(x) = sum_j A_j / (1 - a1 x)^j + sum_j B_j / (1 - a2 x)^j + C(x)
// with j running over 1..m1 and 1..m2; C is the polynomial quotient and is
// nonzero only when k >= m1 + m2. tilde_a[j-1] holds A_j.
struct PartialFractionRow {
  int k = 0;
  std::vector<Rational> tilde_a;
  std::vector<Rational> tilde_b;
  Polynomial tail;
};

namespace detail {

// Coefficients of 1/(1 - a x)^j, j = 1..m, in the pole expansion of
// x^k / ((1 - a x)^m (1 - b x)^mb) at x = 1/a. Writes u = 1 - a x and
// expands g(u) = x^k / (1 - b x)^mb to order m - 1; A_{m-i} = g_i.
inline std::vector<Rational> pole_coefficients(int k, const Rational& a, int m, const Rational& b, int mb) {
  const Rational beta = (a - b) / a;  // 1 - b x = beta + gamma u
  const Rational gamma = b / a;
  std::vector<Rational> inv_series(static_cast<std::size_t>(m));
  const Rational beta_pow = Rational(1) / exactalg::pow(beta, static_cast<unsigned>(mb));
  const Rational ratio = -gamma / beta;
  for (int i = 0; i < m; ++i) {
    inv_series[static_cast<std::size_t>(i)] =
        beta_pow * Rational(binomial(static_cast<unsigned>(mb + i - 1), static_cast<unsigned>(i))) *
        exactalg::pow(ratio, static_cast<unsigned>(i));
  }
  const Rational xscale = Rational(1) / exactalg::pow(a, static_cast<unsigned>(k));
  std::vector<Rational> g(static_cast<std::size_t>(m));
  for (int l = 0; l < m && l <= k; ++l) {
    Rational xl = xscale * Rational(binomial(static_cast<unsigned>(k), static_cast<unsigned>(l)));
    if (l % 2 == 1) xl = -xl;
    for (int i = 0; l + i < m; ++i) g[static_cast<std::size_t>(l + i)] += xl * inv_series[static_cast<std::size_t>(i)];
  }
  std::vector<Rational> coeffs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) coeffs[static_cast<std::size_t>(m - 1 - i)] = g[static_cast<std::size_t>(i)];
  return coeffs;
}

}  // namespace detail

inline PartialFractionRow partial_fractions(int k, const SystemFamily& family) {
  if (k < 0) throw std::invalid_argument("partial_fractions: k must be >= 0");
  if (family.confluent())
    throw std::invalid_argument("partial_fractions: alpha1 == alpha2, use the single-factor expansion");
  PartialFractionRow row;
  row.k = k;
  row.tilde_a = detail::pole_coefficients(k, family.alpha1(), family.m1(), family.alpha2(), family.m2());
  row.tilde_b = detail::pole_coefficients(k, family.alpha2(), family.m2(), family.alpha1(), family.m1());
  row.tail = Polynomial::monomial(Rational(1), static_cast<std::size_t>(k)) / family.denominator();
  return row;
}

// Numerator of the row written over D(x); equals x^k exactly when the
// decomposition is right.
inline Polynomial reconstruct_numerator(const PartialFractionRow& row, const SystemFamily& family) {
  const Polynomial u1({Rational(1), -family.alpha1()});
  const Polynomial u2({Rational(1), -family.alpha2()});
  const int m1 = family.m1(), m2 = family.m2();
  Polynomial total = row.tail * family.denominator();
  for (int j = 1; j <= m1; ++j) {
    total += (pow(u1, static_cast<unsigned>(m1 - j)) * pow(u2, static_cast<unsigned>(m2)))
                 .scaled(row.tilde_a[static_cast<std::size_t>(j - 1)]);
  }
  for (int j = 1; j <= m2; ++j) {
    total += (pow(u2, static_cast<unsigned>(m2 - j)) * pow(u1, static_cast<unsigned>(m1)))
                 .scaled(row.tilde_b[static_cast<std::size_t>(j - 1)]);
  }
  return total;
}

}  // namespace melnikov::core
