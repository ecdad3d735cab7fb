#pragma once

// Reference computations that share no code with the library: adaptive
// Gauss-Kronrod quadrature in long double and brute-force sign scans.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using Coeffs = std::map<std::pair<int, int>, long double>;

struct Instance {
  long double alpha1, alpha2;
  int m1, m2;
  Coeffs a, b;
};

inline long double integrate_period(auto&& f) {
  using boost::math::quadrature::gauss_kronrod;
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  // Split the period so each piece is resolved independently.
  long double total = 0;
  for (int k = 0; k < 8; ++k)
    total += gauss_kronrod<long double, 61>::integrate(f, two_pi * k / 8, two_pi * (k + 1) / 8, 20, 1e-17L);
  return total;
}

// Closed-orbit integral of (x f + y g) / D over x = sqrt(h) sin t, y = sqrt(h) cos t.
inline long double melnikov(const Instance& inst, long double h) {
  const long double s = std::sqrt(h);
  return integrate_period([&](long double t) {
    const long double x = s * std::sin(t), y = s * std::cos(t);
    long double f = 0, g = 0;
    for (const auto& [ij, v] : inst.a) f += v * std::pow(x, ij.first) * std::pow(y, ij.second);
    for (const auto& [ij, v] : inst.b) g += v * std::pow(x, ij.first) * std::pow(y, ij.second);
    const long double d = std::pow(1 - inst.alpha1 * x, inst.m1) * std::pow(1 - inst.alpha2 * x, inst.m2);
    return (x * f + y * g) / d;
  });
}

// Integral over one period of (1 - a sin t)^(-m), |a| < 1.
inline long double pole_integral(int m, long double a) {
  return integrate_period([&](long double t) { return std::pow(1 - a * std::sin(t), -m); });
}

// Integral over one period of x^k y^j / (1 - alpha x)^m on the circle of label h.
inline long double moment(int k, int j, int m, long double alpha, long double h) {
  const long double s = std::sqrt(h);
  return integrate_period([&](long double t) {
    const long double x = s * std::sin(t), y = s * std::cos(t);
    return std::pow(x, k) * std::pow(y, j) / std::pow(1 - alpha * x, m);
  });
}

// Number of roots of a function with only simple roots, sampled at the given
// points: exact zeros at sample points plus sign changes not across a zero.
template <typename SignAt, typename Points>
int scan_sign_changes(SignAt&& sign_at, const Points& points) {
  int count = 0, prev = 0;
  bool zero_since_prev = false;
  for (const auto& x : points) {
    const int s = sign_at(x);
    if (s == 0) {
      ++count;
      zero_since_prev = true;
      continue;
    }
    if (prev != 0 && s != prev && !zero_since_prev) ++count;
    prev = s;
    zero_since_prev = false;
  }
  return count;
}


// Sign of p just right of x (right = true) or just left of x.
template <typename Poly, typename Num>
int one_sided_sign(Poly p, const Num& x, bool right) {
  for (int k = 0; !p.is_zero(); ++k, p = p.derivative()) {
    const int s = p.sign_at(x);
    if (s != 0) return right || k % 2 == 0 ? s : -s;
  }
  return 0;
}

// Distinct roots of a squarefree polynomial in the open interval (a, b) by a
// uniform grid scan. Endpoint signs are one-sided limits. A cell without a
// sign change still holds two roots when p' changes sign once inside it and
// p at that extremum has the opposite sign; the extremum is located by
// bisection on p'.
template <typename Poly, typename Num>
int grid_root_count(const Poly& p, const Num& a, const Num& b, int cells, int bisections = 200) {
  const Poly dp = p.derivative();
  std::vector<Num> x;
  for (int k = 0; k <= cells; ++k) x.push_back(a + (b - a) * Num(k, cells));
  auto sign_at = [&](int k) {
    if (k == 0) return one_sided_sign(p, a, true);
    if (k == cells) return one_sided_sign(p, b, false);
    return p.sign_at(x[k]);
  };
  int count = 0;
  for (int k = 1; k < cells; ++k)
    if (p.sign_at(x[k]) == 0) ++count;
  for (int k = 0; k < cells; ++k) {
    int s0 = sign_at(k), s1 = sign_at(k + 1);
    if (s0 == 0 || s1 == 0) continue;
    if (s0 != s1) {
      ++count;
      continue;
    }
    int d0 = k == 0 ? one_sided_sign(dp, a, true) : one_sided_sign(dp, x[k], true);
    int d1 = k + 1 == cells ? one_sided_sign(dp, b, false) : one_sided_sign(dp, x[k + 1], false);
    if (d0 == d1 || d0 == 0 || d1 == 0) continue;
    Num lo = x[k], hi = x[k + 1];
    for (int it = 0; it < bisections; ++it) {
      const Num mid = (lo + hi) / Num(2);
      const int s = dp.sign_at(mid);
      if (s == 0) {
        lo = hi = mid;
        break;
      }
      (s == d0 ? lo : hi) = mid;
    }
    // The extremum lies in [lo, hi]; p is monotone on each side of it.
    if (p.sign_at(lo) != s0 || p.sign_at(hi) != s0) count += 2;
  }
  return count;
}

}  // namespace oracle
