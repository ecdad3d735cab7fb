#pragma once

// Exact radical normal forms of the Melnikov function.
//
// Generic case (alpha1 != alpha2):
//   Phi(h) = pi * [ P(h) / r1^(2 p_order - 1) + Q(h) / r2^(2 q_order - 1) + R(h) ],
//   r_i = sqrt(1 - alpha_i^2 h).
// Orders start as (m1, m2). When alpha2 = -alpha1 the radicals coincide and
// merge_radicals() folds Q into P over the common order max(m1, m2).
//
// Confluent case (alpha1 == alpha2 = alpha, m = m1 + m2):
//   Phi(h) = pi * Pr(r) / r^(2m - 1),   r = sqrt(1 - alpha^2 h), 0 < r < 1.

#include <melnikov/core/family.hpp>
#include <melnikov/core/integrals.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace melnikov::core {

struct MelnikovNormalForm {
  Polynomial P, Q, R;
  SystemFamily family;
  bool merged = false;
  int p_order = 1;
  int q_order = 1;
  // Perturbation degree n when the form came from a full assembly.
  std::optional<int> degree;

  explicit MelnikovNormalForm(SystemFamily fam)
      : family(std::move(fam)), p_order(family.m1()), q_order(family.m2()) {}

  [[nodiscard]] bool is_zero() const { return P.is_zero() && Q.is_zero() && R.is_zero(); }

  // Phi(0) / pi; the radicals equal 1 at h = 0.
  [[nodiscard]] Rational value_at_zero() const { return P.coeff(0) + Q.coeff(0) + R.coeff(0); }

  MelnikovNormalForm& operator+=(const MelnikovNormalForm& o) {
    require_compatible(o);
    P += o.P;
    Q += o.Q;
    R += o.R;
    return *this;
  }

  [[nodiscard]] MelnikovNormalForm scaled(const Rational& c) const {
    MelnikovNormalForm out = *this;
    out.P = P.scaled(c);
    out.Q = Q.scaled(c);
    out.R = R.scaled(c);
    return out;
  }

  // Multiply by a polynomial in h.
  [[nodiscard]] MelnikovNormalForm times(const Polynomial& f) const {
    MelnikovNormalForm out = *this;
    out.P = P * f;
    out.Q = Q * f;
    out.R = R * f;
    return out;
  }

  // With alpha2 = -alpha1 both radicals are sqrt(1 - alpha1^2 h): rewrite
  // everything over r^(2M - 1), M = max(m1, m2).
  void merge_radicals() {
    if (merged) return;
    if (!family.mirrored()) throw std::logic_error("merge_radicals: radicals are distinct");
    const int M = std::max(p_order, q_order);
    const Polynomial rh = rho(family.alpha1());
    P = P * pow(rh, static_cast<unsigned>(M - p_order)) + Q * pow(rh, static_cast<unsigned>(M - q_order));
    Q = Polynomial();
    p_order = M;
    q_order = M;
    merged = true;
  }

  friend bool operator==(const MelnikovNormalForm& a, const MelnikovNormalForm& b) {
    return a.family == b.family && a.merged == b.merged && a.p_order == b.p_order && a.q_order == b.q_order &&
           a.P == b.P && a.Q == b.Q && a.R == b.R;
  }

 private:
  void require_compatible(const MelnikovNormalForm& o) const {
    if (!(family == o.family) || merged != o.merged || p_order != o.p_order || q_order != o.q_order)
      throw std::invalid_argument("MelnikovNormalForm: incompatible forms");
  }
};

struct ConfluentNormalForm {
  Polynomial Pr;  // in r
  int m = 1;      // m1 + m2
  Rational alpha;
  std::optional<int> degree;

  [[nodiscard]] bool is_zero() const { return Pr.is_zero(); }
  [[nodiscard]] Rational h0() const { return Rational(1) / (alpha * alpha); }

  friend bool operator==(const ConfluentNormalForm& a, const ConfluentNormalForm& b) {
    return a.Pr == b.Pr && a.m == b.m && a.alpha == b.alpha;
  }
};

}  // namespace melnikov::core
