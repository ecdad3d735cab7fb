#pragma once

// Exact assembly of the Melnikov function
//
//   Phi(h) = sum_{0 <= i+j <= n} ( a_ij I_{i+1,j} + b_ij I_{i,j+1} ),
//   I_{i,j} = integral over L_h of x^i y^j / D(x) dt,
//
// using y^2 = h - x^2 on L_h to reduce every I_{i,2k} to the pure moments
// I_{p,0}, which are then split by partial fractions into pole integrals
// and circle moments. Odd powers of y integrate to zero.

#include <melnikov/core/family.hpp>
#include <melnikov/core/integrals.hpp>
#include <melnikov/core/normal_form.hpp>

#include <map>
#include <variant>
#include <stdexcept>
#include <vector>

namespace melnikov::core {

// Memoized I_{p,0} for one generic family.
class MomentTable {
 public:
  explicit MomentTable(SystemFamily family) : family_(std::move(family)) {
    if (family_.confluent()) throw std::invalid_argument("MomentTable: confluent family");
    const int top = std::max(family_.m1(), family_.m2());
    const auto c = power_integral_constants(top);
    const Polynomial r1 = rho(family_.alpha1()), r2 = rho(family_.alpha2());
    // Pole integral of order j rewritten over r_i^(2 m_i - 1).
    for (int j = 1; j <= family_.m1(); ++j)
      pole1_.push_back((c[static_cast<std::size_t>(j - 1)].compose(r1) *
                        pow(r1, static_cast<unsigned>(family_.m1() - j)))
                           .scaled(Rational(2)));
    for (int j = 1; j <= family_.m2(); ++j)
      pole2_.push_back((c[static_cast<std::size_t>(j - 1)].compose(r2) *
                        pow(r2, static_cast<unsigned>(family_.m2() - j)))
                           .scaled(Rational(2)));
  }

  [[nodiscard]] const SystemFamily& family() const { return family_; }

  // I_{p,0} in normal form (before any radical merging).
  const MelnikovNormalForm& pure(int p) {
    if (auto it = cache_.find(p); it != cache_.end()) return it->second;
    const PartialFractionRow row = partial_fractions(p, family_);
    MelnikovNormalForm nf(family_);
    for (std::size_t j = 0; j < row.tilde_a.size(); ++j) nf.P += pole1_[j].scaled(row.tilde_a[j]);
    for (std::size_t j = 0; j < row.tilde_b.size(); ++j) nf.Q += pole2_[j].scaled(row.tilde_b[j]);
    const auto tail = row.tail.coeffs();
    for (std::size_t l = 0; l < tail.size(); ++l) nf.R += circle_moment(static_cast<int>(l), 0).scaled(tail[l]);
    return cache_.emplace(p, std::move(nf)).first->second;
  }

  // I_{i,j}: zero for odd j, otherwise
  //   I_{i,2k} = sum_l (-1)^l C(k, l) h^(k-l) I_{i+2l,0}.
  MelnikovNormalForm mixed(int i, int j) {
    MelnikovNormalForm out(family_);
    if (j % 2 != 0) return out;
    const int k = j / 2;
    for (int l = 0; l <= k; ++l) {
      Rational w(binomial(static_cast<unsigned>(k), static_cast<unsigned>(l)));
      if (l % 2 == 1) w = -w;
      out += pure(i + 2 * l).times(Polynomial::monomial(w, static_cast<std::size_t>(k - l)));
    }
    return out;
  }

 private:
  SystemFamily family_;
  std::vector<Polynomial> pole1_, pole2_;
  std::map<int, MelnikovNormalForm> cache_;
};

// Normal form of I_{i,j} for a generic family.
inline MelnikovNormalForm monomial_melnikov(int i, int j, const SystemFamily& family) {
  if (i < 0 || j < 0) throw std::invalid_argument("monomial_melnikov: negative exponent");
  MomentTable table(family);
  MelnikovNormalForm nf = table.mixed(i, j);
  if (family.mirrored()) nf.merge_radicals();
  return nf;
}

inline MelnikovNormalForm assemble_melnikov(const SystemFamily& family, const PerturbCoeffs& coeffs) {
  if (family.confluent())
    throw std::invalid_argument("assemble_melnikov: alpha1 == alpha2, use assemble_confluent");
  MomentTable table(family);
  MelnikovNormalForm phi(family);
  for (const auto& [key, a] : coeffs.a_entries()) phi += table.mixed(key.first + 1, key.second).scaled(a);
  for (const auto& [key, b] : coeffs.b_entries()) phi += table.mixed(key.first, key.second + 1).scaled(b);
  if (family.mirrored()) phi.merge_radicals();
  phi.degree = coeffs.n();
  return phi;
}

namespace detail {

// Single-factor analogue of MomentTable::mixed: integral of
// x^i y^(2k) / (1 - alpha x)^m over L_h.
inline PowerIntegral confluent_mixed(int i, int j, int m, const Rational& alpha) {
  PowerIntegral out;
  out.radical.order = m;
  out.radical.alpha = alpha;
  if (j % 2 != 0) return out;
  const int k = j / 2;
  for (int l = 0; l <= k; ++l) {
    Rational w(binomial(static_cast<unsigned>(k), static_cast<unsigned>(l)));
    if (l % 2 == 1) w = -w;
    const Polynomial hk = Polynomial::monomial(w, static_cast<std::size_t>(k - l));
    const PowerIntegral term = ik0_power_integral(i + 2 * l, m, alpha);
    out.radical.numerator += term.radical.numerator * hk;
    out.poly += term.poly * hk;
  }
  return out;
}

}  // namespace detail

// Phi = pi * Pr(r) / r^(2m-1): substitute h = (1 - r^2) / alpha^2 into the
// radical numerator N(h) and the polynomial part R(h):
//   Pr(r) = N(h(r)) + r^(2m-1) R(h(r)).
inline ConfluentNormalForm assemble_confluent(const SystemFamily& family, const PerturbCoeffs& coeffs) {
  if (!family.confluent())
    throw std::invalid_argument("assemble_confluent: requires alpha1 == alpha2");
  const int m = family.m1() + family.m2();
  const Rational& alpha = family.alpha1();
  Polynomial numerator, poly;
  auto add = [&](int i, int j, const Rational& c) {
    const PowerIntegral t = detail::confluent_mixed(i, j, m, alpha);
    numerator += t.radical.numerator.scaled(c);
    poly += t.poly.scaled(c);
  };
  for (const auto& [key, a] : coeffs.a_entries()) add(key.first + 1, key.second, a);
  for (const auto& [key, b] : coeffs.b_entries()) add(key.first, key.second + 1, b);

  const Rational inv_a2 = Rational(1) / (alpha * alpha);
  const Polynomial h_of_r({inv_a2, Rational(0), -inv_a2});
  ConfluentNormalForm out;
  out.m = m;
  out.alpha = alpha;
  out.degree = coeffs.n();
  out.Pr = numerator.compose(h_of_r) +
           Polynomial::monomial(Rational(1), static_cast<std::size_t>(2 * m - 1)) * poly.compose(h_of_r);
  return out;
}

using AnyNormalForm = std::variant<MelnikovNormalForm, ConfluentNormalForm>;

// Generic or confluent assembly, whichever the family requires.
inline AnyNormalForm assemble(const SystemFamily& family, const PerturbCoeffs& coeffs) {
  if (family.confluent()) return assemble_confluent(family, coeffs);
  return assemble_melnikov(family, coeffs);
}

inline bool is_zero(const AnyNormalForm& nf) {
  return std::visit([](const auto& f) { return f.is_zero(); }, nf);
}

}  // namespace melnikov::core
