#pragma once

// Build perturbations whose Melnikov function vanishes at chosen orbit labels.
//
// Phi is linear in the coefficients, so zeros at t targets need a nonzero
// vector in the kernel of the t x u matrix V[target][unknown] of basis
// values. The values are irrational; they are replaced by 64-bit dyadic
// approximations of certified enclosures, so the exact zeros of the result
// sit within roughly 10^-14 H0 of the targets. Every candidate solution is
// checked by count_zeros before it is returned.

#include <melnikov/core/assemble.hpp>
#include <melnikov/core/evaluate.hpp>
#include <melnikov/zerocount/zeros.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace melnikov::zerocount {

using core::PerturbCoeffs;

class PrescribeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Unknown {
  bool is_a;
  int i, j;
};

// Coefficients that can influence Phi: a_ij with j even, b_ij with j odd.
inline std::vector<Unknown> effective_unknowns(int n) {
  std::vector<Unknown> out;
  for (int d = 0; d <= n; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      if (j % 2 == 0) out.push_back({true, i, j});
      if (j % 2 == 1) out.push_back({false, i, j});
    }
  }
  return out;
}

inline PerturbCoeffs single_coefficient(int n, const Unknown& u, const Rational& value, const Rational& bound) {
  PerturbCoeffs c(n, bound);
  if (u.is_a) {
    c.set_a(u.i, u.j, value);
  } else {
    c.set_b(u.i, u.j, value);
  }
  return c;
}

// Nonzero kernel vector of a t x (t+1) matrix, or empty when rank < t.
inline std::optional<std::vector<Rational>> kernel_vector(std::vector<std::vector<Rational>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows + 1;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Rational inv = Rational(1) / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || a[q][c].is_zero()) continue;
      const Rational f = a[q][c];
      for (std::size_t k = 0; k < cols; ++k) a[q][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r < rows) return std::nullopt;
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<Rational> v(cols);
  v[free_col] = Rational(1);
  for (std::size_t q = 0; q < rows; ++q) v[pivot_col[q]] = -a[q][free_col];
  return v;
}

// Calls f on every k-subset of {0..n-1} in lexicographic order until it returns true.
template <typename F>
bool for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (f(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// Coefficients in the box |c| <= bound whose Melnikov function has exactly
// the given simple zeros (to within about 10^-14 H0) and no others in (0, H0).
inline PerturbCoeffs prescribe_zeros(const core::SystemFamily& family, int n, std::vector<Rational> targets,
                                     const Rational& bound = Rational(1)) {
  const Rational h0 = family.h0();
  std::sort(targets.begin(), targets.end());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t].sign() <= 0 || targets[t] >= h0)
      throw std::invalid_argument("prescribe_zeros: target " + targets[t].str() + " outside (0, H0)");
    if (t > 0 && targets[t] == targets[t - 1]) throw std::invalid_argument("prescribe_zeros: repeated target");
  }
  const auto bound_n = theorem_bound(family, n);
  if (!bound_n || static_cast<int>(targets.size()) > *bound_n)
    throw std::invalid_argument("prescribe_zeros: more targets than the zero bound allows");

  const auto unknowns = detail::effective_unknowns(n);
  std::vector<core::RadicalSum> basis;
  std::vector<detail::Unknown> used;
  for (const auto& u : unknowns) {
    const auto nf = core::assemble(family, detail::single_coefficient(n, u, Rational(1), Rational(1)));
    if (core::is_zero(nf)) continue;
    basis.push_back(std::visit([](const auto& f) { return core::to_radical_sum(f); }, nf));
    used.push_back(u);
  }
  const std::size_t t = targets.size();

  // V[target][unknown], rounded to 64-bit dyadics.
  std::vector<std::vector<Rational>> values(t, std::vector<Rational>(basis.size()));
  for (std::size_t r = 0; r < t; ++r)
    for (std::size_t c = 0; c < basis.size(); ++c)
      values[r][c] = exactalg::round_down(core::enclose(basis[c], exactalg::Interval(targets[r]), 96).midpoint(), 64);

  const Rational tolerance = h0 * Rational(exactalg::Integer(1), exactalg::pow2(40));
  std::optional<PerturbCoeffs> found;
  int attempts = 0;
  detail::for_each_subset(basis.size(), t + 1, [&](const std::vector<std::size_t>& cols) {
    if (++attempts > 500) return true;
    std::vector<std::vector<Rational>> sub(t, std::vector<Rational>(t + 1));
    for (std::size_t r = 0; r < t; ++r)
      for (std::size_t c = 0; c <= t; ++c) sub[r][c] = values[r][cols[c]];
    std::optional<std::vector<Rational>> v = t == 0 ? std::vector<Rational>{Rational(1)} : detail::kernel_vector(sub);
    if (!v) return false;
    Rational biggest;
    for (const auto& x : *v) biggest = exactalg::max(biggest, x.abs());
    if (biggest.is_zero()) return false;
    const Rational scale = bound / biggest;
    PerturbCoeffs coeffs(n, bound);
    for (std::size_t c = 0; c <= t; ++c) {
      const auto& u = used[cols[c]];
      // Truncated toward zero to 15 decimals: stays in the box, short to print.
      const Rational unit(exactalg::Integer(1), exactalg::pow10(15));
      Rational value = (*v)[c] * scale / unit;
      value = Rational(value.sign() < 0 ? exactalg::ceil(value) : exactalg::floor(value)) * unit;
      if (u.is_a) {
        coeffs.set_a(u.i, u.j, value);
      } else {
        coeffs.set_b(u.i, u.j, value);
      }
    }
    const auto nf = core::assemble(family, coeffs);
    if (core::is_zero(nf)) return false;
    const ZeroReport rep = count_zeros(nf);
    if (rep.count_lo != static_cast<int>(t) || rep.count_hi != static_cast<int>(t)) return false;
    for (std::size_t k = 0; k < t; ++k) {
      const auto& z = rep.certified_zeros[k].interval;
      if (!z.overlaps(exactalg::Interval(targets[k] - tolerance, targets[k] + tolerance))) return false;
    }
    found = coeffs;
    return true;
  });
  if (!found) throw PrescribeError("prescribe_zeros: no verified coefficient choice found");
  return *found;
}

}  // namespace melnikov::zerocount
