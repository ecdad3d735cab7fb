#pragma once

// Parameters of the unperturbed family
//
//   x' = y (1 - a1 x)^m1 (1 - a2 x)^m2,   y' = -x (1 - a1 x)^m1 (1 - a2 x)^m2
//
// and of its degree-n polynomial perturbation, written on the region where
// the common factor is nonzero as
//
//   x' = y + eps * f(x, y) / D(x),   y' = -x + eps * g(x, y) / D(x),
//   f = sum a_ij x^i y^j,  g = sum b_ij x^i y^j,  0 <= i + j <= n.
//
// Orbits of the unperturbed flow are the circles x^2 + y^2 = h; the period
// annulus is 0 < h < H0 = min(1/a1^2, 1/a2^2).

#include <melnikov/exactalg/polynomial.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace melnikov::core {

using exactalg::Polynomial;
using exactalg::Rational;

class SystemFamily {
 public:
  SystemFamily(Rational alpha1, Rational alpha2, int m1, int m2)
      : alpha1_(std::move(alpha1)), alpha2_(std::move(alpha2)), m1_(m1), m2_(m2) {
    if (alpha1_.is_zero() || alpha2_.is_zero())
      throw std::invalid_argument("SystemFamily: alpha1 * alpha2 must be nonzero");
    if (m1_ < 1 || m2_ < 1) throw std::invalid_argument("SystemFamily: m1, m2 must be positive");
  }

  [[nodiscard]] const Rational& alpha1() const { return alpha1_; }
  [[nodiscard]] const Rational& alpha2() const { return alpha2_; }
  [[nodiscard]] int m1() const { return m1_; }
  [[nodiscard]] int m2() const { return m2_; }

  // alpha1 == alpha2: both factors collapse into (1 - a x)^(m1 + m2).
  [[nodiscard]] bool confluent() const { return alpha1_ == alpha2_; }
  // alpha2 == -alpha1: distinct factors but a shared radical sqrt(1 - a^2 h).
  [[nodiscard]] bool mirrored() const { return alpha1_ == -alpha2_; }

  [[nodiscard]] Rational h0() const {
    const Rational a = alpha1_ * alpha1_, b = alpha2_ * alpha2_;
    return Rational(1) / exactalg::max(a, b);
  }

  // D(x) = (1 - a1 x)^m1 (1 - a2 x)^m2
  [[nodiscard]] Polynomial denominator() const {
    return pow(Polynomial({Rational(1), -alpha1_}), static_cast<unsigned>(m1_)) *
           pow(Polynomial({Rational(1), -alpha2_}), static_cast<unsigned>(m2_));
  }

  friend bool operator==(const SystemFamily& a, const SystemFamily& b) {
    return a.alpha1_ == b.alpha1_ && a.alpha2_ == b.alpha2_ && a.m1_ == b.m1_ && a.m2_ == b.m2_;
  }

 private:
  Rational alpha1_, alpha2_;
  int m1_, m2_;
};

// rho(h) = 1 - alpha^2 h, the square of the radical r = sqrt(1 - alpha^2 h).
inline Polynomial rho(const Rational& alpha) { return Polynomial({Rational(1), -(alpha * alpha)}); }

// Perturbation coefficients a_ij, b_ij for 0 <= i + j <= n inside the box
// |a_ij|, |b_ij| <= K. Absent entries are zero; zero entries are not stored.
class PerturbCoeffs {
 public:
  using Key = std::pair<int, int>;

  PerturbCoeffs(int n, Rational bound) : n_(n), bound_(std::move(bound)) {
    if (n_ < 0) throw std::invalid_argument("PerturbCoeffs: degree must be nonnegative");
    if (bound_.sign() <= 0) throw std::invalid_argument("PerturbCoeffs: box bound K must be positive");
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const Rational& bound() const { return bound_; }

  void set_a(int i, int j, const Rational& v) { set(a_, i, j, v); }
  void set_b(int i, int j, const Rational& v) { set(b_, i, j, v); }
  [[nodiscard]] Rational a(int i, int j) const { return get(a_, i, j); }
  [[nodiscard]] Rational b(int i, int j) const { return get(b_, i, j); }
  [[nodiscard]] const std::map<Key, Rational>& a_entries() const { return a_; }
  [[nodiscard]] const std::map<Key, Rational>& b_entries() const { return b_; }
  [[nodiscard]] bool all_zero() const { return a_.empty() && b_.empty(); }

  [[nodiscard]] Rational max_abs() const {
    Rational m;
    for (const auto& [k, v] : a_) m = exactalg::max(m, v.abs());
    for (const auto& [k, v] : b_) m = exactalg::max(m, v.abs());
    return m;
  }

  friend bool operator==(const PerturbCoeffs& x, const PerturbCoeffs& y) {
    return x.n_ == y.n_ && x.bound_ == y.bound_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  void set(std::map<Key, Rational>& m, int i, int j, const Rational& v) const {
    if (i < 0 || j < 0 || i + j > n_)
      throw std::out_of_range("coefficient index (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside 0 <= i+j <= " + std::to_string(n_));
    if (v.abs() > bound_)
      throw std::out_of_range("coefficient " + v.str() + " exceeds box bound K = " + bound_.str());
    if (v.is_zero()) {
      m.erase({i, j});
    } else {
      m[{i, j}] = v;
    }
  }
  static Rational get(const std::map<Key, Rational>& m, int i, int j) {
    auto it = m.find({i, j});
    return it == m.end() ? Rational() : it->second;
  }

  int n_;
  Rational bound_;
  std::map<Key, Rational> a_, b_;
};

}  // namespace melnikov::core
