#pragma once

// Dense univariate polynomials with exact rational coefficients.

#include <melnikov/exactalg/rational.hpp>

#include <algorithm>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace melnikov::exactalg {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }
  static Polynomial constant(const Rational& c) { return Polynomial({c}); }
  // c * x^k
  static Polynomial monomial(const Rational& c, std::size_t k) {
    std::vector<Rational> v(k + 1);
    v[k] = c;
    return Polynomial(std::move(v));
  }
  // x - root
  static Polynomial linear_root(const Rational& root) { return Polynomial({-root, Rational(1)}); }

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] std::span<const Rational> coeffs() const { return coeffs_; }
  [[nodiscard]] Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(); }
  [[nodiscard]] const Rational& leading() const {
    if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
    return coeffs_.back();
  }
  [[nodiscard]] std::size_t term_count() const {
    return static_cast<std::size_t>(
        std::count_if(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return !c.is_zero(); }));
  }

  // Horner evaluation at any type that mixes with Rational coefficients;
  // floating-point types get rounded coefficients.
  template <typename T>
  [[nodiscard]] T evaluate(const T& x) const {
    auto lift = [](const Rational& c) {
      if constexpr (std::is_floating_point_v<T>) {
        return static_cast<T>(c.to_double());
      } else {
        return T(c);
      }
    };
    T acc = lift(Rational());
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + lift(*it);
    return acc;
  }
  [[nodiscard]] Rational operator()(const Rational& x) const { return evaluate(x); }
  [[nodiscard]] int sign_at(const Rational& x) const { return evaluate(x).sign(); }

  [[nodiscard]] Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * Rational(static_cast<long>(k));
    return Polynomial(std::move(d));
  }

  // p(q(x))
  [[nodiscard]] Polynomial compose(const Polynomial& inner) const {
    Polynomial acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * inner + constant(*it);
    return acc;
  }

  [[nodiscard]] Polynomial scaled(const Rational& c) const {
    if (c.is_zero()) return {};
    std::vector<Rational> v = coeffs_;
    for (auto& x : v) x *= c;
    return Polynomial(std::move(v));
  }

  [[nodiscard]] Polynomial monic() const { return scaled(Rational(1) / leading()); }

  // Multiply by a positive constant so the coefficients are coprime integers.
  // Signs at every point are preserved.
  [[nodiscard]] Polynomial primitive() const {
    if (is_zero()) return {};
    Integer lcm_den = 1, gcd_num = 0;
    for (const auto& c : coeffs_) {
      if (c.is_zero()) continue;
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.raw().get_den_mpz_t());
      mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), c.raw().get_num_mpz_t());
    }
    return scaled(Rational(lcm_den, gcd_num));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) { return a.scaled(Rational(-1)); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Rational& c, const Polynomial& p) { return p.scaled(c); }
  friend Polynomial operator*(const Polynomial& p, const Rational& c) { return p.scaled(c); }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // "3/2*x^2 - x + 1" style; `var` names the indeterminate.
  [[nodiscard]] std::string str(const std::string& var = "x") const;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

struct DivResult {
  Polynomial quotient;
  Polynomial remainder;
};

inline DivResult divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial(), num};
  std::vector<Rational> rem(num.coeffs().begin(), num.coeffs().end());
  const int dd = den.degree();
  std::vector<Rational> quot(static_cast<std::size_t>(num.degree() - dd + 1));
  const Rational inv_lead = Rational(1) / den.leading();
  for (int k = num.degree(); k >= dd; --k) {
    const Rational c = rem[static_cast<std::size_t>(k)] * inv_lead;
    quot[static_cast<std::size_t>(k - dd)] = c;
    if (c.is_zero()) continue;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k - dd + j)] -= c * den.coeff(static_cast<std::size_t>(j));
  }
  rem.resize(static_cast<std::size_t>(dd));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

inline Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).quotient; }
inline Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).remainder; }

inline Polynomial pow(const Polynomial& base, unsigned exponent) {
  Polynomial result = Polynomial::constant(Rational(1));
  Polynomial b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

// Monic gcd; gcd(0, 0) = 0.
inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = (a % b).primitive();
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

// p / gcd(p, p'): same distinct roots as p, all simple.
inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("squarefree_part: zero polynomial");
  if (p.degree() == 0) return Polynomial::constant(Rational(1));
  return (p / gcd(p, p.derivative())).monic();
}

// Yun's algorithm: p = c * prod_k f_k^k with squarefree, pairwise coprime,
// monic f_k. Entry k-1 holds f_k (possibly the constant 1).
inline std::vector<Polynomial> squarefree_factorization(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("squarefree_factorization: zero polynomial");
  std::vector<Polynomial> factors;
  if (p.degree() == 0) return factors;
  const Polynomial dp = p.derivative();
  Polynomial a = gcd(p, dp);
  Polynomial b = p / a;
  Polynomial c = dp / a;
  Polynomial d = c - b.derivative();
  while (b.degree() > 0) {
    Polynomial f = gcd(b, d);
    factors.push_back(f);
    b = b / f;
    c = d / f;
    d = c - b.derivative();
  }
  while (!factors.empty() && factors.back().degree() == 0) factors.pop_back();
  return factors;
}

inline std::string Polynomial::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << a.str();
      continue;
    }
    if (a != Rational(1)) os << a.str() << "*";
    os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

}  // namespace melnikov::exactalg
