#include "support.hpp"

#include <melnikov/exactalg/polynomial.hpp>

#include <gtest/gtest.h>

using melnikov::exactalg::Polynomial;
using melnikov::exactalg::Rational;

namespace {

Polynomial random_poly(std::mt19937_64& rng, int degree) {
  std::vector<Rational> c;
  for (int k = 0; k <= degree; ++k) c.emplace_back(support::uniform(rng, -9, 9), support::uniform(rng, 1, 5));
  if (c.back().is_zero()) c.back() = Rational(1);
  return Polynomial(c);
}

}  // namespace

TEST(Polynomial, TrimsAndReportsDegree) {
  EXPECT_EQ(Polynomial({Rational(1), Rational(0), Rational(0)}).degree(), 0);
  EXPECT_EQ(Polynomial().degree(), -1);
  EXPECT_TRUE(Polynomial({Rational(0)}).is_zero());
}

TEST(Polynomial, Arithmetic) {
  const Polynomial p({Rational(1), Rational(2)});   // 1 + 2x
  const Polynomial q({Rational(-1), Rational(1)});  // x - 1
  EXPECT_EQ(p * q, Polynomial({Rational(-1), Rational(-1), Rational(2)}));
  EXPECT_EQ(p - p, Polynomial());
  EXPECT_EQ(p(Rational(3, 2)), Rational(4));
  EXPECT_EQ(p.derivative(), Polynomial::constant(Rational(2)));
  EXPECT_EQ(q.compose(p), Polynomial({Rational(0), Rational(2)}));
  EXPECT_EQ(melnikov::exactalg::pow(q, 3)(Rational(3)), Rational(8));
}

TEST(Polynomial, DivisionIdentityOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    const Polynomial a = random_poly(rng, static_cast<int>(support::uniform(rng, 0, 8)));
    const Polynomial b = random_poly(rng, static_cast<int>(support::uniform(rng, 0, 5)));
    const auto [q, r] = melnikov::exactalg::divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree() == 0 ? 0 : b.degree());
  }
  EXPECT_THROW(melnikov::exactalg::divmod(Polynomial::constant(Rational(1)), Polynomial()), std::domain_error);
}

TEST(Polynomial, GcdRecoversCommonFactor) {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 50; ++it) {
    const Polynomial g = random_poly(rng, 2);
    const Polynomial a = g * random_poly(rng, 3), b = g * random_poly(rng, 2);
    const Polynomial d = melnikov::exactalg::gcd(a, b);
    EXPECT_TRUE((a % d).is_zero());
    EXPECT_TRUE((b % d).is_zero());
    EXPECT_TRUE((d % g.monic()).is_zero());
    EXPECT_EQ(d.leading(), Rational(1));
  }
}

TEST(Polynomial, SquarefreeFactorizationReassembles) {
  const Polynomial x1({Rational(-1), Rational(1)}), x2({Rational(2), Rational(1)}), x3({Rational(1), Rational(0), Rational(1)});
  const Polynomial p = x1 * melnikov::exactalg::pow(x2, 2) * melnikov::exactalg::pow(x3, 3);
  const auto factors = melnikov::exactalg::squarefree_factorization(p);
  ASSERT_EQ(factors.size(), 3u);
  Polynomial back = Polynomial::constant(p.leading());
  for (std::size_t k = 0; k < factors.size(); ++k) back = back * melnikov::exactalg::pow(factors[k], static_cast<unsigned>(k + 1));
  EXPECT_EQ(back, p);
  EXPECT_EQ(melnikov::exactalg::squarefree_part(p).degree(), 4);
}

TEST(Polynomial, PrimitiveKeepsSignAndRoots) {
  const Polynomial p({Rational(-3, 4), Rational(3, 2)});
  const Polynomial q = p.primitive();
  EXPECT_EQ(q, Polynomial({Rational(-1), Rational(2)}));
  EXPECT_TRUE(q(Rational(1, 2)).is_zero());
}

TEST(Polynomial, Printing) {
  EXPECT_EQ(Polynomial({Rational(16, 5), Rational(6, 5)}).str("h"), "6/5*h + 16/5");
  EXPECT_EQ(Polynomial().str("h"), "0");
}
