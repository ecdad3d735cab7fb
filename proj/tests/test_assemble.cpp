#include "support.hpp"

#include <melnikov/core/assemble.hpp>
#include <melnikov/core/evaluate.hpp>
#include <melnikov/zerocount/zeros.hpp>

#include <gtest/gtest.h>

#include <cmath>

using melnikov::core::ConfluentNormalForm;
using melnikov::core::MelnikovNormalForm;
using melnikov::core::PerturbCoeffs;
using melnikov::core::SystemFamily;
using melnikov::exactalg::Rational;

namespace {

SystemFamily random_family(std::mt19937_64& rng, bool allow_confluent = true) {
  const Rational a1 = support::random_alpha(rng);
  Rational a2 = support::random_alpha(rng);
  const long pick = support::uniform(rng, 0, 5);
  if (pick == 0 && allow_confluent) a2 = a1;
  if (pick == 1) a2 = -a1;
  if (!allow_confluent && a2 == a1) a2 = a1 + Rational(1, 7);
  return {a1, a2, static_cast<int>(support::uniform(rng, 1, 3)), static_cast<int>(support::uniform(rng, 1, 3))};
}

PerturbCoeffs sum(const PerturbCoeffs& x, const PerturbCoeffs& y) {
  PerturbCoeffs out(x.n(), x.bound() + y.bound());
  for (const auto& [k, v] : x.a_entries()) out.set_a(k.first, k.second, v + y.a(k.first, k.second));
  for (const auto& [k, v] : y.a_entries()) out.set_a(k.first, k.second, x.a(k.first, k.second) + v);
  for (const auto& [k, v] : x.b_entries()) out.set_b(k.first, k.second, v + y.b(k.first, k.second));
  for (const auto& [k, v] : y.b_entries()) out.set_b(k.first, k.second, x.b(k.first, k.second) + v);
  return out;
}

}  // namespace

TEST(Assemble, LinearInCoefficients) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 30; ++it) {
    const SystemFamily fam = random_family(rng);
    const int n = static_cast<int>(support::uniform(rng, 0, 4));
    const PerturbCoeffs x = support::random_coeffs(rng, n, 0.5), y = support::random_coeffs(rng, n, 0.5);
    const auto fx = melnikov::core::assemble(fam, x), fy = melnikov::core::assemble(fam, y);
    const auto fs = melnikov::core::assemble(fam, sum(x, y));
    if (fam.confluent()) {
      EXPECT_EQ(std::get<ConfluentNormalForm>(fs).Pr, std::get<ConfluentNormalForm>(fx).Pr + std::get<ConfluentNormalForm>(fy).Pr);
    } else {
      MelnikovNormalForm expect = std::get<MelnikovNormalForm>(fx);
      expect += std::get<MelnikovNormalForm>(fy);
      const auto& got = std::get<MelnikovNormalForm>(fs);
      EXPECT_EQ(got.P, expect.P);
      EXPECT_EQ(got.Q, expect.Q);
      EXPECT_EQ(got.R, expect.R);
    }
  }
}

TEST(Assemble, OddParityTermsVanish) {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 40; ++it) {
    const SystemFamily fam = random_family(rng);
    const int n = static_cast<int>(support::uniform(rng, 1, 5));
    PerturbCoeffs c(n, Rational(1));
    for (int d = 0; d <= n; ++d)
      for (int j = 0; j <= d; ++j) {
        if (j % 2 == 1) c.set_a(d - j, j, support::random_unit(rng));
        if (j % 2 == 0) c.set_b(d - j, j, support::random_unit(rng));
      }
    EXPECT_TRUE(melnikov::core::is_zero(melnikov::core::assemble(fam, c)));
  }
}

TEST(Assemble, VanishesAtTheCenter) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    const SystemFamily fam = random_family(rng);
    const auto nf = melnikov::core::assemble(fam, support::random_coeffs(rng, static_cast<int>(support::uniform(rng, 0, 5))));
    if (const auto* g = std::get_if<MelnikovNormalForm>(&nf)) {
      EXPECT_TRUE(g->value_at_zero().is_zero());
    } else {
      EXPECT_TRUE(std::get<ConfluentNormalForm>(nf).Pr(Rational(1)).is_zero());
    }
  }
}

TEST(Assemble, MirroredFamilyMergesRadicals) {
  const SystemFamily fam(Rational(1, 2), Rational(-1, 2), 2, 1);
  std::mt19937_64 rng(24);
  const auto nf = std::get<MelnikovNormalForm>(melnikov::core::assemble(fam, support::random_coeffs(rng, 3)));
  EXPECT_TRUE(nf.merged);
  EXPECT_TRUE(nf.Q.is_zero());
  EXPECT_EQ(nf.p_order, 2);
}

TEST(Assemble, ConfluentSparsity) {
  std::mt19937_64 rng(25);
  int checked = 0;
  for (int it = 0; it < 80; ++it) {
    const Rational a = support::random_alpha(rng);
    const int m1 = static_cast<int>(support::uniform(rng, 1, 2)), m2 = static_cast<int>(support::uniform(rng, 1, 2));
    const int n = static_cast<int>(support::uniform(rng, 0, 6));
    const SystemFamily fam(a, a, m1, m2);
    const auto nf = melnikov::core::assemble_confluent(fam, support::random_coeffs(rng, n));
    EXPECT_EQ(nf.m, m1 + m2);
    EXPECT_TRUE(nf.Pr(Rational(1)).is_zero());
    // The term count bound needs the order to be small next to the degree.
    if (nf.m > n + 3 || nf.is_zero()) continue;
    ++checked;
    const int s = (n + 1) / 2;
    EXPECT_LE(static_cast<int>(nf.Pr.term_count()), 2 * s + 2) << "n=" << n << " m=" << nf.m;
    if (n % 2 == 0) {
      const auto q = melnikov::exactalg::divmod(nf.Pr, melnikov::exactalg::Polynomial({Rational(-1), Rational(1)})).quotient;
      if (!q.is_zero()) EXPECT_LE(melnikov::exactalg::descartes_bound(q), 2 * s);
    }
  }
  EXPECT_GT(checked, 40);
}

// For n = 0 and m = 4: Pr is proportional to 5 - 6 r^2 + r^4, three terms.
TEST(Assemble, ConfluentTermCountGrowsWithOrder) {
  const SystemFamily fam(Rational(1, 2), Rational(1, 2), 2, 2);
  PerturbCoeffs c(0, Rational(1));
  c.set_a(0, 0, Rational(1));
  const auto nf = melnikov::core::assemble_confluent(fam, c);
  ASSERT_EQ(nf.Pr.degree(), 4);
  EXPECT_EQ(nf.Pr.term_count(), 3u);
  const auto shape = nf.Pr.scaled(Rational(5) / nf.Pr.coeff(0));
  EXPECT_EQ(shape, melnikov::exactalg::Polynomial({Rational(5), Rational(0), Rational(-6), Rational(0), Rational(1)}));
  EXPECT_EQ(melnikov::zerocount::count_zeros(nf).count_hi, 0);
}

TEST(Assemble, PathsRejectWrongFamilies) {
  const SystemFamily conf(Rational(1, 2), Rational(1, 2), 1, 1), gen(Rational(1, 2), Rational(1, 3), 1, 1);
  const PerturbCoeffs c(1, Rational(1));
  EXPECT_THROW(melnikov::core::assemble_melnikov(conf, c), std::invalid_argument);
  EXPECT_THROW(melnikov::core::assemble_confluent(gen, c), std::invalid_argument);
}

TEST(Assemble, EvaluationMatchesQuadrature) {
  std::mt19937_64 rng(26);
  for (int it = 0; it < 25; ++it) {
    const SystemFamily fam = random_family(rng);
    const int n = static_cast<int>(support::uniform(rng, 0, 4));
    const PerturbCoeffs c = support::random_coeffs(rng, n);
    const auto nf = melnikov::core::assemble(fam, c);
    const auto inst = support::to_oracle(fam, c);
    for (int k = 1; k <= 5; ++k) {
      const Rational h = fam.h0() * Rational(9 * k, 60);
      const auto enc = std::visit([&](const auto& f) { return melnikov::core::evaluate_normal_form(f, h, 25); }, nf);
      const long double q = oracle::melnikov(inst, h.to_double());
      const double v = enc.midpoint().to_double();
      EXPECT_NEAR(v, static_cast<double>(q), 1e-10 * std::max(1.0, std::fabs(v))) << "instance " << it << " h=" << h;
      EXPECT_LE(enc.width(), Rational::parse("1e-25"));
    }
  }
}

TEST(Evaluate, DomainAndPrecisionErrors) {
  const SystemFamily fam(Rational(1, 2), Rational(-1, 3), 1, 1);
  PerturbCoeffs c(1, Rational(1));
  c.set_a(1, 0, Rational(1));
  const auto nf = std::get<MelnikovNormalForm>(melnikov::core::assemble(fam, c));
  EXPECT_THROW(melnikov::core::evaluate_normal_form(nf, Rational(4), 10), std::domain_error);
  EXPECT_THROW(melnikov::core::evaluate_normal_form(nf, Rational(-1), 10), std::domain_error);
  EXPECT_THROW(melnikov::core::evaluate_normal_form(nf, Rational(1), 0), std::invalid_argument);
  EXPECT_TRUE(melnikov::core::evaluate_normal_form(nf, Rational(0), 10).contains(Rational(0)));
}

TEST(Evaluate, HighPrecisionWidth) {
  const SystemFamily fam(Rational(2, 3), Rational(1, 5), 2, 3);
  std::mt19937_64 rng(27);
  const auto nf = melnikov::core::assemble(fam, support::random_coeffs(rng, 3));
  const auto& g = std::get<MelnikovNormalForm>(nf);
  const auto a = melnikov::core::evaluate_normal_form(g, Rational(1, 3), 60);
  const auto b = melnikov::core::evaluate_normal_form(g, Rational(1, 3), 20);
  EXPECT_LE(a.width(), Rational::parse("1e-60"));
  EXPECT_TRUE(b.overlaps(a));
  EXPECT_TRUE(b.contains(a.midpoint()));
}
