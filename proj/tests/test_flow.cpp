#include "support.hpp"

#include <melnikov/core/assemble.hpp>
#include <melnikov/core/evaluate.hpp>
#include <melnikov/dynamics/flow.hpp>
#include <melnikov/zerocount/prescribe.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using melnikov::core::PerturbCoeffs;
using melnikov::core::SystemFamily;
using melnikov::exactalg::Rational;
namespace dyn = melnikov::dynamics;

namespace {

const SystemFamily reference(Rational(1, 2), Rational(-1, 3), 1, 1);

PerturbCoeffs sample_coeffs() {
  PerturbCoeffs c(2, Rational(1));
  c.set_a(1, 0, Rational(1));
  c.set_a(2, 0, Rational(1, 3));
  c.set_b(0, 1, Rational(-1, 2));
  return c;
}

}  // namespace

TEST(Flow, UnperturbedOrbitsClose) {
  dyn::FlowConfig cfg;
  cfg.epsilon = 0.0;
  const double h0 = reference.h0().to_double();
  for (const double f : {0.1, 0.5, 0.9}) {
    const double h = f * h0;
    const auto hit = dyn::integrate_to_section(reference, sample_coeffs(), cfg, {0.0, std::sqrt(h)});
    EXPECT_NEAR(hit.time, 2 * std::numbers::pi, 1e-9);
    EXPECT_NEAR(hit.x, 0.0, 1e-9);
    EXPECT_LE(std::fabs(hit.x * hit.x + hit.y * hit.y - h), 10 * cfg.step_tolerance * std::max(1.0, h));
    EXPECT_LE(std::fabs(dyn::displacement(reference, sample_coeffs(), cfg, h)), 10 * cfg.step_tolerance * std::max(1.0, h));
  }
}

TEST(Flow, QuadratureMatchesExactEvaluation) {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 10; ++it) {
    const SystemFamily fam(support::random_alpha(rng), support::random_alpha(rng), 1 + it % 3, 1 + it % 2);
    const PerturbCoeffs c = support::random_coeffs(rng, it % 5);
    const auto nf = melnikov::core::assemble(fam, c);
    for (int k = 1; k <= 5; ++k) {
      const Rational h = fam.h0() * Rational(k, 6);
      const double exact = std::visit([&](const auto& f) { return melnikov::core::evaluate_normal_form(f, h, 20); }, nf)
                               .midpoint()
                               .to_double();
      const double quad = dyn::numeric_melnikov(fam, c, h.to_double());
      EXPECT_NEAR(quad, exact, 1e-9 * std::max(1.0, std::fabs(exact)));
    }
  }
}

TEST(Flow, DisplacementSignFollowsPhi) {
  const PerturbCoeffs c = sample_coeffs();
  const auto nf = melnikov::core::assemble(reference, c);
  const auto rep = melnikov::zerocount::count_zeros(nf);
  ASSERT_EQ(rep.count_hi, 0);
  dyn::FlowConfig cfg;
  const double h0 = reference.h0().to_double();
  for (int k = 1; k <= 20; ++k) {
    const double h = h0 * 0.9 * k / 21;
    const double d = dyn::displacement(reference, c, cfg, h);
    const double phi = dyn::numeric_melnikov(reference, c, h);
    EXPECT_EQ(d > 0, phi > 0) << "h=" << h;
    // First-order ratio: h_return - h ~ 2 eps Phi.
    if (h < 0.75 * h0) EXPECT_NEAR(d / (cfg.epsilon * phi), 2.0, 0.05) << "h=" << h;
  }
}

TEST(Flow, CyclesAtPrescribedZeros) {
  const Rational h0 = reference.h0();
  const auto coeffs = melnikov::zerocount::prescribe_zeros(reference, 2, {h0 / Rational(4), h0 / Rational(2)});
  const auto cr = dyn::find_limit_cycles(reference, coeffs, {}, dyn::uniform_grid(h0.to_double(), 40));
  ASSERT_EQ(cr.cycles.size(), 2u);
  EXPECT_NEAR(cr.cycles[0].h_label, h0.to_double() / 4, 5e-3 * h0.to_double());
  EXPECT_NEAR(cr.cycles[1].h_label, h0.to_double() / 2, 5e-3 * h0.to_double());
  EXPECT_NE(cr.cycles[0].stability, cr.cycles[1].stability);
  EXPECT_TRUE(cr.failures.empty());
}

TEST(Flow, ConfluentCycle) {
  const SystemFamily fam(Rational(1, 2), Rational(1, 2), 1, 2);
  const auto coeffs = melnikov::zerocount::prescribe_zeros(fam, 3, {Rational(2)});
  const auto cr = dyn::find_limit_cycles(fam, coeffs, {}, dyn::uniform_grid(4.0, 40));
  ASSERT_EQ(cr.cycles.size(), 1u);
  EXPECT_NEAR(cr.cycles[0].h_label, 2.0, 0.02);
}

TEST(Flow, ZeroPerturbationHasNoCycles) {
  const auto cr = dyn::find_limit_cycles(reference, PerturbCoeffs(2, Rational(1)), {}, dyn::uniform_grid(4.0, 20));
  EXPECT_TRUE(cr.cycles.empty());
}

TEST(Flow, ErrorsAreReported) {
  dyn::FlowConfig cfg;
  EXPECT_THROW(dyn::integrate_to_section(reference, sample_coeffs(), cfg, {0.0, 2.5}), dyn::IntegrationError);
  EXPECT_THROW(dyn::displacement(reference, sample_coeffs(), cfg, 4.0), std::domain_error);
  // A huge perturbation drives orbits out of the annulus; failures are
  // recorded per grid point instead of aborting the scan.
  cfg.epsilon = 5.0;
  const auto cr = dyn::find_limit_cycles(reference, sample_coeffs(), cfg, dyn::uniform_grid(4.0, 10));
  EXPECT_FALSE(cr.failures.empty());
  EXPECT_THROW(dyn::find_limit_cycles(reference, sample_coeffs(), cfg, {1.0, 0.5}), std::invalid_argument);
}
