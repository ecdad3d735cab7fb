#pragma once

// Floating-point ground truth for the Melnikov machinery: periodic
// quadrature of the Melnikov integral, and first-return maps of the
// perturbed flow on the positive y-axis.
//
// Nothing here certifies anything; it is an oracle and a detector.

#include <melnikov/core/family.hpp>

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace melnikov::dynamics {

using core::PerturbCoeffs;
using core::SystemFamily;

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { section_not_reached, left_annulus, singular_line };
  IntegrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Double-precision copy of one instance of the perturbed system.
class PerturbedSystem {
 public:
  struct Term {
    int i, j;
    double c;
  };

  PerturbedSystem(const SystemFamily& family, const PerturbCoeffs& coeffs)
      : a1_(family.alpha1().to_double()),
        a2_(family.alpha2().to_double()),
        m1_(family.m1()),
        m2_(family.m2()),
        n_(coeffs.n()),
        h0_(family.h0().to_double()) {
    for (const auto& [k, v] : coeffs.a_entries()) f_.push_back({k.first, k.second, v.to_double()});
    for (const auto& [k, v] : coeffs.b_entries()) g_.push_back({k.first, k.second, v.to_double()});
  }

  [[nodiscard]] double h0() const { return h0_; }

  // Smallest |1 - alpha_i x|.
  [[nodiscard]] double singular_distance(double x) const {
    return std::min(std::abs(1.0 - a1_ * x), std::abs(1.0 - a2_ * x));
  }

  [[nodiscard]] double denominator(double x) const {
    return std::pow(1.0 - a1_ * x, m1_) * std::pow(1.0 - a2_ * x, m2_);
  }

  // (f, g) / D at (x, y).
  [[nodiscard]] std::array<double, 2> perturbation(double x, double y) const {
    std::vector<double> xp(static_cast<std::size_t>(n_ + 1), 1.0), yp(static_cast<std::size_t>(n_ + 1), 1.0);
    for (int k = 1; k <= n_; ++k) {
      xp[static_cast<std::size_t>(k)] = xp[static_cast<std::size_t>(k - 1)] * x;
      yp[static_cast<std::size_t>(k)] = yp[static_cast<std::size_t>(k - 1)] * y;
    }
    double f = 0.0, g = 0.0;
    for (const auto& t : f_) f += t.c * xp[static_cast<std::size_t>(t.i)] * yp[static_cast<std::size_t>(t.j)];
    for (const auto& t : g_) g += t.c * xp[static_cast<std::size_t>(t.i)] * yp[static_cast<std::size_t>(t.j)];
    const double d = denominator(x);
    return {f / d, g / d};
  }

 private:
  double a1_, a2_;
  int m1_, m2_, n_;
  double h0_;
  std::vector<Term> f_, g_;
};

struct QuadratureOptions {
  int initial_nodes = 64;
  int max_nodes = 1 << 18;
  double tolerance = 1e-12;
};

// Trapezoidal rule for the Melnikov integral
//   Phi(h) = integral_0^{2 pi} (x f + y g) / D dt,  x = sqrt(h) sin t, y = sqrt(h) cos t,
// doubling the node count until successive values agree to `tolerance`
// relative to max(|Phi|, integral of |integrand|).
inline double numeric_melnikov(const SystemFamily& family, const PerturbCoeffs& coeffs, double h,
                               const QuadratureOptions& opt = {}) {
  const PerturbedSystem sys(family, coeffs);
  if (!(h > 0.0) || !(h < sys.h0())) throw std::domain_error("numeric_melnikov: h outside (0, H0)");
  if (opt.initial_nodes < 2 || (opt.initial_nodes & (opt.initial_nodes - 1)) != 0)
    throw std::invalid_argument("numeric_melnikov: node count must be a power of two");
  if (coeffs.all_zero()) return 0.0;
  const double rad = std::sqrt(h);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto integrand = [&](double t) {
    const double x = rad * std::sin(t), y = rad * std::cos(t);
    const auto fg = sys.perturbation(x, y);
    return x * fg[0] + y * fg[1];
  };
  // Sums over node sets; refinement adds the odd nodes of the finer grid.
  long n = opt.initial_nodes;
  double sum = 0.0, abs_sum = 0.0;
  for (long k = 0; k < n; ++k) {
    const double v = integrand(two_pi * static_cast<double>(k) / static_cast<double>(n));
    sum += v;
    abs_sum += std::abs(v);
  }
  double prev = two_pi * sum / static_cast<double>(n);
  while (n < opt.max_nodes) {
    for (long k = 0; k < n; ++k) {
      const double v = integrand(two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
      sum += v;
      abs_sum += std::abs(v);
    }
    n *= 2;
    const double cur = two_pi * sum / static_cast<double>(n);
    const double scale = std::max(std::abs(cur), two_pi * abs_sum / static_cast<double>(n));
    if (std::abs(cur - prev) <= opt.tolerance * scale) return cur;
    prev = cur;
  }
  throw ConvergenceError("numeric_melnikov: no convergence at " + std::to_string(opt.max_nodes) + " nodes");
}

struct FlowConfig {
  double epsilon = 1e-3;
  double step_tolerance = 1e-12;
  double max_return_time = 40.0;
  double guard = 1e-6;
};

struct SectionHit {
  double x = 0.0, y = 0.0;
  double time = 0.0;
};

// Integrates the perturbed system from `start` until it crosses the positive
// y-axis from x < 0 to x >= 0 (the clockwise return), resolving the crossing
// time by bisection on the dense output.
inline SectionHit integrate_to_section(const SystemFamily& family, const PerturbCoeffs& coeffs,
                                       const FlowConfig& cfg, std::array<double, 2> start) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const PerturbedSystem sys(family, coeffs);
  const double h0 = sys.h0();
  if (start[0] * start[0] + start[1] * start[1] >= h0)
    throw IntegrationError(IntegrationError::Kind::left_annulus, "start point outside the annulus");
  auto rhs = [&](const State& s, State& ds, double) {
    if (sys.singular_distance(s[0]) < cfg.guard)
      throw IntegrationError(IntegrationError::Kind::singular_line, "trajectory reached a singular line");
    const auto p = sys.perturbation(s[0], s[1]);
    ds[0] = s[1] + cfg.epsilon * p[0];
    ds[1] = -s[0] + cfg.epsilon * p[1];
  };
  auto stepper = odeint::make_dense_output(cfg.step_tolerance, cfg.step_tolerance,
                                           odeint::runge_kutta_dopri5<State>());
  stepper.initialize(start, 0.0, 1e-3);
  State prev = start;
  bool left_start = false;
  while (stepper.current_time() < cfg.max_return_time) {
    const auto [t0, t1] = stepper.do_step(rhs);
    const State cur = stepper.current_state();
    const double r2 = cur[0] * cur[0] + cur[1] * cur[1];
    if (r2 >= h0) throw IntegrationError(IntegrationError::Kind::left_annulus, "trajectory left the annulus");
    if (cur[1] < 0.0) left_start = true;
    if (left_start && prev[0] < 0.0 && cur[0] >= 0.0 && cur[1] > 0.0) {
      double lo = t0, hi = t1;
      State mid{};
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double tm = 0.5 * (lo + hi);
        stepper.calc_state(tm, mid);
        if (mid[0] < 0.0) {
          lo = tm;
        } else {
          hi = tm;
        }
      }
      const double tc = 0.5 * (lo + hi);
      stepper.calc_state(tc, mid);
      return {mid[0], mid[1], tc};
    }
    prev = cur;
  }
  throw IntegrationError(IntegrationError::Kind::section_not_reached, "no return within max_return_time");
}

// h_return - h for the orbit starting at (0, sqrt(h)).
inline double displacement(const SystemFamily& family, const PerturbCoeffs& coeffs, const FlowConfig& cfg,
                           double h) {
  const double h0 = family.h0().to_double();
  if (!(h > 0.0) || !(h < h0)) throw std::domain_error("displacement: h outside (0, H0)");
  const SectionHit hit = integrate_to_section(family, coeffs, cfg, {0.0, std::sqrt(h)});
  return hit.x * hit.x + hit.y * hit.y - h;
}

enum class Stability { attracting, repelling, undecided };

inline std::string to_string(Stability s) {
  switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    case Stability::undecided: return "undecided";
  }
  return "?";
}

struct DetectedCycle {
  double h_label;
  Stability stability;
};

struct GridFailure {
  double h;
  std::string reason;
};

struct CycleReport {
  std::vector<DetectedCycle> cycles;
  std::vector<double> grid;
  std::vector<double> displacements;  // NaN where integration failed
  std::vector<GridFailure> failures;
  double epsilon = 0.0;
  double resolution = 0.0;  // largest grid gap: cycles closer than this may merge
};

// Uniform grid of `points` labels in [lo_frac, hi_frac] * H0.
inline std::vector<double> uniform_grid(double h0, int points, double lo_frac = 0.02, double hi_frac = 0.9) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    g[static_cast<std::size_t>(k)] = h0 * (lo_frac + (hi_frac - lo_frac) * k / (points - 1));
  return g;
}

// Scans the displacement over the grid, brackets sign changes and bisects
// each bracket to a cycle label. A cycle is attracting when the displacement
// decreases through it (the return map contracts toward it).
inline CycleReport find_limit_cycles(const SystemFamily& family, const PerturbCoeffs& coeffs, const FlowConfig& cfg,
                                     const std::vector<double>& grid) {
  const double h0 = family.h0().to_double();
  CycleReport rep;
  rep.grid = grid;
  rep.epsilon = cfg.epsilon;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0) || !(grid[k] < h0)) throw std::invalid_argument("find_limit_cycles: grid outside (0, H0)");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw std::invalid_argument("find_limit_cycles: grid must increase");
    if (k > 0) rep.resolution = std::max(rep.resolution, grid[k] - grid[k - 1]);
  }
  if (coeffs.all_zero() || cfg.epsilon == 0.0) {
    rep.displacements.assign(grid.size(), 0.0);
    return rep;
  }
  rep.displacements.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      rep.displacements[k] = displacement(family, coeffs, cfg, grid[k]);
    } catch (const IntegrationError& e) {
      rep.displacements[k] = std::nan("");
      rep.failures.push_back({grid[k], e.what()});
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double dl = rep.displacements[k];
    if (dl == 0.0) {
      rep.cycles.push_back({grid[k], Stability::undecided});
      continue;
    }
    if (k + 1 == grid.size()) break;
    const double dr = rep.displacements[k + 1];
    if (std::isnan(dl) || std::isnan(dr) || !(dl * dr < 0.0)) continue;
    double lo = grid[k], hi = grid[k + 1];
    try {
      for (int it = 0; it < 60 && hi - lo > 1e-10 * h0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = displacement(family, coeffs, cfg, mid);
        if (fm == 0.0) {
          lo = hi = mid;
        } else if ((fm < 0.0) == (dl < 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
    } catch (const IntegrationError& e) {
      rep.failures.push_back({0.5 * (lo + hi), e.what()});
    }
    rep.cycles.push_back({0.5 * (lo + hi), dl > 0.0 ? Stability::attracting : Stability::repelling});
  }
  return rep;
}

}  // namespace melnikov::dynamics
