#pragma once

// Certified real-root counting and isolation for rational polynomials.
//
// Counting convention: distinct real roots in the half-open interval
// (lo, hi]. Every routine works on the squarefree part, so multiple roots
// are counted once; multiplicities are available via root_multiplicity().

#include <melnikov/exactalg/interval.hpp>
#include <melnikov/exactalg/polynomial.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace melnikov::exactalg {

// Sturm chain p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k), each term
// rescaled by a positive constant to a primitive integer polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("SturmSequence: zero polynomial");
    chain_.push_back(p.primitive());
    Polynomial d = p.derivative().primitive();
    if (d.is_zero()) return;
    chain_.push_back(d);
    while (true) {
      Polynomial r = -(chain_[chain_.size() - 2] % chain_.back());
      if (r.is_zero()) break;
      chain_.push_back(r.primitive());
    }
  }

  [[nodiscard]] const std::vector<Polynomial>& chain() const { return chain_; }

  [[nodiscard]] int sign_changes_at(const Rational& x) const {
    int changes = 0, last = 0;
    for (const auto& q : chain_) {
      const int s = q.sign_at(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  // Sign pattern at +infinity / -infinity.
  [[nodiscard]] int sign_changes_at_infinity(bool positive) const {
    int changes = 0, last = 0;
    for (const auto& q : chain_) {
      int s = q.leading().sign();
      if (!positive && q.degree() % 2 == 1) s = -s;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  // Distinct roots in (lo, hi].
  [[nodiscard]] int count(const Rational& lo, const Rational& hi) const {
    if (hi < lo) throw std::invalid_argument("SturmSequence::count: hi < lo");
    return sign_changes_at(lo) - sign_changes_at(hi);
  }

 private:
  std::vector<Polynomial> chain_;
};

// 1 + max |a_k / a_n|: every real root lies strictly inside (-B, B).
inline Rational cauchy_root_bound(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("cauchy_root_bound: zero polynomial");
  Rational m;
  const Rational lead = p.leading().abs();
  for (int k = 0; k < p.degree(); ++k) m = max(m, p.coeff(static_cast<std::size_t>(k)).abs() / lead);
  return m + Rational(1);
}

inline int count_real_roots(const Polynomial& p, const Interval& iv) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots: zero polynomial");
  if (p.degree() == 0) return 0;
  return SturmSequence(squarefree_part(p)).count(iv.lo(), iv.hi());
}

// Number of sign changes in the coefficient sequence (zeros skipped).
inline int descartes_bound(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("descartes_bound: zero polynomial");
  int changes = 0, last = 0;
  for (const auto& c : p.coeffs()) {
    const int s = c.sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Multiplicity of the unique root of p inside an isolating interval.
inline int root_multiplicity(const Polynomial& p, const Interval& iv) {
  auto has_root = [&](const Polynomial& q) {
    if (q.degree() <= 0) return false;
    return iv.is_point() ? q(iv.lo()).is_zero() : SturmSequence(squarefree_part(q)).count(iv.lo(), iv.hi()) > 0;
  };
  if (!has_root(p)) return 0;
  // Roots of gcd(q, q') are roots of p, so any in iv is the isolated one.
  int mult = 1;
  for (Polynomial g = gcd(p, p.derivative()); has_root(g); g = gcd(g, g.derivative())) ++mult;
  return mult;
}

// Isolating intervals for the distinct roots of p in (lo, hi], in increasing
// order. Each entry is either a point [x, x] holding an exact rational root,
// or an interval whose open interior (lo, hi) contains exactly one root and
// whose endpoints are not roots.
inline std::vector<Interval> isolate_roots(const Polynomial& p, const Interval& iv) {
  if (p.is_zero()) throw std::invalid_argument("isolate_roots: zero polynomial");
  std::vector<Interval> out;
  if (p.degree() == 0) return out;
  const Polynomial sqf = squarefree_part(p);
  const SturmSequence sturm(sqf);

  struct Frame {
    Rational lo, hi;
    int count;
  };
  std::vector<Frame> stack;
  const int total = sturm.count(iv.lo(), iv.hi());
  if (total == 0) return out;
  // Roots at hi belong to (lo, hi]; split them off so the rest is open.
  const Rational top = iv.hi();
  const int rest = sqf(top).is_zero() ? total - 1 : total;
  if (rest > 0) stack.push_back({iv.lo(), top, rest});
  std::vector<Interval> found;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    // Invariant: f.count roots in the open interval (f.lo, f.hi). Either end
    // may itself be a root handled elsewhere; keep bisecting until neither is.
    if (f.count == 1 && !sqf(f.lo).is_zero() && !sqf(f.hi).is_zero()) {
      found.emplace_back(f.lo, f.hi);
      continue;
    }
    const Rational mid = (f.lo + f.hi) / Rational(2);
    const bool mid_root = sqf(mid).is_zero();
    if (mid_root) found.emplace_back(mid);
    const int left = sturm.count(f.lo, mid) - (mid_root ? 1 : 0);
    const int right = f.count - left - (mid_root ? 1 : 0);
    if (left > 0) stack.push_back({f.lo, mid, left});
    if (right > 0) stack.push_back({mid, f.hi, right});
    if (f.count == 1 && left == 0 && right == 0 && !mid_root) {
      throw std::logic_error("isolate_roots: lost a root during bisection");
    }
  }
  if (sqf(top).is_zero()) found.emplace_back(top);
  std::sort(found.begin(), found.end(), [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
  out = std::move(found);
  return out;
}

// Shrinks an isolating interval of p to width <= `width` by bisection.
// Accepts any interval where p changes sign across the endpoints, or where
// the Sturm count of the squarefree part over (lo, hi] is exactly one.
inline Interval refine_root(const Polynomial& p, const Interval& iv, const Rational& width) {
  if (p.is_zero()) throw std::invalid_argument("refine_root: zero polynomial");
  if (iv.is_point()) {
    if (!p(iv.lo()).is_zero()) throw std::invalid_argument("refine_root: point interval is not a root");
    return iv;
  }
  const Polynomial sqf = squarefree_part(p);
  Rational lo = iv.lo(), hi = iv.hi();
  if (sqf(hi).is_zero()) return Interval(hi);
  int s_lo = sqf.sign_at(lo);
  const int s_hi = sqf.sign_at(hi);
  if (s_lo == 0 || s_lo == s_hi) {
    // Fall back on the Sturm certificate: exactly one root in (lo, hi).
    if (SturmSequence(sqf).count(lo, hi) != 1)
      throw std::invalid_argument("refine_root: interval does not isolate exactly one root");
    if (s_lo == 0) {
      // Move lo off the root at lo toward hi.
      Rational step = (hi - lo) / Rational(2);
      while (true) {
        Rational cand = lo + step;
        if (sqf(cand).is_zero()) return Interval(cand);
        if (SturmSequence(sqf).count(cand, hi) == 1) {
          lo = cand;
          break;
        }
        step /= Rational(2);
      }
      s_lo = sqf.sign_at(lo);
    }
  }
  // A simple root of the squarefree part always produces a sign change.
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / Rational(2);
    const int s = sqf.sign_at(mid);
    if (s == 0) return Interval(mid);
    if (s == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace melnikov::exactalg
