#pragma once

// Certified zero counting of the Melnikov function on the annulus 0 < h < H0.
//
// Generic case: the radicals are squared away to an eliminant E(h) whose
// roots contain every zero of Phi. Squaring only works in one direction, so
// each isolated root of E is then classified by rigorous evaluation of Phi:
//   verified  - Phi changes sign across the isolating interval;
//   rejected  - an enclosure of Phi over the interval excludes zero;
//   undecided - neither happened before the width cap (a touching zero or
//               an artifact too close to call).
// Confluent case: Phi = pi Pr(r) / r^(2m-1) with r in (0, 1) monotone in h,
// so the roots of Pr(r) / (r - 1) in (0, 1) are exactly the zeros of Phi.

#include <melnikov/core/assemble.hpp>
#include <melnikov/core/evaluate.hpp>
#include <melnikov/exactalg/roots.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace melnikov::zerocount {

using core::ConfluentNormalForm;
using core::MelnikovNormalForm;
using core::SystemFamily;
using exactalg::Interval;
using exactalg::Polynomial;
using exactalg::Rational;

// 4 (floor((n+1)/2) + m1 + m2) - 7 for distinct alphas, n for the confluent
// family; empty when the formula is negative.
inline std::optional<int> theorem_bound(const SystemFamily& family, int n) {
  if (n < 0) throw std::invalid_argument("theorem_bound: negative degree");
  const int bound = family.confluent() ? n : 4 * ((n + 1) / 2 + family.m1() + family.m2()) - 7;
  if (bound < 0) return std::nullopt;
  return bound;
}

struct Eliminant {
  Polynomial polynomial;
  // Degree of the polynomial side after the first squaring (the relation
  // sqrt(rho1 rho2) T(h) = S(h)); equals the final degree when one squaring
  // suffices.
  int intermediate_degree = 0;
  int squarings = 0;
};

// Nonzero E(h) whose roots include every zero of Phi in (0, H0).
inline Eliminant eliminate_radicals_detailed(const MelnikovNormalForm& nf) {
  if (nf.is_zero()) throw std::invalid_argument("eliminate_radicals: identically zero normal form");
  using core::rho;
  const Polynomial& P = nf.P;
  const Polynomial& Q = nf.Q;
  const Polynomial& R = nf.R;
  Eliminant out;
  auto single = [&](const Polynomial& X, const Polynomial& rh, int order) {
    // X / r^(2e-1) + R = 0  =>  X^2 = R^2 rho^(2e-1)
    if (R.is_zero()) {
      out.polynomial = X;
    } else {
      out.polynomial = X * X - R * R * pow(rh, static_cast<unsigned>(2 * order - 1));
      out.squarings = 1;
    }
    out.intermediate_degree = out.polynomial.degree();
  };
  if (P.is_zero() && Q.is_zero()) {
    out.polynomial = R;
    out.intermediate_degree = R.degree();
    return out;
  }
  const Polynomial r1 = rho(nf.family.alpha1()), r2 = rho(nf.family.alpha2());
  if (Q.is_zero()) {
    single(P, r1, nf.p_order);
    return out;
  }
  if (P.is_zero()) {
    single(Q, r2, nf.q_order);
    return out;
  }
  const Polynomial r1_odd = pow(r1, static_cast<unsigned>(2 * nf.p_order - 1));
  const Polynomial r2_odd = pow(r2, static_cast<unsigned>(2 * nf.q_order - 1));
  if (R.is_zero()) {
    // P / r1^(2a-1) = -Q / r2^(2b-1)
    out.polynomial = P * P * r2_odd - Q * Q * r1_odd;
    out.intermediate_degree = out.polynomial.degree();
    out.squarings = 1;
    return out;
  }
  // (P/r1^.. + Q/r2^..)^2 = R^2, cleared of denominators:
  //   sqrt(rho1 rho2) T = S,
  //   T = 2 P Q rho1^(a-1) rho2^(b-1),
  //   S = R^2 rho1^(2a-1) rho2^(2b-1) - P^2 rho2^(2b-1) - Q^2 rho1^(2a-1).
  const Polynomial T = (P * Q * pow(r1, static_cast<unsigned>(nf.p_order - 1)) *
                        pow(r2, static_cast<unsigned>(nf.q_order - 1)))
                           .scaled(Rational(2));
  const Polynomial S = R * R * r1_odd * r2_odd - P * P * r2_odd - Q * Q * r1_odd;
  out.intermediate_degree = std::max(S.degree(), T.degree());
  out.polynomial = T * T * r1 * r2 - S * S;
  out.squarings = 2;
  return out;
}

inline Polynomial eliminate_radicals(const MelnikovNormalForm& nf) {
  return eliminate_radicals_detailed(nf).polynomial;
}

enum class ZeroStatus { ok, identically_zero };
enum class Verdict { verified, rejected, undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::rejected: return "rejected";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

struct Candidate {
  Interval h_interval;  // isolates one root of the eliminant
  Verdict verdict = Verdict::undecided;
  int multiplicity = 1;  // of that eliminant root
};

struct CertifiedZero {
  Interval interval;  // in h, strictly inside (0, H0)
  bool sign_change_verified = false;
  int multiplicity = 1;
};

struct ZeroReport {
  ZeroStatus status = ZeroStatus::ok;
  bool confluent = false;
  Rational h0;
  std::optional<int> theorem_bound;
  Polynomial eliminant;  // in h (generic) or in r (confluent)
  char variable = 'h';
  int eliminant_degree = -1;
  int intermediate_degree = -1;
  int squarings = 0;
  int eliminant_roots = 0;  // distinct roots of the eliminant in the annulus
  std::vector<Candidate> candidates;
  std::vector<CertifiedZero> certified_zeros;
  int count_lo = 0;
  int count_hi = 0;
  bool multiple_root_flag = false;
  std::optional<int> descartes;  // sign changes of Pr/(1-r), confluent only
};

struct CountOptions {
  // Candidates still undecided at width <= cap_factor * H0 widen the range.
  Rational cap_factor = Rational(exactalg::Integer(1), exactalg::pow10(30));
  // Verified zeros are refined to width <= report_factor * H0.
  Rational report_factor = Rational(exactalg::Integer(1), exactalg::pow2(64));
};

namespace detail {

// Open interval (a, b) inside (0, h0) around the single root of `sqf` held
// by `iv`, with sqf(a), sqf(b) != 0.
inline Interval strict_isolation(const Polynomial& sqf, const exactalg::SturmSequence& sturm,
                                 const Interval& iv, const Rational& h0) {
  if (!iv.is_point()) return iv;
  const Rational x = iv.lo();
  Rational delta = exactalg::min(x, h0 - x) / Rational(2);
  for (;;) {
    const Rational a = x - delta, b = x + delta;
    if (!sqf(a).is_zero() && !sqf(b).is_zero() && sturm.count(a, b) == 1) return {a, b};
    delta /= Rational(2);
  }
}

// Bisect until the upper end lies inside the annulus, where Phi is defined.
inline Interval inside_annulus(const Polynomial& sqf, Interval iv, const Rational& h0) {
  while (!iv.is_point() && iv.hi() >= h0) {
    const Rational mid = iv.midpoint();
    const int sm = sqf.sign_at(mid);
    if (sm == 0) return Interval(mid);
    iv = sm == sqf.sign_at(iv.lo()) ? Interval(mid, iv.hi()) : Interval(iv.lo(), mid);
  }
  return iv;
}

inline long bits_for_width(const Rational& width) {
  return std::max(64L, 64 - exactalg::magnitude_bits(width));
}

inline Verdict classify(const core::RadicalSum& phi, const Polynomial& sqf, Interval iv, const Rational& cap,
                        Interval* final_interval) {
  for (;;) {
    const int sa = core::certified_sign(phi, iv.lo());
    const int sb = core::certified_sign(phi, iv.hi());
    if (sa != 0 && sb != 0 && sa != sb) {
      *final_interval = iv;
      return Verdict::verified;
    }
    if (sa != 0 && sa == sb) {
      const Interval enc = core::enclose(phi, iv, bits_for_width(iv.width()));
      if (enc.certain_sign() != 0) {
        *final_interval = iv;
        return Verdict::rejected;
      }
    }
    if (iv.width() <= cap) {
      *final_interval = iv;
      return Verdict::undecided;
    }
    const Rational mid = iv.midpoint();
    const int sm = sqf.sign_at(mid);
    if (sm == 0) {
      const Rational q = iv.width() / Rational(4);
      iv = Interval(mid - q, mid + q);
    } else if (sm == sqf.sign_at(iv.lo())) {
      iv = Interval(mid, iv.hi());
    } else {
      iv = Interval(iv.lo(), mid);
    }
  }
}

// Shrink an open isolating interval of the simple root of `sqf` by bisection.
inline Interval shrink(const Polynomial& sqf, Interval iv, const Rational& width) {
  if (iv.is_point()) return iv;
  return exactalg::refine_root(sqf, iv, width);
}

}  // namespace detail

inline ZeroReport count_zeros(const MelnikovNormalForm& nf, const CountOptions& opt = {}) {
  ZeroReport rep;
  rep.h0 = nf.family.h0();
  if (nf.degree) rep.theorem_bound = theorem_bound(nf.family, *nf.degree);
  if (nf.is_zero()) {
    rep.status = ZeroStatus::identically_zero;
    return rep;
  }
  const Eliminant el = eliminate_radicals_detailed(nf);
  rep.eliminant = el.polynomial;
  rep.eliminant_degree = el.polynomial.degree();
  rep.intermediate_degree = el.intermediate_degree;
  rep.squarings = el.squarings;
  if (el.polynomial.degree() <= 0) return rep;

  const Polynomial sqf = exactalg::squarefree_part(el.polynomial);
  const exactalg::SturmSequence sturm(sqf);
  std::vector<Interval> roots = exactalg::isolate_roots(sqf, Interval(Rational(0), rep.h0));
  // The annulus is open at H0.
  if (!roots.empty() && roots.back().is_point() && roots.back().lo() == rep.h0) roots.pop_back();
  rep.eliminant_roots = static_cast<int>(roots.size());

  const core::RadicalSum phi = core::to_radical_sum(nf);
  const Rational cap = opt.cap_factor * rep.h0;
  const Rational report_width = opt.report_factor * rep.h0;
  for (const Interval& raw : roots) {
    Candidate cand;
    cand.multiplicity = exactalg::root_multiplicity(el.polynomial, raw);
    Interval iv = detail::strict_isolation(sqf, sturm, detail::inside_annulus(sqf, raw, rep.h0), rep.h0);
    Interval settled;
    cand.verdict = detail::classify(phi, sqf, iv, cap, &settled);
    cand.h_interval = settled;
    if (cand.verdict != Verdict::rejected) {
      CertifiedZero z;
      z.sign_change_verified = cand.verdict == Verdict::verified;
      z.multiplicity = cand.multiplicity;
      z.interval = z.sign_change_verified ? detail::shrink(sqf, settled, report_width) : settled;
      rep.certified_zeros.push_back(z);
      if (cand.multiplicity > 1) rep.multiple_root_flag = true;
      ++rep.count_hi;
      if (z.sign_change_verified) ++rep.count_lo;
    }
    rep.candidates.push_back(cand);
  }
  return rep;
}

inline ZeroReport count_zeros(const ConfluentNormalForm& nf, const CountOptions& opt = {}) {
  ZeroReport rep;
  rep.confluent = true;
  rep.variable = 'r';
  rep.h0 = nf.h0();
  if (nf.degree) rep.theorem_bound = nf.degree;
  if (nf.is_zero()) {
    rep.status = ZeroStatus::identically_zero;
    return rep;
  }
  // Phi vanishes at h = 0, i.e. r = 1.
  const auto [quotient, remainder] = exactalg::divmod(nf.Pr, Polynomial({Rational(-1), Rational(1)}));
  if (!remainder.is_zero()) throw std::logic_error("count_zeros: confluent form does not vanish at r = 1");
  rep.eliminant = quotient;
  rep.eliminant_degree = quotient.degree();
  rep.intermediate_degree = quotient.degree();
  rep.descartes = exactalg::descartes_bound(quotient);
  if (quotient.degree() <= 0) return rep;

  std::vector<Interval> roots = exactalg::isolate_roots(quotient, Interval(Rational(0), Rational(1)));
  if (!roots.empty() && roots.back().is_point() && roots.back().lo() == Rational(1)) roots.pop_back();
  rep.eliminant_roots = static_cast<int>(roots.size());
  const Rational a2 = nf.alpha * nf.alpha;
  const Polynomial sqf = exactalg::squarefree_part(quotient);
  const Rational r_width = opt.report_factor;
  for (const Interval& raw : roots) {
    const Interval r_iv = raw.is_point() ? raw : exactalg::refine_root(sqf, raw, r_width);
    // h = (1 - r^2) / alpha^2 is decreasing in r.
    const Interval h_iv((Rational(1) - r_iv.hi() * r_iv.hi()) / a2, (Rational(1) - r_iv.lo() * r_iv.lo()) / a2);
    Candidate cand;
    cand.h_interval = h_iv;
    cand.multiplicity = exactalg::root_multiplicity(quotient, raw);
    cand.verdict = Verdict::verified;
    rep.candidates.push_back(cand);
    CertifiedZero z;
    z.interval = h_iv;
    z.multiplicity = cand.multiplicity;
    z.sign_change_verified = cand.multiplicity % 2 == 1;
    if (cand.multiplicity > 1) rep.multiple_root_flag = true;
    rep.certified_zeros.push_back(z);
  }
  std::reverse(rep.certified_zeros.begin(), rep.certified_zeros.end());
  std::reverse(rep.candidates.begin(), rep.candidates.end());
  rep.count_lo = rep.count_hi = static_cast<int>(rep.certified_zeros.size());
  return rep;
}

inline ZeroReport count_zeros(const core::AnyNormalForm& nf, const CountOptions& opt = {}) {
  return std::visit([&](const auto& f) { return count_zeros(f, opt); }, nf);
}

}  // namespace melnikov::zerocount
