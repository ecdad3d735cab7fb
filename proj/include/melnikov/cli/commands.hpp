#pragma once

// The five subcommands. Each builds a JSON report and renders it as text,
// JSON or CSV; the return value is the process exit status.

#include <melnikov/cli/instance.hpp>
#include <melnikov/core/assemble.hpp>
#include <melnikov/core/evaluate.hpp>
#include <melnikov/dynamics/flow.hpp>
#include <melnikov/zerocount/zeros.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace melnikov::cli {

using json = nlohmann::ordered_json;
using exactalg::Integer;
using exactalg::Interval;
using exactalg::Polynomial;

enum class Format { text, json, csv };

inline Format parse_format(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + s + "' (expected text, json or csv)");
}

struct Options {
  Format format = Format::text;
  std::optional<Rational> epsilon;
  int samples = 100;
  std::uint64_t seed = 1;
  int points = 200;
  std::optional<int> precision;
  int jobs = 1;
};

namespace detail {

inline constexpr int default_digits = 20;

inline json poly_json(const Polynomial& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(c.str());
  return {{"degree", p.degree()}, {"coefficients", coeffs}};
}

inline json family_json(const SystemFamily& f) {
  return {{"alpha1", f.alpha1().str()}, {"alpha2", f.alpha2().str()}, {"m1", f.m1()},
          {"m2", f.m2()},               {"H0", f.h0().str()},         {"confluent", f.confluent()}};
}

inline json header_json(const std::string& command, const InstanceSpec& spec) {
  return {{"command", command},
          {"family", family_json(spec.family)},
          {"n", spec.coeffs.n()},
          {"K", spec.coeffs.bound().str()}};
}

inline std::string csv_header_comment(const json& report) {
  const auto& f = report["family"];
  std::ostringstream os;
  os << "# " << report["command"].get<std::string>() << ": alpha1=" << f["alpha1"].get<std::string>()
     << " alpha2=" << f["alpha2"].get<std::string>() << " m1=" << f["m1"].get<int>() << " m2=" << f["m2"].get<int>()
     << " n=" << report["n"].get<int>() << " H0=" << f["H0"].get<std::string>() << "\n";
  return os.str();
}

inline void text_family(std::ostream& os, const json& r) {
  const auto& f = r["family"];
  os << "family         alpha1 = " << f["alpha1"].get<std::string>() << ", alpha2 = "
     << f["alpha2"].get<std::string>() << ", m1 = " << f["m1"].get<int>() << ", m2 = " << f["m2"].get<int>()
     << "\n"
     << "annulus        0 < h < H0 = " << f["H0"].get<std::string>() << "\n"
     << "perturbation   n = " << r["n"].get<int>() << ", K = " << r["K"].get<std::string>() << "\n";
}

inline std::string dec(const Rational& q, int digits) { return q.to_decimal(digits); }

inline json interval_json(const Interval& iv, int digits) {
  return {{"lo", dec(iv.lo(), digits)},
          {"hi", dec(iv.hi(), digits)},
          {"mid", dec(iv.midpoint(), digits)},
          {"width", dec(iv.width(), 3)}};
}

}  // namespace detail

// ---- normal-form ---------------------------------------------------------

inline json normal_form_report(const InstanceSpec& spec) {
  json r = detail::header_json("normal-form", spec);
  const core::AnyNormalForm any = core::assemble(spec.family, spec.coeffs);
  r["status"] = core::is_zero(any) ? "identically_zero" : "ok";
  if (const auto* nf = std::get_if<core::MelnikovNormalForm>(&any)) {
    r["form"] = "generic";
    r["merged"] = nf->merged;
    r["P_order"] = nf->p_order;
    r["Q_order"] = nf->q_order;
    r["P"] = detail::poly_json(nf->P);
    r["Q"] = detail::poly_json(nf->Q);
    r["R"] = detail::poly_json(nf->R);
    r["phi_at_zero"] = nf->value_at_zero().str();
  } else {
    const auto& cf = std::get<core::ConfluentNormalForm>(any);
    int terms = 0;
    for (const auto& c : cf.Pr.coeffs()) terms += c.is_zero() ? 0 : 1;
    r["form"] = "confluent";
    r["alpha"] = cf.alpha.str();
    r["m"] = cf.m;
    r["Pr"] = detail::poly_json(cf.Pr);
    r["Pr_at_1"] = cf.Pr(Rational(1)).str();
    r["nonzero_terms"] = terms;
  }
  return r;
}

inline void render_normal_form(const json& r, Format fmt, std::ostream& os) {
  if (fmt == Format::json) {
    os << r.dump(2) << "\n";
    return;
  }
  const bool confluent = r["form"] == "confluent";
  if (fmt == Format::csv) {
    os << detail::csv_header_comment(r) << "part,power,coefficient\n";
    for (const char* part : {"P", "Q", "R", "Pr"}) {
      if (!r.contains(part)) continue;
      const auto& c = r[part]["coefficients"];
      for (std::size_t k = 0; k < c.size(); ++k) os << part << "," << k << "," << c[k].get<std::string>() << "\n";
    }
    return;
  }
  detail::text_family(os, r);
  os << "status         " << (r["status"] == "ok" ? "ok" : "identically zero") << "\n";
  auto poly_line = [&](const char* name, char var) {
    const auto& c = r[name]["coefficients"];
    std::vector<Rational> v;
    for (const auto& s : c) v.push_back(Rational::parse(s.get<std::string>()));
    os << std::left << std::setw(15) << (std::string(name) + "(" + var + ")") << Polynomial(v).str(std::string(1, var))
       << "   [degree " << r[name]["degree"].get<int>() << "]\n";
  };
  if (confluent) {
    const int m = r["m"].get<int>();
    os << "form           Phi(h) = pi * Pr(r) / r^" << 2 * m - 1 << ",  r = sqrt(1 - alpha^2 h),  alpha = "
       << r["alpha"].get<std::string>() << ", m = " << m << "\n";
    poly_line("Pr", 'r');
    os << "Pr(1)          " << r["Pr_at_1"].get<std::string>() << "\n"
       << "nonzero terms  " << r["nonzero_terms"].get<int>() << "\n";
    return;
  }
  const int p = r["P_order"].get<int>(), q = r["Q_order"].get<int>();
  if (r["merged"].get<bool>()) {
    os << "form           Phi(h) = pi * [ P(h)/r1^" << 2 * p - 1 << " + R(h) ],  r1 = sqrt(1 - alpha1^2 h)\n"
       << "merged         yes (alpha2 = -alpha1: both radicals coincide)\n";
  } else {
    os << "form           Phi(h) = pi * [ P(h)/r1^" << 2 * p - 1 << " + Q(h)/r2^" << 2 * q - 1
       << " + R(h) ],  r_i = sqrt(1 - alpha_i^2 h)\n"
       << "merged         no\n";
  }
  poly_line("P", 'h');
  poly_line("Q", 'h');
  poly_line("R", 'h');
  os << "Phi(0)         " << r["phi_at_zero"].get<std::string>() << "\n";
}

inline int cmd_normal_form(const InstanceSpec& spec, const Options& opt, std::ostream& os) {
  render_normal_form(normal_form_report(spec), opt.format, os);
  return 0;
}

// ---- zeros ---------------------------------------------------------------

inline json zeros_json(const zerocount::ZeroReport& rep, int digits) {
  json r;
  r["status"] = rep.status == zerocount::ZeroStatus::ok ? "ok" : "identically_zero";
  r["theorem_bound"] = rep.theorem_bound ? json(*rep.theorem_bound) : json(nullptr);
  r["eliminant"] = {{"variable", std::string(1, rep.variable)},
                    {"degree", rep.eliminant_degree},
                    {"intermediate_degree", rep.intermediate_degree},
                    {"squarings", rep.squarings},
                    {"roots_in_range", rep.eliminant_roots},
                    {"coefficients", detail::poly_json(rep.eliminant)["coefficients"]}};
  if (rep.descartes) r["eliminant"]["descartes_bound"] = *rep.descartes;
  r["count_lo"] = rep.count_lo;
  r["count_hi"] = rep.count_hi;
  r["multiple_root_flag"] = rep.multiple_root_flag;
  json cands = json::array();
  for (const auto& c : rep.candidates) {
    json j = detail::interval_json(c.h_interval, digits);
    j["verdict"] = zerocount::to_string(c.verdict);
    j["multiplicity"] = c.multiplicity;
    cands.push_back(j);
  }
  r["candidates"] = cands;
  json zs = json::array();
  for (const auto& z : rep.certified_zeros) {
    json j = detail::interval_json(z.interval, digits);
    j["sign_change_verified"] = z.sign_change_verified;
    j["multiplicity"] = z.multiplicity;
    zs.push_back(j);
  }
  r["zeros"] = zs;
  return r;
}

inline json zeros_report(const InstanceSpec& spec, int digits) {
  json r = detail::header_json("zeros", spec);
  const auto rep = zerocount::count_zeros(core::assemble(spec.family, spec.coeffs));
  r.update(zeros_json(rep, digits));
  return r;
}

inline void render_zeros(const json& r, Format fmt, std::ostream& os) {
  if (fmt == Format::json) {
    os << r.dump(2) << "\n";
    return;
  }
  if (fmt == Format::csv) {
    os << detail::csv_header_comment(r) << "index,h_lo,h_hi,h_mid,width,sign_change_verified,multiplicity\n";
    int k = 0;
    for (const auto& z : r["zeros"])
      os << ++k << "," << z["lo"].get<std::string>() << "," << z["hi"].get<std::string>() << ","
         << z["mid"].get<std::string>() << "," << z["width"].get<std::string>() << ","
         << (z["sign_change_verified"].get<bool>() ? "true" : "false") << "," << z["multiplicity"].get<int>() << "\n";
    return;
  }
  detail::text_family(os, r);
  os << "theorem bound  " << (r["theorem_bound"].is_null() ? "none" : std::to_string(r["theorem_bound"].get<int>()))
     << "\n";
  if (r["status"] != "ok") {
    os << "status         identically zero (no finite zero count)\n";
    return;
  }
  const auto& e = r["eliminant"];
  os << "eliminant      degree " << e["degree"].get<int>() << " in " << e["variable"].get<std::string>();
  if (e["variable"] == "h")
    os << " (intermediate degree " << e["intermediate_degree"].get<int>() << ", squarings "
       << e["squarings"].get<int>() << ")";
  else
    os << " (Descartes bound " << e["descartes_bound"].get<int>() << ")";
  os << "\n";
  std::map<std::string, int> verdicts;
  for (const auto& c : r["candidates"]) ++verdicts[c["verdict"].get<std::string>()];
  os << "candidates     " << e["roots_in_range"].get<int>() << " eliminant roots in range: " << verdicts["verified"]
     << " verified, " << verdicts["rejected"] << " rejected, " << verdicts["undecided"] << " undecided\n";
  const int lo = r["count_lo"].get<int>(), hi = r["count_hi"].get<int>();
  os << "zero count     " << (lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi));
  if (r["multiple_root_flag"].get<bool>()) os << "  (multiple eliminant root present)";
  os << "\n";
  int k = 0;
  for (const auto& z : r["zeros"]) {
    os << "  zero " << ++k << "       h in [" << z["lo"].get<std::string>() << ", " << z["hi"].get<std::string>()
       << "]  " << (z["sign_change_verified"].get<bool>() ? "sign change verified" : "undecided");
    if (z["multiplicity"].get<int>() > 1) os << ", multiplicity " << z["multiplicity"].get<int>();
    os << "\n";
  }
}

inline int cmd_zeros(const InstanceSpec& spec, const Options& opt, std::ostream& os) {
  render_zeros(zeros_report(spec, opt.precision.value_or(spec.run.precision.value_or(detail::default_digits))),
               opt.format, os);
  return 0;
}

// ---- verify --------------------------------------------------------------

struct VerifyOutcome {
  json report;
  bool matched = false;
};

inline VerifyOutcome verify_report(const InstanceSpec& spec, const Options& opt) {
  const std::optional<Rational> eps = opt.epsilon ? opt.epsilon : spec.run.epsilon;
  if (!eps) throw SpecError(0, "eps", "verify needs an epsilon (spec [run] eps or --eps)");
  if (eps->sign() <= 0) throw SpecError(0, "eps", "must be positive");
  const int digits = opt.precision.value_or(spec.run.precision.value_or(detail::default_digits));
  const Rational h0 = spec.family.h0();
  const double lo_frac = spec.run.grid_lo.value_or(Rational(1, 50)).to_double();
  const double hi_frac = spec.run.grid_hi.value_or(Rational(9, 10)).to_double();
  if (!(lo_frac < hi_frac)) throw SpecError(0, "grid_lo", "must be below grid_hi");
  const int points = spec.run.grid_points.value_or(40);
  const double h0d = h0.to_double();
  const double tolerance = 5e-3 * h0d;
  const auto grid = dynamics::uniform_grid(h0d, points, lo_frac, hi_frac);

  json r = detail::header_json("verify", spec);
  const auto zrep = zerocount::count_zeros(core::assemble(spec.family, spec.coeffs));
  r["phi_status"] = zrep.status == zerocount::ZeroStatus::ok ? "ok" : "identically_zero";
  r["count_lo"] = zrep.count_lo;
  r["count_hi"] = zrep.count_hi;
  r["window"] = {{"lo", grid.front()}, {"hi", grid.back()}, {"points", points}};
  r["tolerance"] = tolerance;

  // Zeros inside the scanned window are the ones the flow can confirm.
  std::vector<const zerocount::CertifiedZero*> in_window;
  json outside = json::array();
  for (const auto& z : zrep.certified_zeros) {
    const double mid = z.interval.midpoint().to_double();
    if (mid >= grid.front() && mid <= grid.back()) {
      in_window.push_back(&z);
    } else {
      outside.push_back(detail::interval_json(z.interval, digits));
    }
  }
  r["zeros_outside_window"] = outside;

  auto distance = [](const Interval& iv, double x) {
    const double lo = iv.lo().to_double(), hi = iv.hi().to_double();
    return x < lo ? lo - x : (x > hi ? x - hi : 0.0);
  };
  const bool phi_zero = zrep.status != zerocount::ZeroStatus::ok;
  const bool decided = zrep.count_lo == zrep.count_hi;
  const bool trivial = spec.coeffs.all_zero();
  dynamics::FlowConfig cfg;
  cfg.epsilon = eps->to_double();
  json attempts = json::array();
  bool matched = false;
  json rows = json::array();
  for (int attempt = 0; attempt < 2 && !matched; ++attempt) {
    const auto cycles = dynamics::find_limit_cycles(spec.family, spec.coeffs, cfg, grid);
    json a = {{"epsilon", cfg.epsilon}, {"cycles", cycles.cycles.size()}, {"resolution", cycles.resolution}};
    json failures = json::array();
    for (const auto& f : cycles.failures) failures.push_back({{"h", f.h}, {"reason", f.reason}});
    a["failures"] = failures;
    rows = json::array();
    bool ok = decided && !phi_zero && cycles.cycles.size() == in_window.size();
    const std::size_t n = std::max(cycles.cycles.size(), in_window.size());
    for (std::size_t k = 0; k < n; ++k) {
      json row;
      row["index"] = k + 1;
      if (k < in_window.size()) row["zero"] = detail::interval_json(in_window[k]->interval, digits);
      if (k < cycles.cycles.size()) {
        row["cycle_h"] = cycles.cycles[k].h_label;
        row["stability"] = dynamics::to_string(cycles.cycles[k].stability);
      }
      bool row_ok = false;
      if (k < in_window.size() && k < cycles.cycles.size()) {
        const double d = distance(in_window[k]->interval, cycles.cycles[k].h_label);
        row["distance"] = d;
        row_ok = d <= tolerance;
      }
      row["match"] = row_ok;
      ok = ok && row_ok;
      rows.push_back(row);
    }
    if (phi_zero && trivial) ok = cycles.cycles.empty();
    a["matched"] = ok;
    attempts.push_back(a);
    matched = ok;
    if (!decided || (phi_zero && !trivial)) break;
    cfg.epsilon /= 2;
  }
  r["attempts"] = attempts;
  r["rows"] = rows;
  if (phi_zero && !trivial) {
    r["verdict"] = "not_applicable";
    matched = true;
  } else if (!decided) {
    r["verdict"] = "inconclusive";
  } else {
    r["verdict"] = matched ? "match" : "mismatch";
  }
  return {r, matched};
}

inline void render_verify(const json& r, Format fmt, std::ostream& os) {
  if (fmt == Format::json) {
    os << r.dump(2) << "\n";
    return;
  }
  auto cell = [](const json& row, const char* key) -> std::string {
    if (!row.contains(key)) return "-";
    if (row[key].is_object()) return row[key]["mid"].get<std::string>();
    if (row[key].is_string()) return row[key].get<std::string>();
    std::ostringstream s;
    s << std::setprecision(8) << row[key].get<double>();
    return s.str();
  };
  if (fmt == Format::csv) {
    os << detail::csv_header_comment(r) << "index,zero_h_lo,zero_h_hi,cycle_h,distance,stability,match\n";
    for (const auto& row : r["rows"])
      os << row["index"].get<int>() << "," << (row.contains("zero") ? row["zero"]["lo"].get<std::string>() : "")
         << "," << (row.contains("zero") ? row["zero"]["hi"].get<std::string>() : "") << ","
         << (row.contains("cycle_h") ? cell(row, "cycle_h") : "") << ","
         << (row.contains("distance") ? cell(row, "distance") : "") << ","
         << (row.contains("stability") ? row["stability"].get<std::string>() : "") << ","
         << (row["match"].get<bool>() ? "true" : "false") << "\n";
    return;
  }
  detail::text_family(os, r);
  os << "Phi            " << (r["phi_status"] == "ok" ? "ok" : "identically zero") << ", certified zeros "
     << r["count_lo"].get<int>();
  if (r["count_hi"] != r["count_lo"]) os << ".." << r["count_hi"].get<int>();
  os << "\n"
     << "scan window    [" << r["window"]["lo"].get<double>() << ", " << r["window"]["hi"].get<double>() << "], "
     << r["window"]["points"].get<int>() << " points, match tolerance " << r["tolerance"].get<double>() << "\n";
  for (const auto& a : r["attempts"]) {
    os << "attempt        eps = " << a["epsilon"].get<double>() << ": " << a["cycles"].get<int>()
       << " cycles detected, " << (a["matched"].get<bool>() ? "match" : "no match") << "\n";
    for (const auto& f : a["failures"])
      os << "  integration failure at h = " << f["h"].get<double>() << ": " << f["reason"].get<std::string>() << "\n";
  }
  if (!r["zeros_outside_window"].empty())
    os << "note           " << r["zeros_outside_window"].size() << " certified zero(s) outside the scan window\n";
  os << "\n"
     << std::left << std::setw(4) << "#" << std::setw(28) << "certified zero (mid)" << std::setw(16) << "cycle h"
     << std::setw(16) << "distance" << std::setw(12) << "stability"
     << "match\n";
  for (const auto& row : r["rows"])
    os << std::setw(4) << row["index"].get<int>() << std::setw(28) << cell(row, "zero") << std::setw(16)
       << cell(row, "cycle_h") << std::setw(16) << cell(row, "distance") << std::setw(12) << cell(row, "stability")
       << (row["match"].get<bool>() ? "yes" : "no") << "\n";
  os << "\nverdict        " << r["verdict"].get<std::string>() << "\n";
}

inline int cmd_verify(const InstanceSpec& spec, const Options& opt, std::ostream& os) {
  const auto out = verify_report(spec, opt);
  render_verify(out.report, opt.format, os);
  return out.matched ? 0 : 2;
}

// ---- scan ----------------------------------------------------------------

namespace detail {

// Uniform integer in [0, range) by rejection; identical on every platform.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t range) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % range;
  }
}

}  // namespace detail

inline constexpr unsigned scan_denominator_bits = 20;

// Coefficient samples: every a_ij and b_ij is k / 2^20 with |k| <= K 2^20.
inline std::vector<PerturbCoeffs> draw_samples(int n, const Rational& bound, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Integer denom = exactalg::pow2(scan_denominator_bits);
  const Integer top = exactalg::floor(bound * Rational(denom));
  if (!top.fits_slong_p() || top > Integer(1L << 40)) throw std::invalid_argument("scan: K too large");
  const long kmax = top.get_si();
  const auto range = static_cast<std::uint64_t>(2 * kmax + 1);
  std::vector<PerturbCoeffs> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    PerturbCoeffs c(n, bound);
    for (int d = 0; d <= n; ++d) {
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        const long ka = static_cast<long>(detail::uniform_below(rng, range)) - kmax;
        const long kb = static_cast<long>(detail::uniform_below(rng, range)) - kmax;
        c.set_a(i, j, Rational(Integer(ka), denom));
        c.set_b(i, j, Rational(Integer(kb), denom));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct ScanRow {
  std::string status;
  int count_lo = 0, count_hi = 0;
  int eliminant_degree = -1;
  int eliminant_roots = 0;
  bool multiple_root = false;
  bool within_bound = true;
  std::string error;
};

inline json scan_report(const InstanceSpec& spec, const Options& opt) {
  if (opt.samples < 1) throw std::invalid_argument("scan: samples must be at least 1");
  const auto samples = draw_samples(spec.coeffs.n(), spec.coeffs.bound(), opt.samples, opt.seed);
  const auto bound = zerocount::theorem_bound(spec.family, spec.coeffs.n());
  std::vector<ScanRow> rows(samples.size());
  auto work = [&](std::size_t k) {
    ScanRow& row = rows[k];
    try {
      const auto rep = zerocount::count_zeros(core::assemble(spec.family, samples[k]));
      row.status = rep.status == zerocount::ZeroStatus::ok ? "ok" : "identically_zero";
      row.count_lo = rep.count_lo;
      row.count_hi = rep.count_hi;
      row.eliminant_degree = rep.eliminant_degree;
      row.eliminant_roots = rep.eliminant_roots;
      row.multiple_root = rep.multiple_root_flag;
      row.within_bound = !bound || rep.count_hi <= *bound;
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
      row.within_bound = false;
    }
  };
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
  if (jobs == 1) {
    for (std::size_t k = 0; k < rows.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < rows.size(); k += jobs) work(k);
      });
    for (auto& t : pool) t.join();
  }

  json r = detail::header_json("scan", spec);
  r["samples"] = opt.samples;
  r["seed"] = opt.seed;
  r["denominator"] = "2^" + std::to_string(scan_denominator_bits);
  r["theorem_bound"] = bound ? json(*bound) : json(nullptr);
  int max_hi = 0, violations = 0, zero = 0, errors = 0;
  std::map<int, int> histogram;
  json jrows = json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    max_hi = std::max(max_hi, row.count_hi);
    violations += row.within_bound ? 0 : 1;
    zero += row.status == "identically_zero" ? 1 : 0;
    errors += row.status == "error" ? 1 : 0;
    if (row.status == "ok") ++histogram[row.count_hi];
    json j = {{"sample", k + 1},
              {"status", row.status},
              {"count_lo", row.count_lo},
              {"count_hi", row.count_hi},
              {"eliminant_degree", row.eliminant_degree},
              {"eliminant_roots", row.eliminant_roots},
              {"multiple_root", row.multiple_root},
              {"within_bound", row.within_bound}};
    if (!row.error.empty()) j["error"] = row.error;
    jrows.push_back(j);
  }
  json hist = json::object();
  for (const auto& [c, k] : histogram) hist[std::to_string(c)] = k;
  r["max_count"] = max_hi;
  r["count_histogram"] = hist;
  r["identically_zero"] = zero;
  r["errors"] = errors;
  r["violations"] = violations;
  r["rows"] = jrows;
  return r;
}

inline void write_scan_csv(const json& r, std::ostream& os) {
  os << detail::csv_header_comment(r)
     << "sample,status,count_lo,count_hi,theorem_bound,eliminant_degree,eliminant_roots,multiple_root,within_bound\n";
  const std::string bound = r["theorem_bound"].is_null() ? "" : std::to_string(r["theorem_bound"].get<int>());
  for (const auto& row : r["rows"])
    os << row["sample"].get<int>() << "," << row["status"].get<std::string>() << "," << row["count_lo"].get<int>()
       << "," << row["count_hi"].get<int>() << "," << bound << "," << row["eliminant_degree"].get<int>() << ","
       << row["eliminant_roots"].get<int>() << "," << (row["multiple_root"].get<bool>() ? "true" : "false") << ","
       << (row["within_bound"].get<bool>() ? "true" : "false") << "\n";
}

inline void render_scan(const json& r, Format fmt, std::ostream& os) {
  if (fmt == Format::json) {
    os << r.dump(2) << "\n";
    return;
  }
  if (fmt == Format::csv) {
    write_scan_csv(r, os);
    return;
  }
  detail::text_family(os, r);
  os << "samples        " << r["samples"].get<int>() << " (seed " << r["seed"].get<std::uint64_t>()
     << ", coefficients k/" << r["denominator"].get<std::string>() << " in [-K, K])\n"
     << "theorem bound  "
     << (r["theorem_bound"].is_null() ? "none" : std::to_string(r["theorem_bound"].get<int>())) << "\n"
     << "max count      " << r["max_count"].get<int>() << "\n"
     << "histogram     ";
  for (const auto& [c, k] : r["count_histogram"].items()) os << " " << c << ":" << k.get<int>();
  os << "\n"
     << "identically 0  " << r["identically_zero"].get<int>() << "\n"
     << "errors         " << r["errors"].get<int>() << "\n"
     << "violations     " << r["violations"].get<int>() << "\n";
}

inline int cmd_scan(const InstanceSpec& spec, const Options& opt, std::ostream& os, std::ostream* data = nullptr) {
  const json r = scan_report(spec, opt);
  render_scan(r, opt.format, os);
  if (data) write_scan_csv(r, *data);
  return r["violations"].get<int>() == 0 && r["errors"].get<int>() == 0 ? 0 : 2;
}

// ---- sample-curve --------------------------------------------------------

inline json sample_curve_report(const InstanceSpec& spec, int points, int digits) {
  if (points < 2) throw std::invalid_argument("sample-curve: points must be at least 2");
  const core::AnyNormalForm nf = core::assemble(spec.family, spec.coeffs);
  const Rational top = spec.family.h0() * Rational(999, 1000);
  json r = detail::header_json("sample-curve", spec);
  r["status"] = core::is_zero(nf) ? "identically_zero" : "ok";
  r["points"] = points;
  json rows = json::array();
  for (int k = 1; k <= points; ++k) {
    const Rational h = top * Rational(k, points + 1);
    const Interval v = std::visit([&](const auto& f) { return core::evaluate_normal_form(f, h, digits); }, nf);
    rows.push_back({{"h", detail::dec(h, digits)},
                    {"phi", detail::dec(v.midpoint(), digits)},
                    {"phi_width", detail::dec(v.width(), 3)}});
  }
  r["rows"] = rows;
  return r;
}

inline void render_sample_curve(const json& r, Format fmt, std::ostream& os) {
  if (fmt == Format::json) {
    os << r.dump(2) << "\n";
    return;
  }
  os << detail::csv_header_comment(r);
  if (r["status"] != "ok") os << "# status: identically zero\n";
  os << "h,phi,phi_width\n";
  for (const auto& row : r["rows"])
    os << row["h"].get<std::string>() << "," << row["phi"].get<std::string>() << ","
       << row["phi_width"].get<std::string>() << "\n";
}

inline int cmd_sample_curve(const InstanceSpec& spec, const Options& opt, std::ostream& os) {
  const int digits = opt.precision.value_or(spec.run.precision.value_or(detail::default_digits));
  render_sample_curve(sample_curve_report(spec, opt.points, digits), opt.format, os);
  return 0;
}

}  // namespace melnikov::cli
