#pragma once

// Instance description files.
//
//   # comments start with '#'
//   [family]
//   alpha1 = 1/2
//   alpha2 = -1/3
//   m1 = 1
//   m2 = 1
//
//   [perturbation]
//   n = 2
//   K = 1
//   a[0,0] = 1
//   b[0,1] = -0.75
//
//   [run]
//   eps = 1/1000
//   precision = 30
//   grid = 60
//   grid_lo = 1/50
//   grid_hi = 9/10
//
// Every number is read exactly: "p/q" or a decimal string.

#include <melnikov/core/family.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace melnikov::cli {

using core::PerturbCoeffs;
using core::SystemFamily;
using exactalg::Rational;

class SpecError : public std::runtime_error {
 public:
  SpecError(int line, const std::string& field, const std::string& message)
      : std::runtime_error(format(line, field, message)), line_(line), field_(field) {}
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  static std::string format(int line, const std::string& field, const std::string& message) {
    std::string out = "spec";
    if (line > 0) out += " line " + std::to_string(line);
    if (!field.empty()) out += " field '" + field + "'";
    return out + ": " + message;
  }
  int line_;
  std::string field_;
};

struct RunSettings {
  std::optional<Rational> epsilon;
  std::optional<int> precision;
  std::optional<int> grid_points;
  std::optional<Rational> grid_lo;
  std::optional<Rational> grid_hi;

  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct InstanceSpec {
  SystemFamily family;
  PerturbCoeffs coeffs;
  RunSettings run;

  friend bool operator==(const InstanceSpec& a, const InstanceSpec& b) {
    return a.family == b.family && a.coeffs == b.coeffs && a.run == b.run;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline int parse_int(const std::string& v, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw SpecError(line, field, "expected an integer, got '" + v + "'");
  }
}

inline Rational parse_rational(const std::string& v, int line, const std::string& field) {
  try {
    return Rational::parse(v);
  } catch (const std::exception&) {
    throw SpecError(line, field, "expected a rational number, got '" + v + "'");
  }
}

}  // namespace detail

inline InstanceSpec parse_instance(std::istream& in) {
  struct Entry {
    bool is_a;
    int i, j;
    Rational v;
    int line;
    std::string field;
  };
  std::optional<Rational> alpha1, alpha2, bound;
  std::optional<int> m1, m2, n;
  RunSettings run;
  std::vector<Entry> entries;
  std::string section, raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = detail::trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[' && text.back() == ']') {
      section = detail::trim(text.substr(1, text.size() - 2));
      if (section != "family" && section != "perturbation" && section != "run")
        throw SpecError(line, "", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw SpecError(line, "", "expected 'key = value'");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (value.empty()) throw SpecError(line, key, "missing value");
    if (section == "family") {
      if (key == "alpha1") alpha1 = detail::parse_rational(value, line, key);
      else if (key == "alpha2") alpha2 = detail::parse_rational(value, line, key);
      else if (key == "m1") m1 = detail::parse_int(value, line, key);
      else if (key == "m2") m2 = detail::parse_int(value, line, key);
      else throw SpecError(line, key, "unknown key in [family]");
    } else if (section == "perturbation") {
      if (key == "n") {
        n = detail::parse_int(value, line, key);
      } else if (key == "K") {
        bound = detail::parse_rational(value, line, key);
      } else if ((key.front() == 'a' || key.front() == 'b') && key.size() > 4 && key[1] == '[' && key.back() == ']') {
        const std::string idx = key.substr(2, key.size() - 3);
        const auto comma = idx.find(',');
        if (comma == std::string::npos) throw SpecError(line, key, "expected a[i,j] or b[i,j]");
        entries.push_back({key.front() == 'a', detail::parse_int(detail::trim(idx.substr(0, comma)), line, key),
                           detail::parse_int(detail::trim(idx.substr(comma + 1)), line, key),
                           detail::parse_rational(value, line, key), line, key});
      } else {
        throw SpecError(line, key, "unknown key in [perturbation]");
      }
    } else if (section == "run") {
      if (key == "eps") run.epsilon = detail::parse_rational(value, line, key);
      else if (key == "precision") run.precision = detail::parse_int(value, line, key);
      else if (key == "grid") run.grid_points = detail::parse_int(value, line, key);
      else if (key == "grid_lo") run.grid_lo = detail::parse_rational(value, line, key);
      else if (key == "grid_hi") run.grid_hi = detail::parse_rational(value, line, key);
      else throw SpecError(line, key, "unknown key in [run]");
    } else {
      throw SpecError(line, key, "entry outside any section");
    }
  }
  auto need = [](bool present, const char* field) {
    if (!present) throw SpecError(0, field, "missing required field");
  };
  need(alpha1.has_value(), "alpha1");
  need(alpha2.has_value(), "alpha2");
  need(m1.has_value(), "m1");
  need(m2.has_value(), "m2");
  need(n.has_value(), "n");
  if (!bound) bound = Rational(1);
  if (alpha1->is_zero()) throw SpecError(0, "alpha1", "must be nonzero");
  if (alpha2->is_zero()) throw SpecError(0, "alpha2", "must be nonzero");
  if (*m1 < 1) throw SpecError(0, "m1", "must be a positive integer");
  if (*m2 < 1) throw SpecError(0, "m2", "must be a positive integer");
  if (*n < 0) throw SpecError(0, "n", "must be nonnegative");
  if (bound->sign() <= 0) throw SpecError(0, "K", "must be positive");
  if (run.precision && *run.precision < 1) throw SpecError(0, "precision", "must be positive");
  if (run.grid_points && *run.grid_points < 2) throw SpecError(0, "grid", "needs at least two points");
  if (run.grid_lo && (run.grid_lo->sign() <= 0 || *run.grid_lo >= Rational(1)))
    throw SpecError(0, "grid_lo", "must lie in (0, 1)");
  if (run.grid_hi && (run.grid_hi->sign() <= 0 || *run.grid_hi >= Rational(1)))
    throw SpecError(0, "grid_hi", "must lie in (0, 1)");

  SystemFamily family(*alpha1, *alpha2, *m1, *m2);
  PerturbCoeffs coeffs(*n, *bound);
  for (const auto& e : entries) {
    try {
      if (e.is_a) {
        coeffs.set_a(e.i, e.j, e.v);
      } else {
        coeffs.set_b(e.i, e.j, e.v);
      }
    } catch (const std::out_of_range& ex) {
      throw SpecError(e.line, e.field, ex.what());
    }
  }
  return {std::move(family), std::move(coeffs), run};
}

inline InstanceSpec parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(0, "", "cannot open '" + path + "'");
  return parse_instance(in);
}

// Canonical text form; parse_instance(serialize_instance(s)) == s.
inline std::string serialize_instance(const InstanceSpec& spec) {
  std::ostringstream os;
  os << "[family]\n"
     << "alpha1 = " << spec.family.alpha1().to_exact_string() << "\n"
     << "alpha2 = " << spec.family.alpha2().to_exact_string() << "\n"
     << "m1 = " << spec.family.m1() << "\n"
     << "m2 = " << spec.family.m2() << "\n\n"
     << "[perturbation]\n"
     << "n = " << spec.coeffs.n() << "\n"
     << "K = " << spec.coeffs.bound().to_exact_string() << "\n";
  for (const auto& [k, v] : spec.coeffs.a_entries()) os << "a[" << k.first << "," << k.second << "] = " << v.to_exact_string() << "\n";
  for (const auto& [k, v] : spec.coeffs.b_entries()) os << "b[" << k.first << "," << k.second << "] = " << v.to_exact_string() << "\n";
  const auto& r = spec.run;
  if (r.epsilon || r.precision || r.grid_points || r.grid_lo || r.grid_hi) {
    os << "\n[run]\n";
    if (r.epsilon) os << "eps = " << r.epsilon->to_exact_string() << "\n";
    if (r.precision) os << "precision = " << *r.precision << "\n";
    if (r.grid_points) os << "grid = " << *r.grid_points << "\n";
    if (r.grid_lo) os << "grid_lo = " << r.grid_lo->to_exact_string() << "\n";
    if (r.grid_hi) os << "grid_hi = " << r.grid_hi->to_exact_string() << "\n";
  }
  return os.str();
}

}  // namespace melnikov::cli
