#include "support.hpp"

#include <melnikov/cli/commands.hpp>
#include <melnikov/zerocount/prescribe.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using melnikov::cli::Format;
using melnikov::cli::InstanceSpec;
using melnikov::cli::Options;
using melnikov::exactalg::Rational;

namespace {

InstanceSpec sample(const std::string& name) { return melnikov::cli::load_instance(support::source_path("samples/" + name + ".spec")); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <typename F>
std::pair<int, std::string> run(F&& f) {
  std::ostringstream os;
  const int code = f(os);
  return {code, os.str()};
}

Options with_format(Format f) {
  Options o;
  o.format = f;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MELNIKOV_CLI) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(NormalFormCommand, MatchesGoldenFile) {
  const auto [code, out] = run([](std::ostream& os) { return melnikov::cli::cmd_normal_form(sample("n2_m11"), {}, os); });
  EXPECT_EQ(code, 0);
  EXPECT_EQ(out, read_file(support::source_path("tests/golden/normal_form_n2_m11.txt")));
}

TEST(NormalFormCommand, ZeroAndConfluentStatus) {
  const auto zero = melnikov::cli::normal_form_report(sample("zero"));
  EXPECT_EQ(zero["status"], "identically_zero");
  const auto conf = melnikov::cli::normal_form_report(sample("confluent_n3"));
  EXPECT_EQ(conf["form"], "confluent");
  EXPECT_EQ(conf["Pr_at_1"], "0");
  const auto [code, text] = run([](std::ostream& os) { return melnikov::cli::cmd_normal_form(sample("confluent_n3"), {}, os); });
  EXPECT_NE(text.find("Pr(1)          0"), std::string::npos);
  const auto merged = melnikov::cli::normal_form_report(sample("mirrored"));
  EXPECT_TRUE(merged["merged"].get<bool>());
}

TEST(NormalFormCommand, CsvAndJsonMirrorCoefficients) {
  const auto r = melnikov::cli::normal_form_report(sample("n2_m11"));
  const auto [c1, csv] = run([](std::ostream& os) { return melnikov::cli::cmd_normal_form(sample("n2_m11"), with_format(Format::csv), os); });
  for (const auto& coeff : r["P"]["coefficients"]) EXPECT_NE(csv.find(coeff.get<std::string>()), std::string::npos);
  const auto [c2, js] = run([](std::ostream& os) { return melnikov::cli::cmd_normal_form(sample("n2_m11"), with_format(Format::json), os); });
  EXPECT_EQ(melnikov::cli::json::parse(js), r);
}

TEST(ZerosCommand, PrescribedInstance) {
  const auto r = melnikov::cli::zeros_report(sample("two_zeros"), 20);
  EXPECT_EQ(r["count_lo"], 2);
  EXPECT_EQ(r["count_hi"], 2);
  EXPECT_EQ(r["theorem_bound"], 5);
  EXPECT_EQ(r["zeros"].size(), 2u);
  const auto conf = melnikov::cli::zeros_report(sample("confluent_n3"), 20);
  EXPECT_EQ(conf["theorem_bound"], 3);
  const auto zero = melnikov::cli::zeros_report(sample("zero"), 20);
  EXPECT_EQ(zero["status"], "identically_zero");
}

TEST(VerifyCommand, TwoZeroInstanceMatches) {
  const auto out = melnikov::cli::verify_report(sample("two_zeros"), {});
  EXPECT_TRUE(out.matched);
  EXPECT_EQ(out.report["rows"].size(), 2u);
  for (const auto& row : out.report["rows"]) EXPECT_TRUE(row["match"].get<bool>());
}

TEST(VerifyCommand, ZeroPerturbationHasNoCycles) {
  InstanceSpec s = sample("n2_m11");
  s.coeffs = melnikov::core::PerturbCoeffs(2, Rational(1));
  Options o;
  o.epsilon = Rational(1, 1000);
  const auto out = melnikov::cli::verify_report(s, o);
  EXPECT_TRUE(out.matched);
  EXPECT_EQ(out.report["attempts"][0]["cycles"], 0);
}

TEST(VerifyCommand, MismatchGivesNonzeroExit) {
  // Two zeros inside one grid cell: the scan cannot see them.
  InstanceSpec s = sample("two_zeros");
  s.coeffs = melnikov::zerocount::prescribe_zeros(s.family, 2, {Rational(1), Rational(21, 20)});
  s.run.grid_points = 10;
  const auto [code, text] = run([&](std::ostream& os) { return melnikov::cli::cmd_verify(s, {}, os); });
  EXPECT_NE(code, 0);
  EXPECT_NE(text.find("mismatch"), std::string::npos);
  EXPECT_EQ(melnikov::cli::verify_report(s, {}).report["attempts"].size(), 2u);
}

TEST(VerifyCommand, RequiresEpsilon) {
  EXPECT_THROW(melnikov::cli::verify_report(sample("n2_m11"), {}), melnikov::cli::SpecError);
}

TEST(ScanCommand, DeterministicAndWithinBound) {
  Options o;
  o.samples = 12;
  o.seed = 7;
  o.format = Format::json;
  const auto [c1, first] = run([&](std::ostream& os) { return melnikov::cli::cmd_scan(sample("n2_m11"), o, os); });
  const auto [c2, second] = run([&](std::ostream& os) { return melnikov::cli::cmd_scan(sample("n2_m11"), o, os); });
  o.jobs = 3;
  const auto [c3, threaded] = run([&](std::ostream& os) { return melnikov::cli::cmd_scan(sample("n2_m11"), o, os); });
  EXPECT_EQ(c1, 0);
  EXPECT_EQ(first, second);
  EXPECT_EQ(first, threaded);
  const auto r = melnikov::cli::json::parse(first);
  EXPECT_EQ(r["rows"].size(), 12u);
  for (const auto& row : r["rows"]) EXPECT_LE(row["count_hi"].get<int>(), 5);
}

TEST(ScanCommand, SamplesAreDyadicAndInTheBox) {
  const auto samples = melnikov::cli::draw_samples(3, Rational(1, 2), 20, 99);
  for (const auto& c : samples) {
    EXPECT_LE(c.max_abs(), Rational(1, 2));
    for (const auto& [k, v] : c.a_entries()) EXPECT_EQ((v * Rational(1 << 20)).is_integer(), true);
  }
  EXPECT_EQ(melnikov::cli::draw_samples(3, Rational(1), 5, 4), melnikov::cli::draw_samples(3, Rational(1), 5, 4));
  EXPECT_NE(melnikov::cli::draw_samples(3, Rational(1), 5, 4), melnikov::cli::draw_samples(3, Rational(1), 5, 5));
}

TEST(SampleCurveCommand, MatchesQuadrature) {
  const InstanceSpec s = sample("n2_m11");
  const auto r = melnikov::cli::sample_curve_report(s, 15, 20);
  ASSERT_EQ(r["rows"].size(), 15u);
  const auto inst = support::to_oracle(s.family, s.coeffs);
  for (const auto& row : r["rows"]) {
    const double h = std::stod(row["h"].get<std::string>());
    const double phi = std::stod(row["phi"].get<std::string>());
    EXPECT_GT(h, 0.0);
    EXPECT_LT(h, s.family.h0().to_double() * 0.999 + 1e-12);
    EXPECT_NEAR(phi, static_cast<double>(oracle::melnikov(inst, h)), 1e-9 * std::max(1.0, std::fabs(phi)));
  }
  const auto [code, csv] = run([&](std::ostream& os) {
    Options o;
    o.points = 4;
    return melnikov::cli::cmd_sample_curve(s, o, os);
  });
  EXPECT_NE(csv.find("h,phi,phi_width\n"), std::string::npos);
}

TEST(SampleCurveCommand, ZeroInstanceIsFlat) {
  Options o;
  o.points = 6;
  const auto [code, csv] = run([&](std::ostream& os) { return melnikov::cli::cmd_sample_curve(sample("zero"), o, os); });
  EXPECT_NE(csv.find("# status: identically zero"), std::string::npos);
  const auto r = melnikov::cli::sample_curve_report(sample("zero"), 6, 20);
  for (const auto& row : r["rows"]) EXPECT_EQ(Rational::parse(row["phi"].get<std::string>()), Rational(0));
}

TEST(SampleCurveCommand, NoSignChangeWithoutZeros) {
  const InstanceSpec s = sample("n2_m11");
  ASSERT_EQ(melnikov::cli::zeros_report(s, 20)["count_hi"], 0);
  const auto r = melnikov::cli::sample_curve_report(s, 50, 20);
  int sign = 0;
  for (const auto& row : r["rows"]) {
    const int now = Rational::parse(row["phi"].get<std::string>()).sign();
    if (sign != 0) EXPECT_EQ(now, sign);
    sign = now;
  }
}

TEST(Cli, ExitStatuses) {
  const std::string spec = support::source_path("samples/two_zeros.spec");
  EXPECT_EQ(run_cli("normal-form --spec " + spec), 0);
  EXPECT_EQ(run_cli("zeros --spec " + spec + " --format json"), 0);
  EXPECT_EQ(run_cli("verify --spec " + spec), 0);
  EXPECT_EQ(run_cli("sample-curve --spec " + spec + " --points 3 --format csv"), 0);
  EXPECT_EQ(run_cli("scan --spec " + spec + " --samples 2 --seed 3"), 0);
  EXPECT_NE(run_cli("zeros --spec " + support::source_path("tests/golden/normal_form_n2_m11.txt")), 0);
  EXPECT_NE(run_cli("zeros --spec " + spec + " --format yaml"), 0);
  EXPECT_NE(run_cli("bogus"), 0);
}
