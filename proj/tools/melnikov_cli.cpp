#include <melnikov/cli/commands.hpp>
#include <melnikov/zerocount/prescribe.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace melnikov;

struct Args {
  std::string spec_path;
  std::string out_path;
  std::string data_path;
  std::string format = "text";
  std::string eps;
  std::string targets;
  int samples = 100;
  std::uint64_t seed = 1;
  int points = 200;
  int precision = 0;
  int jobs = 1;
};

cli::Options make_options(const Args& a) {
  cli::Options o;
  o.format = cli::parse_format(a.format);
  if (!a.eps.empty()) o.epsilon = exactalg::Rational::parse(a.eps);
  o.samples = a.samples;
  o.seed = a.seed;
  o.points = a.points;
  if (a.precision > 0) o.precision = a.precision;
  o.jobs = a.jobs;
  return o;
}

// Writes `text` to the --out path or stdout.
void emit(const Args& a, const std::string& text) {
  if (a.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + a.out_path + "'");
  f << text;
}

std::vector<exactalg::Rational> split_rationals(const std::string& s) {
  std::vector<exactalg::Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(exactalg::Rational::parse(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Melnikov function normal forms, certified zero counts and limit cycle checks"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", a.spec_path, "instance description file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a.out_path, "write the report here instead of stdout");
    sub->add_option("--format", a.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--precision", a.precision, "significant decimal digits")->check(CLI::PositiveNumber);
  };
  auto* nf = app.add_subcommand("normal-form", "exact radical normal form of Phi");
  common(nf);
  auto* zeros = app.add_subcommand("zeros", "certified zero count and isolating intervals");
  common(zeros);
  auto* verify = app.add_subcommand("verify", "compare certified zeros with limit cycles of the flow");
  common(verify);
  verify->add_option("--eps", a.eps, "perturbation size (overrides the spec)");
  auto* scan = app.add_subcommand("scan", "seeded sampling of the coefficient box");
  common(scan);
  scan->add_option("--samples", a.samples, "number of samples")->check(CLI::PositiveNumber);
  scan->add_option("--seed", a.seed, "random seed");
  scan->add_option("--data", a.data_path, "also write the per-sample CSV here");
  scan->add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* curve = app.add_subcommand("sample-curve", "certified samples of Phi for plotting");
  common(curve);
  curve->add_option("--points", a.points, "number of grid points")->check(CLI::Range(2, 1000000));
  auto* prescribe = app.add_subcommand("prescribe", "write a spec whose Phi has simple zeros at given h");
  common(prescribe);
  prescribe->add_option("--targets", a.targets, "comma-separated h values in (0, H0)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const cli::Options opt = make_options(a);
    const cli::InstanceSpec spec = cli::load_instance(a.spec_path);
    std::ostringstream out;
    int status = 0;
    if (nf->parsed()) {
      status = cli::cmd_normal_form(spec, opt, out);
    } else if (zeros->parsed()) {
      status = cli::cmd_zeros(spec, opt, out);
    } else if (verify->parsed()) {
      status = cli::cmd_verify(spec, opt, out);
    } else if (scan->parsed()) {
      std::unique_ptr<std::ofstream> data;
      if (!a.data_path.empty()) {
        data = std::make_unique<std::ofstream>(a.data_path, std::ios::binary);
        if (!*data) throw std::runtime_error("cannot write '" + a.data_path + "'");
      }
      status = cli::cmd_scan(spec, opt, out, data.get());
    } else if (curve->parsed()) {
      status = cli::cmd_sample_curve(spec, opt, out);
    } else if (prescribe->parsed()) {
      cli::InstanceSpec result = spec;
      result.coeffs = zerocount::prescribe_zeros(spec.family, spec.coeffs.n(), split_rationals(a.targets),
                                                 spec.coeffs.bound());
      out << cli::serialize_instance(result);
    }
    emit(a, out.str());
    return status;
  } catch (const cli::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
