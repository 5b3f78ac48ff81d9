#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phh/expr.hpp"
#include "phh/suites.hpp"
#include "phh/surfaces.hpp"
#include "phh/walker.hpp"

namespace {

int verify(const std::string& suite, const std::string& config, const std::optional<int>& samples,
           const std::optional<std::uint64_t>& seed, const std::optional<double>& tol, const std::string& out) {
  phh::SuiteConfig cfg = phh::load_config(config);
  if (cfg.suite != suite)
    throw phh::ConfigError("config names suite '" + cfg.suite + "' but '" + suite + "' was requested");
  if (samples) {
    if (*samples < 1) throw phh::ConfigError("--samples must be at least 1");
    cfg.samples = *samples;
  }
  if (seed) cfg.seed = *seed;
  if (tol) {
    if (*tol < 0) throw phh::ConfigError("--tol must be >= 0");
    cfg.tol = *tol;
  }
  const phh::VerificationReport rep = phh::run_suite(cfg);
  const std::string text = phh::report_to_json(rep).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw phh::ConfigError("cannot write '" + out + "'");
    f << text;
  }
  return rep.pass() ? 0 : 1;
}

int pretty(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw phh::ConfigError("cannot open report '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw phh::ConfigError(std::string("report: ") + e.what());
  }
  const phh::VerificationReport rep = phh::report_from_json(j);
  std::cout << phh::pretty_table(rep);
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for para-hypercomplex structures on 4-dimensional charts"};
  app.require_subcommand(1);

  std::string suite, config, out, report_path;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  auto* v = app.add_subcommand("verify", "Run a suite and emit a JSON report");
  v->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(phh::suite_names()));
  v->add_option("--config", config, "Config JSON path")->required();
  v->add_option("--samples", samples, "Override the sample count");
  v->add_option("--seed", seed, "Override the seed");
  v->add_option("--tol", tol, "Tolerance for every upper-bound check");
  v->add_option("--out", out, "Write the report here instead of stdout");

  bool pretty_flag = false;
  auto* r = app.add_subcommand("report", "Render a JSON report");
  r->add_flag("--pretty", pretty_flag, "Aligned table, one row per check")->required();
  r->add_option("path", report_path, "Report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*v) return verify(suite, config, samples, seed, tol, out);
    return pretty(report_path);
  } catch (const phh::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const phh::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const phh::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const phh::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const phh::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
