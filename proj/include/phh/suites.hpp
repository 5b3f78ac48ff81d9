#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "phh/report.hpp"
#include "phh/jet.hpp"

namespace phh {

/// Invalid configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  std::string suite;
  nlohmann::json params = nlohmann::json::object();
  std::optional<Vec4> domain_min, domain_max;
  int samples = 200;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::optional<double> tol;                 // applies to every upper-bound check
};

const std::vector<std::string>& suite_names();

/// Schema-1 configuration object. Throws ConfigError.
SuiteConfig parse_config(const nlohmann::json& j);
SuiteConfig load_config(const std::string& path);

/// Runs the suite deterministically. Invalid parameters raise ConfigError;
/// failing checks are reported, not thrown.
VerificationReport run_suite(const SuiteConfig& cfg);

nlohmann::ordered_json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);
/// Aligned table, one row per check.
std::string pretty_table(const VerificationReport& r);

}  // namespace phh
