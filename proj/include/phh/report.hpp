#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phh {

/// One named residual aggregated over sample points.
///
/// An "upper" check passes when max <= tol; a "lower" check passes when
/// max > tol (used for falsifiers that must be detected at some sample).
struct CheckRecord {
  enum class Kind { kUpper, kLower };

  std::string name;
  double max = 0.0;
  double mean = 0.0;
  double tol = 0.0;
  bool pass = true;
  int samples = 0;
  Kind kind = Kind::kUpper;
};

class VerificationReport {
 public:
  VerificationReport() = default;
  explicit VerificationReport(std::string suite) : suite_(std::move(suite)) {}

  /// Records |r| aggregated over `residuals` against an upper bound.
  CheckRecord& add(std::string name, std::span<const double> residuals, double tol);
  CheckRecord& add(std::string name, double residual, double tol);
  /// Records a falsifier: passes when the largest residual exceeds `threshold`.
  CheckRecord& add_lower(std::string name, std::span<const double> residuals, double threshold);
  CheckRecord& add_lower(std::string name, double residual, double threshold);
  /// A boolean condition rendered as residual 0 (holds) or 1 (violated).
  CheckRecord& add_flag(std::string name, bool holds);

  void merge(const VerificationReport& other, const std::string& prefix = {});

  bool pass() const;
  const std::vector<CheckRecord>& checks() const { return checks_; }
  std::vector<CheckRecord>& checks() { return checks_; }
  const CheckRecord& check(const std::string& name) const;
  bool has_check(const std::string& name) const;
  double max(const std::string& name) const { return check(name).max; }

  const std::string& suite() const { return suite_; }
  void set_suite(std::string s) { suite_ = std::move(s); }
  std::uint64_t seed = 0;
  int samples = 0;

  /// Applies a new tolerance to a check and recomputes its pass flag.
  void retolerance(const std::string& name, double tol);

 private:
  std::string suite_;
  std::vector<CheckRecord> checks_;
};

}  // namespace phh
