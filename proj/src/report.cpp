#include "phh/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phh {
namespace {

void aggregate(CheckRecord& rec, std::span<const double> residuals) {
  double mx = 0.0, sum = 0.0;
  for (double r : residuals) {
    const double a = std::isnan(r) ? INFINITY : std::abs(r);
    mx = std::max(mx, a);
    sum += a;
  }
  rec.max = mx;
  rec.mean = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
  if (std::isinf(rec.mean)) rec.mean = mx;
  rec.samples = static_cast<int>(residuals.size());
}

void evaluate(CheckRecord& rec) {
  rec.pass = rec.kind == CheckRecord::Kind::kUpper ? rec.max <= rec.tol : rec.max > rec.tol;
}

}  // namespace

CheckRecord& VerificationReport::add(std::string name, std::span<const double> residuals, double tol) {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.tol = tol;
  aggregate(rec, residuals);
  evaluate(rec);
  checks_.push_back(rec);
  return checks_.back();
}

CheckRecord& VerificationReport::add(std::string name, double residual, double tol) {
  return add(std::move(name), std::span<const double>(&residual, 1), tol);
}

CheckRecord& VerificationReport::add_lower(std::string name, std::span<const double> residuals,
                                           double threshold) {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.tol = threshold;
  rec.kind = CheckRecord::Kind::kLower;
  aggregate(rec, residuals);
  evaluate(rec);
  checks_.push_back(rec);
  return checks_.back();
}

CheckRecord& VerificationReport::add_lower(std::string name, double residual, double threshold) {
  return add_lower(std::move(name), std::span<const double>(&residual, 1), threshold);
}

CheckRecord& VerificationReport::add_flag(std::string name, bool holds) {
  return add(std::move(name), holds ? 0.0 : 1.0, 0.0);
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (CheckRecord rec : other.checks_) {
    rec.name = prefix + rec.name;
    checks_.push_back(std::move(rec));
  }
}

bool VerificationReport::pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckRecord& c) { return c.pass; });
}

bool VerificationReport::has_check(const std::string& name) const {
  return std::any_of(checks_.begin(), checks_.end(),
                     [&](const CheckRecord& c) { return c.name == name; });
}

const CheckRecord& VerificationReport::check(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return c;
  throw std::out_of_range("report has no check named '" + name + "'");
}

void VerificationReport::retolerance(const std::string& name, double tol) {
  for (auto& c : checks_)
    if (c.name == name) {
      c.tol = tol;
      evaluate(c);
    }
}

}  // namespace phh
