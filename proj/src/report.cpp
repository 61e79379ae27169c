#include "nck/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nck {

void VerificationReport::add(std::string name, double residual) {
  // NaN never passes.
  const bool pass = residual < tol_;
  checks_.push_back({std::move(name), residual, pass});
}

void VerificationReport::append(const VerificationReport& other, const std::string& prefix) {
  for (const auto& c : other.checks_) add(prefix + c.name, c.residual);
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

int VerificationReport::pass_count() const {
  return static_cast<int>(
      std::count_if(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; }));
}

double VerificationReport::max_residual() const {
  double r = 0.0;
  for (const auto& c : checks_) {
    if (std::isnan(c.residual)) return c.residual;
    r = std::max(r, c.residual);
  }
  return r;
}

double VerificationReport::residual(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return c.residual;
  }
  throw std::out_of_range("VerificationReport: no check named '" + name + "'");
}

}  // namespace nck
