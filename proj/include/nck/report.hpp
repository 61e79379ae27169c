#pragma once

#include <string>
#include <vector>

namespace nck {

/// Default threshold for verify_* reports.
inline constexpr double kVerifyTol = 1e-10;

struct Check {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

/// Named residuals; an entry passes iff its residual is below the tolerance.
class VerificationReport {
 public:
  explicit VerificationReport(double tol = kVerifyTol) : tol_(tol) {}

  double tol() const { return tol_; }
  const std::vector<Check>& checks() const { return checks_; }

  void add(std::string name, double residual);
  /// Appends every check of `other`, prefixing names with `prefix`. The entries
  /// are re-judged against this report's tolerance.
  void append(const VerificationReport& other, const std::string& prefix = "");

  bool all_pass() const;
  int pass_count() const;
  double max_residual() const;
  /// Residual of the named check; throws std::out_of_range if absent.
  double residual(const std::string& name) const;

 private:
  double tol_;
  std::vector<Check> checks_;
};

}  // namespace nck
