#pragma once

// Sample estimates and the pass/fail record of one bound check.

#include <cstddef>
#include <string>
#include <vector>

namespace opvol {

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error, summed in index order.
Estimate estimate(const std::vector<double>& samples);

/// Exact value with zero standard error.
inline Estimate exact(double value) { return Estimate{value, 0.0}; }

struct BoundReport {
  std::string id;
  /// Truncation level, or -1 when the check does not depend on one.
  int level = -1;
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  double rhs_stderr = 0.0;
  /// (rhs - lhs) / sqrt(lhs_stderr^2 + rhs_stderr^2); +-inf when both are exact.
  double margin = 0.0;
  bool pass = false;
  std::string note;
};

/// Pass iff margin >= -3. Differences within 1e-12 (1 + |rhs|) count as zero.
BoundReport make_bound_report(std::string id, int level, Estimate lhs, Estimate rhs, std::string note = {});

}  // namespace opvol
