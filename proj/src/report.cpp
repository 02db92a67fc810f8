#include "opvol/report.hpp"

#include <cmath>
#include <limits>

namespace opvol {

Estimate estimate(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n == 0) return {};
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return Estimate{mean, 0.0};
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(n - 1);
  return Estimate{mean, std::sqrt(var / static_cast<double>(n))};
}

BoundReport make_bound_report(std::string id, int level, Estimate lhs, Estimate rhs, std::string note) {
  BoundReport r;
  r.id = std::move(id);
  r.level = level;
  r.lhs = lhs.mean;
  r.lhs_stderr = lhs.se;
  r.rhs = rhs.mean;
  r.rhs_stderr = rhs.se;
  r.note = std::move(note);
  double diff = rhs.mean - lhs.mean;
  if (std::abs(diff) <= 1e-12 * (1.0 + std::abs(rhs.mean))) diff = 0.0;
  const double combined = std::hypot(lhs.se, rhs.se);
  if (combined > 0.0) {
    r.margin = diff / combined;
  } else {
    r.margin = diff >= 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  r.pass = r.margin >= -3.0;
  return r;
}

}  // namespace opvol
