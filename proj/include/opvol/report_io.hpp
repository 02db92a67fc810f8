#pragma once

// CSV writers: fixed column order, 17 significant digits, '\n' line ends.

#include "opvol/experiments.hpp"
#include "opvol/report.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace opvol {

std::string format_number(double v);

/// bound_id,level,lhs,lhs_stderr,rhs,margin,pass
void write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& reports);
/// level,bound_id,estimate,stderr
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);
/// level,P,stderr,price_diff,lipschitz_bound,theorem_cap,pass
void write_pricing_csv(std::ostream& out, const std::vector<PricingRow>& rows);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace opvol
