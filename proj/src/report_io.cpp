#include "opvol/report_io.hpp"

#include "opvol/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace opvol {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string level_text(int level) { return level < 0 ? "all" : std::to_string(level); }

}  // namespace

void write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& reports) {
  out << "bound_id,level,lhs,lhs_stderr,rhs,margin,pass\n";
  for (const auto& r : reports) {
    out << r.id << ',' << level_text(r.level) << ',' << format_number(r.lhs) << ',' << format_number(r.lhs_stderr)
        << ',' << format_number(r.rhs) << ',' << format_number(r.margin) << ',' << (r.pass ? "true" : "false")
        << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "level,bound_id,estimate,stderr\n";
  for (const auto& r : table.rows)
    out << r.level << ',' << r.id << ',' << format_number(r.estimate) << ',' << format_number(r.se) << '\n';
}

void write_pricing_csv(std::ostream& out, const std::vector<PricingRow>& rows) {
  out << "level,P,stderr,price_diff,lipschitz_bound,theorem_cap,pass\n";
  for (const auto& r : rows) {
    out << (r.level < 0 ? std::string("base") : std::to_string(r.level)) << ',' << format_number(r.price) << ','
        << format_number(r.se) << ',' << format_number(r.price_diff) << ',' << format_number(r.lipschitz_bound)
        << ',' << format_number(r.theorem_cap) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << content;
  f.flush();
  if (!f) throw IoError(path + ": write failed");
}

}  // namespace opvol
