#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace specmod {

// Outcome of one verified inequality or campaign.  ratio = lhs/rhs (NaN when
// rhs = 0); `certified` means ratio <= 1 + slack/rhs-scale at every trial;
// `degenerate` marks 0/0 outcomes that are neither pass nor fail.
struct InequalityReport {
  std::string check;
  double lhs = 0;
  double rhs = 0;
  double constant = 0;
  double ratio = 0;
  double slack = 0;
  bool certified = false;
  bool degenerate = false;
  std::string attained_at;                      // description of extremal input
  std::map<std::string, std::string> grid_meta;  // tolerances, windows, seeds
  std::string note;
};

// Additive certification slack: base tolerance scaled by the magnitude of the
// right-hand side so quadrature error on large values is absorbed.
double certification_slack(double rhs, double base = 1e-9);

// One JSON object per line (line-delimited records).
std::string to_json_line(const InequalityReport& r);

// Comma-separated summary: check, constant, max_ratio, slack, pass.
std::string csv_header();
std::string to_csv_row(const InequalityReport& r);

void write_json_lines(std::ostream& out,
                      const std::vector<InequalityReport>& reports);
void write_csv(std::ostream& out,
               const std::vector<InequalityReport>& reports);

}  // namespace specmod
