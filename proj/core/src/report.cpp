#include "specmod/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace specmod {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// JSON has no literal for non-finite numbers; emit those as strings.
std::string json_number(double v) {
  if (std::isfinite(v)) return fmt(v);
  if (std::isnan(v)) return "\"nan\"";
  return v > 0 ? "\"inf\"" : "\"-inf\"";
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

double certification_slack(double rhs, double base) {
  return base * std::max(1.0, std::abs(rhs));
}

std::string to_json_line(const InequalityReport& r) {
  std::ostringstream out;
  out << '{' << "\"check\":" << json_string(r.check)
      << ",\"lhs\":" << json_number(r.lhs) << ",\"rhs\":" << json_number(r.rhs)
      << ",\"constant\":" << json_number(r.constant)
      << ",\"ratio\":" << json_number(r.ratio)
      << ",\"slack\":" << json_number(r.slack)
      << ",\"certified\":" << (r.certified ? "true" : "false")
      << ",\"degenerate\":" << (r.degenerate ? "true" : "false")
      << ",\"attained_at\":" << json_string(r.attained_at);
  out << ",\"grid_meta\":{";
  bool first = true;
  for (const auto& [k, v] : r.grid_meta) {
    if (!first) out << ',';
    first = false;
    out << json_string(k) << ':' << json_string(v);
  }
  out << '}' << ",\"note\":" << json_string(r.note) << '}';
  return out.str();
}

std::string csv_header() { return "check,constant,max_ratio,slack,pass"; }

std::string to_csv_row(const InequalityReport& r) {
  std::ostringstream out;
  out << r.check << ',' << fmt(r.constant) << ',' << fmt(r.ratio) << ','
      << fmt(r.slack) << ',' << (r.degenerate ? "degenerate" : (r.certified ? "1" : "0"));
  return out.str();
}

void write_json_lines(std::ostream& out,
                      const std::vector<InequalityReport>& reports) {
  for (const auto& r : reports) out << to_json_line(r) << '\n';
}

void write_csv(std::ostream& out,
               const std::vector<InequalityReport>& reports) {
  out << csv_header() << '\n';
  for (const auto& r : reports) out << to_csv_row(r) << '\n';
}

}  // namespace specmod
