#include "prodsys/verify/report.hpp"

#include <cmath>
#include <cstdio>

namespace prodsys::verify {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_residual(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

const ReportRow& Report::check(std::string theorem, std::string assertion, double residual, double tolerance) {
  const bool pass = !std::isnan(residual) && residual <= tolerance;
  return add({std::move(theorem), std::move(assertion), residual, tolerance, pass});
}

const ReportRow& Report::count(std::string theorem, std::string assertion, int failures) {
  return add({std::move(theorem), std::move(assertion), static_cast<double>(failures), 0.0, failures == 0});
}

const ReportRow& Report::add(ReportRow row) {
  rows_.push_back(std::move(row));
  return rows_.back();
}

void Report::append(const Report& other) { rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end()); }

bool Report::all_pass() const {
  for (const auto& r : rows_)
    if (!r.pass) return false;
  return true;
}

void Report::write_csv(std::ostream& os) const {
  os << "theorem,assertion,residual,tolerance,pass\n";
  for (const auto& r : rows_) {
    os << csv_field(r.theorem) << ',' << csv_field(r.assertion) << ',' << format_residual(r.residual) << ','
       << format_residual(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

}  // namespace prodsys::verify
