#pragma once

// Verification report: one row per assertion, written as CSV with the header
// theorem,assertion,residual,tolerance,pass.

#include <ostream>
#include <string>
#include <vector>

namespace prodsys::verify {

struct ReportRow {
  std::string theorem;
  std::string assertion;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

class Report {
 public:
  /// Passes when residual ≤ tolerance; NaN residuals fail.
  const ReportRow& check(std::string theorem, std::string assertion, double residual, double tolerance);
  /// Boolean assertion recorded as residual = number of failures, tolerance 0.
  const ReportRow& count(std::string theorem, std::string assertion, int failures);
  /// Row whose outcome was decided by the caller (e.g. a ratio bound).
  const ReportRow& add(ReportRow row);
  void append(const Report& other);

  const std::vector<ReportRow>& rows() const { return rows_; }
  bool all_pass() const;
  void write_csv(std::ostream& os) const;

 private:
  std::vector<ReportRow> rows_;
};

/// Residuals in %.6e, so reports are byte-stable across runs.
std::string format_residual(double x);

}  // namespace prodsys::verify
