#pragma once

// Residual reports: per-suite, per-check statistics with the convention
// metadata stamped into every emission. The JSON form contains no timing, so
// identical configurations produce byte-identical files; wall times appear in
// the human-readable table only.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kver {

enum class CheckStatus { pass, fail, info, skipped };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  int n = 0;
  double max = 0.0;
  double mean = 0.0;
  double p95 = 0.0;
  double tol = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string note;
};

// Stats over a residual vector; pass/fail against tol unless asserted is
// false, in which case the check is informational.
CheckResult summarize(std::string name, const std::vector<double>& residuals, double tol,
                      bool asserted = true, std::string note = {});

struct SuiteResult {
  std::string id;
  std::string identity;  // the formula this suite verifies
  std::vector<CheckResult> checks;
  double wall_ms = 0.0;
  std::string note;

  bool passed() const;  // all asserted checks pass (info/skipped never fail)
};

struct ReportMeta {
  std::string model_id;
  std::map<std::string, double> params;
  int dim = 0;
  int n_points = 0;
  std::uint64_t seed = 0;
  double fd_step = 0.0;
  std::string exec;
};

struct Report {
  ReportMeta meta;
  std::vector<SuiteResult> suites;

  bool all_passed() const;
};

// The sign and normalization choices every number depends on.
std::vector<std::pair<std::string, std::string>> convention_strings();

std::string to_text(const Report& report, bool with_timing = true);
std::string to_json(const Report& report);
std::string to_csv(const Report& report);

}  // namespace kver
