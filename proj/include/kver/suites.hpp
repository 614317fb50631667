#pragma once

// Suite orchestration: deterministic sampling per suite, batch-parallel
// kernels, and report assembly. The Kahler gate always runs first; when it
// fails, downstream suites are emitted as skipped.

#include "kver/batch.hpp"
#include "kver/models.hpp"
#include "kver/report.hpp"

namespace kver {

struct RunConfig {
  std::string model_id = "cp2-radial";
  std::map<std::string, double> model_params;
  std::vector<std::string> suites;  // empty or containing "all" = every suite
  int n_points = 500;
  std::uint64_t seed = 1;
  double fd_step = 1e-4;
  Exec exec = Exec::parallel;
  double tol_global = 0.0;                  // 0 = per-suite defaults
  std::map<std::string, double> tol_suite;  // per-suite overrides
  int geodesics = 20;
  int geo_steps = 4096;
  double geo_t_end = 1.0;
};

std::vector<std::string> suite_ids();
std::string suite_identity(const std::string& id);
double suite_default_tol(const std::string& id);

// Reason the suite does not apply to this model; empty when it applies.
std::string suite_not_applicable_reason(const std::string& id, const Model& model);

SuiteResult run_suite(const std::string& id, const Model& model, const RunConfig& config);

// Builds the model and executes the selected suites, gate first.
Report run(const RunConfig& config);

}  // namespace kver
