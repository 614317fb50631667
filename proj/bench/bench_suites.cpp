// Timing comparison of the serial reference path against the OpenMP batch
// backend, per suite kernel. Both paths execute identical per-point work and
// produce bitwise-identical reports; this target only measures wall time.
//
//   bench_suites [points] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "kver/batch.hpp"
#include "kver/models.hpp"
#include "kver/suites.hpp"

using namespace kver;

namespace {

double time_once(const std::string& suite, const Model& model, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult result = run_suite(suite, model, config);
  (void)result;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

double best_of(int repeats, const std::string& suite, const Model& model,
               const RunConfig& config) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) best = std::min(best, time_once(suite, model, config));
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int points = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  std::printf("batch backend comparison: %d points, best of %d, %d threads available\n\n",
              points, repeats, batch_thread_count());
  std::printf("%-16s %-18s %12s %12s %9s\n", "model", "suite", "serial ms", "openmp ms",
              "speedup");

  const std::vector<std::pair<std::string, std::string>> cases = {
      {"cp2-radial", "kahler"},     {"cp2-radial", "killing"},
      {"cp2-radial", "hamiltonian"}, {"cp3-radial", "killing"},
      {"calabi-dim6", "foliation"}, {"cp2-radial", "geodesic"},
  };

  for (const auto& [model_id, suite] : cases) {
    const Model model = build_model(model_id);
    RunConfig config;
    config.model_id = model_id;
    config.n_points = points;
    config.seed = 7;
    config.geodesics = 64;

    config.exec = Exec::serial;
    const double serial = best_of(repeats, suite, model, config);
    config.exec = Exec::parallel;
    const double parallel = best_of(repeats, suite, model, config);

    std::printf("%-16s %-18s %12.1f %12.1f %8.2fx\n", model_id.c_str(), suite.c_str(), serial,
                parallel, serial / parallel);
  }
  return 0;
}
