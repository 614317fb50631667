#include "kver/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace kver {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "FAIL";
    case CheckStatus::info:
      return "info";
    case CheckStatus::skipped:
      return "skip";
  }
  return "?";
}

CheckResult summarize(std::string name, const std::vector<double>& residuals, double tol,
                      bool asserted, std::string note) {
  CheckResult out;
  out.name = std::move(name);
  out.tol = tol;
  out.note = std::move(note);
  out.n = static_cast<int>(residuals.size());
  if (residuals.empty()) {
    out.status = CheckStatus::skipped;
    return out;
  }
  double acc = 0.0;
  for (double r : residuals) {
    out.max = std::max(out.max, r);
    acc += r;
  }
  out.mean = acc / residuals.size();
  std::vector<double> sorted = residuals;
  std::sort(sorted.begin(), sorted.end());
  // nearest-rank 95th percentile
  std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * sorted.size()));
  if (rank == 0) rank = 1;
  out.p95 = sorted[std::min(rank - 1, sorted.size() - 1)];
  out.status = asserted ? (out.max <= tol ? CheckStatus::pass : CheckStatus::fail)
                        : CheckStatus::info;
  return out;
}

bool SuiteResult::passed() const {
  for (const CheckResult& c : checks)
    if (c.status == CheckStatus::fail) return false;
  return true;
}

bool Report::all_passed() const {
  for (const SuiteResult& s : suites)
    if (!s.passed()) return false;
  return true;
}

std::vector<std::pair<std::string, std::string>> convention_strings() {
  return {
      {"omega", "omega(X,Y) = g(JX,Y)"},
      {"dc", "(d^c f)(X) = -df(JX)"},
      {"wedge", "(a^b)(X,Y) = a(X)b(Y) - a(Y)b(X)"},
      {"trace", "sigma = (1/2) sum_k phi(e_k, J e_k), so trace(omega) = n"},
      {"pairing_orientation",
       "S(J.,.) - mu omega = -(mu dmu^dcmu/Q) under these signs"},
  };
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

std::string to_text(const Report& report, bool with_timing) {
  std::ostringstream os;
  os << "model: " << report.meta.model_id << " (dim " << report.meta.dim << ")\n";
  os << "params:";
  for (const auto& [k, v] : report.meta.params) os << ' ' << k << '=' << v;
  os << "\npoints: " << report.meta.n_points << "  seed: " << report.meta.seed
     << "  fd_step: " << report.meta.fd_step << "  exec: " << report.meta.exec << "\n";
  for (const auto& [k, v] : convention_strings()) os << "convention " << k << ": " << v << "\n";
  os << "\n";

  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %-28s %6s %11s %11s %11s %9s %6s\n", "suite",
                "check", "n", "max", "mean", "p95", "tol", "status");
  os << line;
  os << std::string(104, '-') << "\n";
  for (const SuiteResult& suite : report.suites) {
    for (const CheckResult& c : suite.checks) {
      std::snprintf(line, sizeof(line), "%-18s %-28s %6d %11s %11s %11s %9.1e %6s\n",
                    suite.id.c_str(), c.name.c_str(), c.n, fmt(c.max).c_str(),
                    fmt(c.mean).c_str(), fmt(c.p95).c_str(), c.tol, to_string(c.status));
      os << line;
      if (!c.note.empty()) os << "                   ^ " << c.note << "\n";
    }
    if (with_timing) {
      std::snprintf(line, sizeof(line), "%-18s %-28s %39.1f ms\n", suite.id.c_str(),
                    "(wall time)", suite.wall_ms);
      os << line;
    }
    if (!suite.note.empty()) os << suite.id << ": " << suite.note << "\n";
  }
  os << "\noverall: " << (report.all_passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["tool"] = "verify";
  j["model"]["id"] = report.meta.model_id;
  j["model"]["dim"] = report.meta.dim;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.meta.params) params[k] = v;
  j["model"]["params"] = params;
  j["config"]["points"] = report.meta.n_points;
  j["config"]["seed"] = report.meta.seed;
  j["config"]["fd_step"] = report.meta.fd_step;
  j["config"]["exec"] = report.meta.exec;
  nlohmann::ordered_json conv = nlohmann::ordered_json::object();
  for (const auto& [k, v] : convention_strings()) conv[k] = v;
  j["conventions"] = conv;

  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const SuiteResult& suite : report.suites) {
    nlohmann::ordered_json s;
    s["id"] = suite.id;
    s["identity"] = suite.identity;
    if (!suite.note.empty()) s["note"] = suite.note;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : suite.checks) {
      nlohmann::ordered_json cj;
      cj["name"] = c.name;
      cj["n"] = c.n;
      cj["max"] = c.max;
      cj["mean"] = c.mean;
      cj["p95"] = c.p95;
      cj["tol"] = c.tol;
      cj["status"] = to_string(c.status);
      if (!c.note.empty()) cj["note"] = c.note;
      checks.push_back(cj);
    }
    s["checks"] = checks;
    s["passed"] = suite.passed();
    suites.push_back(s);
  }
  j["suites"] = suites;
  j["overall"]["pass"] = report.all_passed();
  return j.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "model,suite,check,n,max,mean,p95,tol,status\n";
  for (const SuiteResult& suite : report.suites)
    for (const CheckResult& c : suite.checks) {
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%s,%s,%d,%.17g,%.17g,%.17g,%.17g,%s\n",
                    report.meta.model_id.c_str(), suite.id.c_str(), c.name.c_str(), c.n, c.max,
                    c.mean, c.p95, c.tol, to_string(c.status));
      os << line;
    }
  return os.str();
}

}  // namespace kver
