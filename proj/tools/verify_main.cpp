// verify: model and suite selection, deterministic sampling configuration,
// and report emission for the chart verification engine.
//
// Exit codes: 0 all asserted checks pass, 1 suite failure, 2 configuration
// error, 3 model construction error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kver/errors.hpp"
#include "kver/models.hpp"
#include "kver/report.hpp"
#include "kver/suites.hpp"

namespace {

int fail_config(const std::string& message) {
  std::cerr << "config error: " << message << "\n";
  return 2;
}

std::map<std::string, double> parse_kv(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw kver::ConfigError("expected key=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw kver::ConfigError("bad numeric value in '" + item + "'");
    }
  }
  return out;
}

std::string list_models_text() {
  std::string out = "model families:\n";
  for (const kver::ModelInfo& info : kver::model_catalog()) {
    out += "  " + info.id + "  [" + info.family + "]\n    " + info.doc + "\n";
    for (const kver::ParamSpec& p : info.params) {
      char line[160];
      std::snprintf(line, sizeof(line), "      --param %s=<v>  (default %g)  %s\n",
                    p.name.c_str(), p.value, p.doc.c_str());
      out += line;
    }
  }
  out += "default instances:";
  for (const std::string& id : kver::default_instances()) out += " " + id;
  out += "\n";
  return out;
}

std::string list_models_json() {
  nlohmann::ordered_json j;
  nlohmann::ordered_json families = nlohmann::ordered_json::array();
  for (const kver::ModelInfo& info : kver::model_catalog()) {
    nlohmann::ordered_json f;
    f["id"] = info.id;
    f["family"] = info.family;
    f["doc"] = info.doc;
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const kver::ParamSpec& p : info.params) {
      nlohmann::ordered_json pj;
      pj["name"] = p.name;
      pj["default"] = p.value;
      pj["doc"] = p.doc;
      params.push_back(pj);
    }
    f["params"] = params;
    families.push_back(f);
  }
  j["families"] = families;
  j["default_instances"] = kver::default_instances();
  return j.dump(2) + "\n";
}

std::string list_suites_text() {
  std::string out = "suites:\n";
  for (const std::string& id : kver::suite_ids()) {
    char line[64];
    std::snprintf(line, sizeof(line), "  %-18s tol %.0e\n", id.c_str(),
                  kver::suite_default_tol(id));
    out += line;
    out += "      checks: " + kver::suite_identity(id) + "\n";
  }
  return out;
}

std::string list_suites_json() {
  nlohmann::ordered_json j;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const std::string& id : kver::suite_ids()) {
    nlohmann::ordered_json s;
    s["id"] = id;
    s["identity"] = kver::suite_identity(id);
    s["default_tol"] = kver::suite_default_tol(id);
    suites.push_back(s);
  }
  j["suites"] = suites;
  return j.dump(2) + "\n";
}

bool emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) return false;
  file << text;
  return static_cast<bool>(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of chart identities on the model catalog"};
  app.set_config("--config", "", "configuration file mirroring the flags (flags win)");

  std::string model_id = "cp2-radial";
  std::vector<std::string> suites;
  std::vector<std::string> params;
  std::vector<std::string> tols;
  int points = 500;
  std::uint64_t seed = 1;
  double fd_step = 1e-4;
  std::string format = "text";
  std::string out_path;
  std::string exec = "parallel";
  int geodesics = 20;
  int geo_steps = 4096;
  bool do_list_models = false;
  bool do_list_suites = false;
  double mu_flag = std::numeric_limits<double>::quiet_NaN();

  app.add_option("--model", model_id, "model id (see --list-models)");
  app.add_option("--suite", suites, "suite id or 'all'; repeatable");
  app.add_option("--param", params, "model parameter k=v; repeatable");
  app.add_option("--mu", mu_flag, "shorthand for --param mu=<v>");
  app.add_option("--points", points, "samples per suite")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--tol", tols, "tolerance override: <v> or suite=<v>; repeatable");
  app.add_option("--fd-step", fd_step, "finite-difference oracle step")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", out_path, "write the report to PATH (text also prints to stdout)");
  app.add_option("--exec", exec, "serial | parallel batch execution")
      ->check(CLI::IsMember({"serial", "parallel"}));
  app.add_option("--geodesics", geodesics, "geodesics in the geodesic suite")
      ->check(CLI::PositiveNumber);
  app.add_option("--geo-steps", geo_steps, "integrator steps per unit time")
      ->check(CLI::PositiveNumber);
  app.add_flag("--list-models", do_list_models, "print the model catalog and exit");
  app.add_flag("--list-suites", do_list_suites, "print the suite catalog and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const bool json = format == "json";
  if (do_list_models || do_list_suites) {
    std::string text;
    if (do_list_models) text += json ? list_models_json() : list_models_text();
    if (do_list_suites) text += json ? list_suites_json() : list_suites_text();
    return emit(text, out_path) ? 0 : 2;
  }

  kver::RunConfig config;
  config.model_id = model_id;
  config.suites = suites;
  config.n_points = points;
  config.seed = seed;
  config.fd_step = fd_step;
  config.exec = exec == "serial" ? kver::Exec::serial : kver::Exec::parallel;
  config.geodesics = geodesics;
  config.geo_steps = geo_steps;

  try {
    config.model_params = parse_kv(params);
    if (mu_flag == mu_flag) config.model_params["mu"] = mu_flag;  // NaN check
    for (const std::string& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        config.tol_global = std::stod(t);
        if (!(config.tol_global > 0.0)) throw kver::ConfigError("tolerance must be positive");
      } else {
        const std::string id = t.substr(0, eq);
        const double v = std::stod(t.substr(eq + 1));
        if (!(v > 0.0)) throw kver::ConfigError("tolerance must be positive");
        config.tol_suite[id] = v;
      }
    }
    // validate ids before any work happens
    const auto models = kver::known_model_ids();
    if (std::find(models.begin(), models.end(), config.model_id) == models.end())
      throw kver::ConfigError("unknown model id: " + config.model_id);
    const auto known = kver::suite_ids();
    for (const std::string& id : config.suites)
      if (id != "all" && std::find(known.begin(), known.end(), id) == known.end())
        throw kver::ConfigError("unknown suite id: " + id);
    for (const auto& [id, v] : config.tol_suite)
      if (std::find(known.begin(), known.end(), id) == known.end())
        throw kver::ConfigError("unknown suite id in --tol: " + id);
  } catch (const kver::ConfigError& e) {
    return fail_config(e.what());
  } catch (const std::exception& e) {
    return fail_config(e.what());
  }

  kver::Report report;
  try {
    report = kver::run(config);
  } catch (const kver::ConfigError& e) {
    return fail_config(e.what());
  } catch (const std::exception& e) {
    std::cerr << "model construction error: " << e.what() << "\n";
    return 3;
  }

  std::string text;
  if (format == "json") text = kver::to_json(report);
  else if (format == "csv") text = kver::to_csv(report);
  else text = kver::to_text(report);

  if (!out_path.empty()) {
    if (!emit(text, out_path)) return fail_config("cannot write " + out_path);
    if (format == "text") std::cout << text;  // keep the table visible
  } else {
    std::cout << text;
  }
  return report.all_passed() ? 0 : 1;
}
