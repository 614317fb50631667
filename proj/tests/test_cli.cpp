#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef VERIFY_BIN
#define VERIFY_BIN "verify"
#endif

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string out_file = "cli_test_output.txt";
  const std::string cmd = std::string(VERIFY_BIN) + " " + args + " > " + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("exit code contract") {
  CHECK(run_cli("--model product --mu 0 --suite killing --points 50").exit_code == 0);
  CHECK(run_cli("--model cp2-radial --suite killing --points 100 --tol 1e-15").exit_code == 1);
  CHECK(run_cli("--model cp2-radial --suite no-such-suite").exit_code == 2);
  CHECK(run_cli("--model no-such-model").exit_code == 2);
  CHECK(run_cli("--model calabi --param tau_min=5 --suite kahler").exit_code == 3);
}

TEST_CASE("catalog listings") {
  const CliResult models = run_cli("--list-models");
  CHECK(models.exit_code == 0);
  CHECK(count_occurrences(models.out, "--param") >= 10);
  for (const char* id : {"cpn-radial", "product", "calabi", "cp2-radial", "calabi-dim6"})
    CHECK(models.out.find(id) != std::string::npos);

  const CliResult suites = run_cli("--list-suites");
  CHECK(suites.exit_code == 0);
  for (const char* id : {"kahler", "killing", "prop11", "geodesic", "foliation",
                         "hamiltonian", "special_potential", "calabi_relations",
                         "boundedness"})
    CHECK(suites.out.find(id) != std::string::npos);
  // each suite line carries the identity it checks
  CHECK(count_occurrences(suites.out, "checks:") == 9);

  const CliResult machine = run_cli("--list-suites --format json");
  CHECK(machine.exit_code == 0);
  CHECK(count_occurrences(machine.out, "\"id\"") == 9);
  CHECK(machine.out.find("\"identity\"") != std::string::npos);
}

TEST_CASE("config file mirrors flags and flags win") {
  {
    std::ofstream conf("cli_test.conf");
    conf << "model = \"product-cp1-cp1\"\n";
    conf << "suite = [\"killing\"]\n";
    conf << "points = 40\n";
    conf << "seed = 3\n";
  }
  const CliResult from_file = run_cli("--config cli_test.conf");
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.out.find("model: product-cp1-cp1") != std::string::npos);
  CHECK(from_file.out.find("points: 40") != std::string::npos);

  const CliResult overridden = run_cli("--config cli_test.conf --model cp2-radial");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.out.find("model: cp2-radial") != std::string::npos);
}

TEST_CASE("csv output has the stable header") {
  const CliResult csv = run_cli("--model product --mu 0 --suite killing --points 20 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.rfind("model,suite,check,n,max,mean,p95,tol,status\n", 0) == 0);
}

TEST_CASE("reports carry the convention header") {
  const CliResult text = run_cli("--model cp2-radial --suite kahler --points 30");
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("omega(X,Y) = g(JX,Y)") != std::string::npos);
  CHECK(text.out.find("(d^c f)(X) = -df(JX)") != std::string::npos);
}
