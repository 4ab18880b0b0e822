#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "asymrate/io.hpp"
#include "asymrate/operators.hpp"
#include "asymrate/reference_states.hpp"

using nlohmann::json;

namespace {

struct TempDir {
  std::string path;
  TempDir() {
    char tmpl[] = "/tmp/asymrate_cli_XXXXXX";
    path = mkdtemp(tmpl);
  }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(ASYMRATE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// data rows of a CSV, comments and header skipped, split on commas
std::vector<std::vector<std::string>> csv_rows(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("bad invocations exit with code 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("nosuchcommand") == 2);
  CHECK(run_cli("figure1") == 2);            // missing required --p
  CHECK(run_cli("figure1 --p 1.5") == 2);
  CHECK(run_cli("figure1 --p 0.5 --q 1.2") == 2);
  CHECK(run_cli("skew --state /no/file.json --ham /no/file.json") == 2);
  CHECK(run_cli("rates --family bogus") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("skew command reproduces the worked value") {
  TempDir dir;
  asym::write_json_file(dir.file("rho.json"),
                        asym::matrix_to_json(asym::qutrit_example_state(0.5).matrix()));
  asym::write_json_file(dir.file("h.json"),
                        asym::matrix_to_json(asym::qutrit_example_hamiltonian().matrix()));
  std::string out = dir.file("skew.json");
  REQUIRE(run_cli("skew --state " + dir.file("rho.json") + " --ham " + dir.file("h.json") +
                  " --f sld --out " + out) == 0);
  json j = json::parse(slurp(out));
  CHECK(std::abs(j["value"].get<double>() - 11.0 / 32.0) < 1e-10);
  CHECK(j["f_tag"] == "sld");
  CHECK(std::abs(j["qfi"].get<double>() - 11.0 / 8.0) < 1e-9);
  CHECK(j["config"]["seed"] == 12345);
  CHECK(j["config"]["command"] == "skew");
}

TEST_CASE("figure1 emits an ordered and reproducible grid") {
  TempDir dir;
  std::string a = dir.file("a.csv"), b = dir.file("b.csv");
  REQUIRE(run_cli("figure1 --p 0.1 --out " + a) == 0);
  REQUIRE(run_cli("figure1 --p 0.1 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));

  std::string text = slurp(a);
  CHECK(text.find("# command=figure1") != std::string::npos);
  CHECK(text.find("# seed=12345") != std::string::npos);

  auto rows = csv_rows(a);
  REQUIRE(rows.size() == 19);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    double sld = std::stod(row[1]);
    double wyd = std::stod(row[2]);
    CHECK(wyd <= sld + 1e-12);
  }
  // q = 0.5 row carries the closed-form endpoint values
  CHECK(std::abs(std::stod(rows[9][0]) - 0.5) < 1e-12);
  CHECK(std::abs(std::stod(rows[9][1]) - 1.375) < 1e-10);
  CHECK(std::abs(std::stod(rows[9][3]) - 1.375) < 1e-10);
}

TEST_CASE("config file values apply and command-line flags win") {
  TempDir dir;
  std::ofstream cfg(dir.file("run.ini"));
  cfg << "[figure1]\n";
  cfg << "p=0.2\n";
  cfg << "q=0.5\n";
  cfg.close();

  std::string out = dir.file("cfg.csv");
  REQUIRE(run_cli("figure1 --config " + dir.file("run.ini") + " --out " + out) == 0);
  auto rows = csv_rows(out);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(std::stod(rows[0][0]) - 0.5) < 1e-12);

  REQUIRE(run_cli("figure1 --config " + dir.file("run.ini") + " --q 0.25 --out " + out) == 0);
  rows = csv_rows(out);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(std::stod(rows[0][0]) - 0.25) < 1e-12);
}

TEST_CASE("maxmin classifies reference distributions") {
  TempDir dir;
  asym::write_sequence_csv(dir.file("coh.csv"), {0, 1}, {0.5, 0.5});
  std::string out = dir.file("coh.json");
  REQUIRE(run_cli("maxmin --dist " + dir.file("coh.csv") + " --out " + out) == 0);
  json j = json::parse(slurp(out));
  CHECK(j["f_max_infinite"] == true);
  CHECK(j["f_max"] == "infinite");
  CHECK(j["f_min"].get<double>() <= 1e-5);

  asym::write_sequence_csv(dir.file("point.csv"), {4}, {1.0});
  std::string pout = dir.file("point.json");
  REQUIRE(run_cli("maxmin --dist " + dir.file("point.csv") + " --out " + pout) == 0);
  json pj = json::parse(slurp(pout));
  CHECK(pj["f_max_infinite"] == false);
  CHECK(std::abs(pj["f_max"].get<double>()) < 1e-9);
  CHECK(std::abs(pj["f_min"].get<double>()) < 1e-9);

  CHECK(run_cli("maxmin --dist /no/such.csv") == 2);
}

TEST_CASE("rates writes the report and the value matrix") {
  TempDir dir;
  std::string out = dir.file("rates.json");
  std::string csv = dir.file("rates.csv");
  REQUIRE(run_cli("rates --family iid:phi_coh --R 1 --f sld --m 2..3 --eps 0.2,0.1 "
                  "--iterations 250 --restarts 1 --csv " +
                  csv + " --out " + out) == 0);
  json j = json::parse(slurp(out));
  CHECK(j["report"]["m_grid"].size() == 2);
  CHECK(j["report"]["eps_grid"].size() == 2);
  CHECK(j["report"]["sup_estimate"].get<double>() >=
        j["report"]["inf_estimate"].get<double>() - 1e-12);
  CHECK(j["report"].contains("caveat"));
  CHECK(j["config"]["seed"] == 12345);

  auto rows = csv_rows(csv);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].size() == 3);
  CHECK(rows[0][0] == "2");
  CHECK(rows[1][0] == "3");
  for (const auto& row : rows)
    for (std::size_t c = 1; c < row.size(); ++c) CHECK(std::stod(row[c]) >= 0.0);
}

TEST_CASE("example-noniid emits the variance table") {
  TempDir dir;
  std::string out = dir.file("noniid.csv");
  REQUIRE(run_cli("example-noniid --m 2..4 --iterations 150 --restarts 0 --out " + out) == 0);
  auto rows = csv_rows(out);
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[0].size() == 6);
  // m = 4 row: variance 9.5 with negligible formula gap, distance 1/sqrt(2)
  CHECK(std::abs(std::stod(rows[2][1]) - 9.5) < 1e-9);
  CHECK(std::stod(rows[2][3]) < 1e-8);
  CHECK(std::abs(std::stod(rows[2][4]) - 0.7071067811865476) < 1e-9);
  double prev = 2.0;
  for (const auto& row : rows) {
    double d = std::stod(row[4]);
    CHECK(d < prev);
    prev = d;
    CHECK(std::stod(row[5]) >= 0.0);
  }
}

TEST_CASE("verify command reports the sequences suite") {
  TempDir dir;
  std::string out = dir.file("verify.json");
  int code = run_cli("verify --suite sequences --out " + out);
  json j = json::parse(slurp(out));
  CHECK(j["report"]["suite"] == "sequences");
  CHECK(j["report"]["invariants"].size() >= 10);
  bool all_pass = j["report"]["all_pass"].get<bool>();
  CHECK(code == (all_pass ? 0 : 1));
  CHECK(all_pass);

  CHECK(run_cli("verify --suite nosuch") == 2);
}
