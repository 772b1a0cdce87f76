#include <doctest.h>

#include "spawn.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::vector<std::string> data_lines(const std::string& output) {
  auto lines = split_lines(output);
  REQUIRE(!lines.empty());
  lines.erase(lines.begin());  // drop the CSV header
  return lines;
}

const char* kProductFacetList =
    "-1 -1 -1 1 <= 2\n"
    "-1 -1 1 -1 <= 2\n"
    "-1 0 0 0 <= 1\n"
    "-1 1 -1 -1 <= 2\n"
    "-1 1 1 1 <= 2\n"
    "0 -1 0 0 <= 1\n"
    "0 0 -1 0 <= 1\n"
    "0 0 0 -1 <= 1\n"
    "0 0 0 1 <= 1\n"
    "0 0 1 0 <= 1\n"
    "0 1 0 0 <= 1\n"
    "1 -1 -1 -1 <= 2\n"
    "1 -1 1 1 <= 2\n"
    "1 0 0 0 <= 1\n"
    "1 1 -1 1 <= 2\n"
    "1 1 1 -1 <= 2\n";

const char* kRawFacetList =
    "-1 0 0 0 <= 1\n"
    "0 -1 0 0 <= 1\n"
    "0 0 -1 0 <= 1\n"
    "0 0 0 -1 <= 1\n"
    "0 0 0 1 <= 1\n"
    "0 0 1 0 <= 1\n"
    "0 1 0 0 <= 1\n"
    "1 0 0 0 <= 1\n";

}  // namespace

TEST_CASE("table1 with the built-in rows passes --check and matches the golden file") {
  const CliResult res = run_cli("table1 --builtin-paper-rows --check --format csv");
  CHECK(res.exit_code == 0);
  CHECK(res.output == slurp(std::string(CONTEXTSIM_DATA_DIR) + "/table1_golden.csv"));

  const auto lines = split_lines(res.output);
  REQUIRE(lines.size() == 21);  // header + 20 rows
  CHECK(lines[0] ==
        "x,A,Ap,B,Bp,na_AB,na_ABp,na_ApB,na_ApBp,na_chsh,ad_AB,ad_ABp,ad_ApB,ad_ApBp,ad_chsh");
  CHECK(split_csv(lines[1])[0] == "-0.514823");
}

TEST_CASE("table1 JSON output carries the full rows") {
  const CliResult res = run_cli("table1 --builtin-paper-rows --format json");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.output);
  CHECK(doc["command"] == "table1");
  CHECK(doc["source"] == "builtin");
  REQUIRE(doc["rows"].size() == 20);
  CHECK(doc["rows"][0]["x_text"] == "-0.514823");
  CHECK(doc["rows"][0]["na_chsh"] == 2);
  CHECK(doc["rows"][0]["ad_chsh"] == 4);
  CHECK(doc["rows"][2]["na_chsh"] == -2);
  CHECK(doc["rows"][2]["ad_chsh"] == -2);
}

TEST_CASE("table1 echoes x spellings from a file verbatim") {
  const std::string path = "/tmp/contextsim_test_x.txt";
  write_file(path, "0.5\n\n   -0.25\t\n1\n");
  const CliResult res = run_cli("table1 --x-file " + path);
  REQUIRE(res.exit_code == 0);
  const auto rows = data_lines(res.output);
  REQUIRE(rows.size() == 3);  // the blank line is skipped
  CHECK(split_csv(rows[0])[0] == "0.5");
  CHECK(split_csv(rows[1])[0] == "-0.25");
  CHECK(split_csv(rows[2])[0] == "1");
}

TEST_CASE("table1 input validation") {
  const std::string path = "/tmp/contextsim_test_x.txt";

  write_file(path, "\n   \n");
  CliResult res = run_cli("table1 --x-file " + path);
  CHECK(res.exit_code == 0);
  CHECK(split_lines(res.output).size() == 1);  // header only

  write_file(path, "0.25\n1.5\n");
  res = run_cli("table1 --x-file " + path);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find(":2:") != std::string::npos);
  CHECK(res.output.find("lies outside [-1, 1]") != std::string::npos);

  write_file(path, "abc\n");
  res = run_cli("table1 --x-file " + path);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("not a number: 'abc'") != std::string::npos);

  CHECK(run_cli("table1 --builtin-paper-rows --x-file " + path).exit_code == 2);
  CHECK(run_cli("table1").exit_code == 2);
  CHECK(run_cli("table1 --x-file /nonexistent/file.txt").exit_code == 2);
}

TEST_CASE("table1 --check fails with exit 3 on rows that cannot match") {
  const std::string path = "/tmp/contextsim_test_x.txt";
  write_file(path, "0.5\n-0.5\n");
  const CliResult res = run_cli("table1 --x-file " + path + " --check");
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("table check failed") != std::string::npos);
  CHECK(res.output.find("row count 2 != 20") != std::string::npos);
  // the table itself is still written
  CHECK(res.output.find("x,A,Ap,B,Bp") != std::string::npos);
}

TEST_CASE("chsh estimates for all three protocols") {
  struct Expect {
    const char* protocol;
    double analytic;
    long long cobits;
  };
  const Expect cases[] = {
      {"nonadaptive", std::sqrt(2.0), 0},
      {"adaptive", 2.0 * std::sqrt(2.0), 4 * 20000},
      {"adaptive-fresh", 2.0 * std::sqrt(2.0), 4 * 20000},
  };
  for (const Expect& c : cases) {
    const CliResult res = run_cli(std::string("chsh --protocol ") + c.protocol +
                                  " --trials 20000 --seed 5 --workers 2");
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "protocol,mean,stderr,n,analytic,cobits_total,bits_total");
    const auto f = split_csv(lines[1]);
    REQUIRE(f.size() == 7);
    CHECK(f[0] == c.protocol);
    const double mean = std::stod(f[1]);
    const double se = std::stod(f[2]);
    CHECK(f[3] == "20000");
    CHECK(std::stod(f[4]) == doctest::Approx(c.analytic).epsilon(1e-14));
    CHECK(std::abs(mean - std::stod(f[4])) < 4.0 * se);
    CHECK(f[5] == std::to_string(c.cobits));
    CHECK(f[6] == "0");
  }
}

TEST_CASE("chsh with four equal settings is exactly 2") {
  const CliResult res =
      run_cli("chsh --protocol adaptive --settings 0,0,0,0 --trials 3000 --seed 1");
  REQUIRE(res.exit_code == 0);
  const auto f = split_csv(data_lines(res.output)[0]);
  CHECK(f[1] == "2");
  CHECK(f[2] == "0");
}

TEST_CASE("degree and radian spellings of the canonical settings agree bytewise") {
  const std::string base = "chsh --protocol adaptive --trials 4000 --seed 2";
  const CliResult by_default = run_cli(base);
  const CliResult by_degrees = run_cli(base + " --settings 0,90,45,-45");
  char radians[160];
  std::snprintf(radians, sizeof radians, "%s --settings 0,%.17g,%.17g,%.17g --radians",
                base.c_str(), kPi / 2, kPi / 4, -kPi / 4);
  const CliResult by_radians = run_cli(radians);

  REQUIRE(by_default.exit_code == 0);
  CHECK(by_default.output == by_degrees.output);
  CHECK(by_default.output == by_radians.output);
}

TEST_CASE("chsh argument validation") {
  CHECK(run_cli("chsh --protocol adaptive --settings 1,2,3 --trials 10").exit_code == 2);
  CHECK(run_cli("chsh --protocol adaptive --settings a,b,c,d --trials 10").exit_code == 2);
  CHECK(run_cli("chsh --protocol telepathy --trials 10").exit_code == 2);
  CHECK(run_cli("chsh --trials 10").exit_code == 2);           // --protocol is required
  CHECK(run_cli("chsh --protocol adaptive --trials 0").exit_code == 2);
  CHECK(run_cli("chsh --protocol adaptive --workers 0 --trials 10").exit_code == 2);
  CHECK(run_cli("chsh --protocol adaptive --format xml").exit_code == 2);
}

TEST_CASE("curve over the default degree grid") {
  const CliResult res = run_cli("curve --model band-adaptive --trials 4000 --seed 9");
  REQUIRE(res.exit_code == 0);
  const auto lines = split_lines(res.output);
  REQUIRE(lines.size() == 20);  // header + 19 points
  CHECK(lines[0] == "theta,mean,stderr,n,analytic");

  const auto first = split_csv(lines[1]);
  CHECK(first[0] == "0");
  CHECK(first[1] == "1");  // cos 0 >= x for every x: exact
  CHECK(first[4] == "1");
  const auto last = split_csv(lines[19]);
  CHECK(last[0] == "180");
  CHECK(std::stod(last[4]) == -1.0);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv(lines[i]);
    REQUIRE(f.size() == 5);
    CHECK(f[3] == "4000");
    CHECK(std::abs(std::stod(f[1]) - std::stod(f[4])) <= 4.0 * std::stod(f[2]) + 1e-12);
  }
}

TEST_CASE("curve models and domains") {
  CliResult res = run_cli("curve --model urn --points 3 --theta-max 90 --trials 2000 --seed 4");
  REQUIRE(res.exit_code == 0);
  for (const auto& line : data_lines(res.output)) CHECK(split_csv(line)[4] == "0");

  res = run_cli("curve --model peres --points 1 --theta-min 45 --trials 2000 --seed 4");
  REQUIRE(res.exit_code == 0);
  const auto f = split_csv(data_lines(res.output)[0]);
  CHECK(f[0] == "45");
  CHECK(std::stod(f[4]) == -0.5);

  // the orientation-averaged band law only exists on [0, 180] degrees
  CHECK(run_cli("curve --model band-uniform --theta-min -10 --trials 100").exit_code == 2);
  CHECK(run_cli("curve --model band-uniform --theta-max 181 --trials 100").exit_code == 2);
  CHECK(run_cli("curve --model nonsense --trials 100").exit_code == 2);
  CHECK(run_cli("curve --model urn --points 0").exit_code == 2);
  CHECK(run_cli("curve --model urn --theta-min 90 --theta-max 90 --points 2").exit_code == 2);
  CHECK(run_cli("curve --trials 10").exit_code == 2);  // --model is required
}

TEST_CASE("facets match the frozen inequality lists") {
  CliResult res = run_cli("facets --coords product");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output == kProductFacetList);

  res = run_cli("facets --coords raw");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output == kRawFacetList);

  res = run_cli("facets --coords product --format json");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.output);
  CHECK(doc["count"] == 16);
  CHECK(doc["dimension"] == 4);
  REQUIRE(doc["facets"].size() == 16);
  CHECK(doc["facets"][2]["coeffs"] == json::array({-1, 0, 0, 0}));
  CHECK(doc["facets"][2]["rhs"] == 1);

  CHECK(run_cli("facets --coords diagonal").exit_code == 2);
  CHECK(run_cli("facets").exit_code == 2);
}

TEST_CASE("squeeze traces the circle profile") {
  const CliResult res =
      run_cli("squeeze --minor 1 --major 1 --t-min 0 --t-max 0.5 --points 5");
  REQUIRE(res.exit_code == 0);
  const auto rows = data_lines(res.output);
  REQUIRE(rows.size() == 5);
  const double expect[5] = {1.0, std::sqrt(2.0) / 2.0, 0.0, -std::sqrt(2.0) / 2.0, -1.0};
  for (int i = 0; i < 5; ++i) {
    const auto f = split_csv(rows[i]);
    REQUIRE(f.size() == 7);
    CHECK(f[0] == "1");
    CHECK(f[1] == "1");
    CHECK(std::abs(std::stod(f[3]) - expect[i]) < 1e-6);
    CHECK(f[4] == "0");       // deterministic: no sampling error
    CHECK(f[5] == "0");
    CHECK(f[6] == f[3]);      // analytic column repeats the mean
  }

  CHECK(run_cli("squeeze --minor 0 --major 1").exit_code == 2);
  CHECK(run_cli("squeeze --minor 1").exit_code == 2);  // --major is required
  CHECK(run_cli("squeeze --minor 1 --major 1 --points 0").exit_code == 2);
}

TEST_CASE("csv and json report identical numbers") {
  const std::string base = "chsh --protocol adaptive --trials 5000 --seed 14";
  const CliResult csv = run_cli(base);
  const CliResult js = run_cli(base + " --format json");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(js.exit_code == 0);

  const auto f = split_csv(data_lines(csv.output)[0]);
  const json doc = json::parse(js.output);
  CHECK(std::stod(f[1]) == doc["mean"].get<double>());
  CHECK(std::stod(f[2]) == doc["stderr"].get<double>());
  CHECK(std::stod(f[4]) == doc["analytic"].get<double>());
  CHECK(doc["n"] == 5000);
  CHECK(doc["cobits_total"] == 4 * 5000);
}

TEST_CASE("same seed means identical bytes, regardless of workers") {
  const CliResult a = run_cli("chsh --protocol adaptive --trials 6000 --seed 77");
  const CliResult b = run_cli("chsh --protocol adaptive --trials 6000 --seed 77");
  const CliResult c = run_cli("chsh --protocol adaptive --trials 6000 --seed 77 --workers 4");
  CHECK(a.output == b.output);
  CHECK(a.output == c.output);

  const std::string curve = "curve --model peres --points 5 --trials 4000 --seed 8";
  const CliResult d = run_cli(curve + " --workers 1");
  const CliResult e = run_cli(curve + " --workers 3");
  CHECK(d.output == e.output);

  // and writing through --out produces the same bytes as stdout
  const std::string out_path = "/tmp/contextsim_test_out.csv";
  std::remove(out_path.c_str());
  const CliResult f = run_cli(curve + " --out " + out_path);
  REQUIRE(f.exit_code == 0);
  CHECK(f.output.empty());
  CHECK(slurp(out_path) == d.output);
}

TEST_CASE("the seed comes from the flag, then the environment, then 0") {
  const CliResult flagged = run_cli("chsh --protocol adaptive --trials 2000 --seed 7");
  const CliResult from_env =
      run_cli("chsh --protocol adaptive --trials 2000", "CONTEXTSIM_SEED=7");
  CHECK(flagged.output == from_env.output);

  const CliResult defaulted =
      run_cli("chsh --protocol adaptive --trials 2000", "-u CONTEXTSIM_SEED");
  const CliResult zero = run_cli("chsh --protocol adaptive --trials 2000 --seed 0");
  CHECK(defaulted.output == zero.output);

  CHECK(run_cli("chsh --protocol adaptive --trials 2000", "CONTEXTSIM_SEED=abc").exit_code ==
        2);
  // an explicit flag silences a broken environment
  const CliResult rescued =
      run_cli("chsh --protocol adaptive --trials 2000 --seed 7", "CONTEXTSIM_SEED=abc");
  CHECK(rescued.exit_code == 0);
  CHECK(rescued.output == flagged.output);
}

TEST_CASE("top-level usage") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}
