#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ellband/cli.hpp"
#include "ellband/spectra.hpp"

using namespace ellband;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("analytic edges for the a = 2 potential") {
  const auto r = run_cli({"edges", "--p", "6", "--q", "0", "--m", "0.5",
                          "--source", "analytic"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 6);  // header + 5 edges
  const auto want = lame_energy_levels(2, 0.5);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::stod(rows[i + 1][2]) == doctest::Approx(want[i]).epsilon(1e-12));
  }
  CHECK(rows[1][3] == "L");
  CHECK(rows[2][3] == "2L");
  CHECK(rows[1][5] == "table1/row0");
}

TEST_CASE("numeric edges of the free rotator") {
  const auto r = run_cli({"edges", "--p", "0", "--q", "0", "--m", "0",
                          "--source", "numeric", "--e-max", "10"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 8);
  const std::vector<double> want{0, 1, 1, 4, 4, 9, 9};
  for (int i = 0; i < 7; ++i)
    CHECK(std::stod(rows[i + 1][2]) == doctest::Approx(want[i]).scale(1).epsilon(1e-6));
}

TEST_CASE("gap-delta2 scan vanishes at a = 3/2") {
  const auto r = run_cli({"scan", "--quantity", "gap-delta2", "--a", "3/2"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() > 40);  // default grid plus the 0.998 point
  CHECK(rows.back()[0] == "0.998");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) == 0.0);
}

TEST_CASE("rational arguments express quarter-integer strengths exactly") {
  const auto r = run_cli({"edges", "--p", "63/4", "--q", "3/4", "--m", "0.5",
                          "--source", "analytic", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["meta"]["p"].get<double>() == doctest::Approx(15.75).epsilon(1e-15));
  CHECK(doc["meta"]["complete"] == "false");
  REQUIRE(doc["records"].size() == 5);
  // Doubly degenerate top level.
  const double e3 = doc["records"][3]["energy"].get<double>();
  const double e4 = doc["records"][4]["energy"].get<double>();
  CHECK(e3 == e4);
}

TEST_CASE("CSV and JSON encodings carry identical numeric content") {
  const std::vector<std::string> base{"profile", "--a", "2", "--b", "0",
                                      "--m", "0.5", "--grid", "16"};
  auto csv_args = base;
  auto json_args = base;
  json_args.push_back("--format");
  json_args.push_back("json");
  const auto rc = run_cli(csv_args);
  const auto rj = run_cli(json_args);
  REQUIRE(rc.code == 0);
  REQUIRE(rj.code == 0);
  const auto rows = parse_csv(rc.out);
  const json doc = json::parse(rj.out);
  REQUIRE(doc["records"].size() == rows.size() - 1);
  for (std::size_t i = 0; i < doc["records"].size(); ++i) {
    CHECK(std::stod(rows[i + 1][0]) == doc["records"][i]["x"].get<double>());
    CHECK(std::stod(rows[i + 1][1]) == doc["records"][i]["v_minus"].get<double>());
  }
}

TEST_CASE("documents round-trip losslessly at the serialized precision") {
  const auto r = run_cli({"profile", "--p", "6", "--q", "2", "--m", "0.5",
                          "--grid", "32"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  // Parsing a serialized number and re-serializing it reproduces the exact
  // field: the 15-significant-digit encoding is a fixed point.
  char buf[40];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (const std::string& cell : rows[i]) {
      const double v = std::stod(cell);
      std::snprintf(buf, sizeof(buf), "%.15g", v);
      CHECK(cell == buf);
    }
  }
}

TEST_CASE("profile values match the library") {
  const auto r = run_cli({"profile", "--p", "6", "--q", "2", "--m", "0.5",
                          "--grid", "8", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const PotentialSpec v = PotentialSpec::from_pq(6.0, 2.0, Modulus(0.5));
  for (const auto& rec : doc["records"]) {
    const double x = rec["x"].get<double>();
    CHECK(rec["v_minus"].get<double>() == doctest::Approx(v(x)).epsilon(1e-12));
  }
  CHECK(doc["records"][0]["v_minus"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("partner verb reports a deviation verdict") {
  const auto r = run_cli({"partner", "--p", "2", "--q", "2", "--m", "0.5",
                          "--grid", "8", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["meta"]["verdict"] == "self-isospectral");
  CHECK(doc["meta"]["deviation"].get<double>() < 1e-8);

  const auto r2 = run_cli({"partner", "--p", "6", "--q", "6", "--m", "0.5",
                           "--grid", "8", "--format", "json"});
  REQUIRE(r2.code == 0);
  const json doc2 = json::parse(r2.out);
  CHECK(doc2["meta"]["verdict"] == "distinct");
}

TEST_CASE("parabola membership query") {
  const auto r = run_cli({"parabolas", "--p", "6", "--q", "2"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[1][0]) == 1);
  CHECK(std::stod(rows[2][0]) == 4);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(2.0));
}

TEST_CASE("dispersion emits k only inside bands") {
  const auto r = run_cli({"dispersion", "--p", "2", "--q", "0", "--m", "0.5",
                          "--e-max", "2", "--grid", "40", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  int in_band = 0, in_gap = 0;
  for (const auto& rec : doc["records"]) {
    if (rec["k"].is_null()) ++in_gap;
    else ++in_band;
  }
  CHECK(in_band > 0);
  CHECK(in_gap > 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({"edges", "--p", "6", "--m", "0.5"}).code == 2);           // missing q
  CHECK(run_cli({"edges", "--p", "6", "--q", "0", "--a", "2", "--b", "0",
                 "--m", "0.5"}).code == 2);                                 // both pairs
  CHECK(run_cli({"profile", "--p", "6", "--q", "0", "--m", "1.2"}).code == 2);
  CHECK(run_cli({"profile", "--p", "-1", "--q", "0", "--m", "0.5"}).code == 2);
  CHECK(run_cli({"edges", "--p", "5", "--q", "1", "--m", "0.5",
                 "--source", "analytic"}).code == 2);  // no closed forms
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"dispersion", "--p", "6", "--q", "6", "--m", "0.5",
                 "--e-max", "1"}).code == 2);  // below the potential floor
}

TEST_CASE("verify subset runs and reports") {
  const auto r = run_cli({"verify", "--only", "1", "--only", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS criterion 1") != std::string::npos);
  CHECK(r.out.find("PASS criterion 8") != std::string::npos);
  CHECK(r.out.find("ACCEPTANCE PASSED") != std::string::npos);
}
