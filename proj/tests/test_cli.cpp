#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using namespace nlevel::cli;

namespace {

const std::string kFixtures{NLEVEL_FIXTURE_DIR};

Options fixture(const std::string& name) {
  Options o;
  o.scenario_path = kFixtures + "/" + name;
  return o;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

int invoke(std::vector<std::string> args, std::string& out_text, std::string& err_text) {
  args.insert(args.begin(), "nlevel");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  out_text = out.str();
  err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("format_residual") {
  CHECK(format_residual(0.0) == "0.0e0");
  CHECK(format_residual(0.5) == "5.0e-1");
  CHECK(format_residual(1.5e-10) == "1.5e-10");
}

TEST_CASE("verify") {
  std::ostringstream out, err;
  CHECK(cmd_verify(fixture("consistent_three_level.json"), out, err) == kOk);
  CHECK(out.str().find("consistency: OK (worst 0.0e0)") != std::string::npos);
  CHECK(out.str().find("resonance: OK") != std::string::npos);

  std::ostringstream out2, err2;
  CHECK(cmd_verify(fixture("inconsistent_three_level.json"), out2, err2) == kConditionViolation);
  CHECK(out2.str().find("0-2") != std::string::npos);
  CHECK(out2.str().find("5.0e-1") != std::string::npos);
  CHECK(out2.str().find("consistency: FAILED") != std::string::npos);

  std::ostringstream out3, err3;
  CHECK(cmd_verify(fixture("malformed.json"), out3, err3) == kFailure);
  CHECK(err3.str().find("line") != std::string::npos);
}

TEST_CASE("simulate") {
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(fixture("rabi_two_level.json"), out, err) == kOk);
  const auto rows = csv_rows(out.str());
  REQUIRE(rows.size() == 1001);
  for (const auto& r : rows) {
    const double c = std::cos(r[0]);
    CHECK(std::abs(r[1] - c * c) < 1e-8);
    CHECK(std::abs(r[1] + r[2] - 1.0) < 1e-8);
  }
  CHECK(out.str().rfind("# method=two-level") != std::string::npos);

  std::ostringstream bad_out, bad_err;
  CHECK(cmd_simulate(fixture("inconsistent_three_level.json"), bad_out, bad_err) == kConditionViolation);
  CHECK(bad_err.str().find("0-2") != std::string::npos);

  std::ostringstream conds, conds_err;
  REQUIRE(cmd_simulate(fixture("consistent_three_level.json"), conds, conds_err) == kOk);
  CHECK(conds.str().find("# consistency 0-2") != std::string::npos);
}

TEST_CASE("simulate: methods agree") {
  std::vector<std::vector<std::vector<double>>> tables;
  for (const char* m : {"jacobi", "lagrange3", "closed-eigen3", "reference"}) {
    Options o = fixture("consistent_three_level.json");
    o.method = m;
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(o, out, err) == kOk);
    tables.push_back(csv_rows(out.str()));
  }
  for (std::size_t k = 1; k < tables.size(); ++k) {
    REQUIRE(tables[k].size() == tables[0].size());
    double worst = 0.0;
    for (std::size_t r = 0; r < tables[0].size(); ++r)
      for (std::size_t c = 0; c < tables[0][r].size(); ++c)
        worst = std::max(worst, std::abs(tables[k][r][c] - tables[0][r][c]));
    CHECK(worst <= 1e-9);
  }
  Options forced = fixture("consistent_three_level.json");
  forced.method = "lagrange4";
  std::ostringstream out, err;
  CHECK(cmd_simulate(forced, out, err) == kFailure);
}

TEST_CASE("simulate: propagator columns") {
  std::string out, err;
  REQUIRE(invoke({"simulate", kFixtures + "/g3_zero.json"}, out, err) == kOk);
  CHECK(out.rfind("t,pop_0,pop_1,pop_2,re_0,im_0", 0) == 0);
}

TEST_CASE("eigen") {
  std::ostringstream out, err;
  REQUIRE(cmd_eigen(fixture("equal_three_level.json"), out, err) == kOk);
  CHECK(out.str().find("closed-form") != std::string::npos);

  std::ostringstream out5, err5;
  REQUIRE(cmd_eigen(fixture("five_level.json"), out5, err5) == kOk);
  CHECK(out5.str().find("unavailable") != std::string::npos);

  std::ostringstream outg, errg;
  REQUIRE(cmd_eigen(fixture("g3_zero.json"), outg, errg) == kOk);
  CHECK(outg.str().find("closed-form eigenvectors (columns):") != std::string::npos);
}

TEST_CASE("compare") {
  std::ostringstream out, err;
  REQUIRE(cmd_compare(fixture("consistent_three_level.json"), out, err) == kOk);
  const std::string text = out.str();
  const auto pos = text.find("# max_pop_dev closed-rwa=");
  REQUIRE(pos != std::string::npos);
  const double dev = std::stod(text.substr(pos + 25));
  CHECK(dev <= 1e-6);
  for (const auto& r : csv_rows(text)) {
    CHECK(std::abs(r[1] + r[2] + r[3] - 1.0) < 1e-8);
  }
}

TEST_CASE("run: argument handling") {
  std::string out, err;
  CHECK(invoke({}, out, err) == kFailure);
  CHECK(invoke({"--help"}, out, err) == kOk);
  CHECK(invoke({"simulate", "--method", "bogus", kFixtures + "/rabi_two_level.json"}, out, err) == kFailure);
  CHECK(invoke({"verify", kFixtures + "/missing.json"}, out, err) == kFailure);
  CHECK(invoke({"verify", kFixtures + "/inconsistent_three_level.json"}, out, err) == kConditionViolation);
  CHECK(invoke({"compare", "--rtol", "1e-10", "--atol", "1e-13", kFixtures + "/rabi_two_level.json"}, out, err) ==
        kOk);
}
