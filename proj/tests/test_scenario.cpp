#include <doctest.h>

#include <string>

#include "nlevel/scenario.hpp"

using namespace nlevel;

namespace {

const std::filesystem::path kFixtures{NLEVEL_FIXTURE_DIR};

}  // namespace

TEST_CASE("scenario fixtures parse") {
  const Scenario rabi = load_scenario(kFixtures / "rabi_two_level.json");
  CHECK(rabi.system.size() == 2);
  CHECK(rabi.samples == 1001);
  CHECK_FALSE(rabi.method.has_value());
  CHECK(rabi.initial_state()[0] == Complex(1.0));

  const Scenario eq = load_scenario(kFixtures / "equal_three_level.json");
  CHECK(std::holds_alternative<std::vector<Complex>>(eq.initial));
  CHECK(eq.wants(Output::Populations));
  CHECK_FALSE(eq.wants(Output::Propagator));

  const Scenario cons = load_scenario(kFixtures / "consistent_three_level.json");
  CHECK(cons.wants(Output::Conditions));
}

TEST_CASE("round trip") {
  for (const char* name : {"rabi_two_level.json", "consistent_three_level.json", "equal_three_level.json",
                           "five_level.json", "g3_zero.json", "inconsistent_three_level.json"}) {
    CAPTURE(name);
    const Scenario a = load_scenario(kFixtures / name);
    const Scenario b = parse_scenario(serialize_scenario(a));
    CHECK(a == b);
  }
  const char* text = R"({"levels": [0, 1.5], "couplings": [{"i": 1, "j": 0, "g": 0.25, "omega": 1.5, "phi": 0.1}],
    "initial": [[0.6, 0], [0, 0.8]], "t_end": 2.5, "samples": 7, "method": "reference",
    "outputs": ["propagator", "conditions"]})";
  const Scenario a = parse_scenario(text);
  CHECK(a.method == Method::Reference);
  CHECK(a.system.phi(0, 1) == 0.1);
  CHECK(parse_scenario(serialize_scenario(a)) == a);
}

TEST_CASE("initial state normalization") {
  const Scenario s = parse_scenario(R"({"levels": [0, 1], "couplings": [{"i": 0, "j": 1, "g": 1, "omega": 1}],
    "initial": [[3, 0], [0, 4]], "t_end": 1})");
  CHECK(std::abs(s.initial_state().amplitudes().norm() - 1.0) < 1e-15);
  CHECK(std::abs(s.initial_state()[1] - Complex(0.0, 0.8)) < 1e-15);
}

TEST_CASE("scenario errors") {
  const std::string base = R"("couplings": [{"i": 0, "j": 1, "g": 1, "omega": 1}])";
  auto parse = [](const std::string& text) { return parse_scenario(text); };
  CHECK_THROWS_AS(parse("{"), ScenarioError);
  CHECK_THROWS_AS(parse("[]"), ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "t_end": 1})"), ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": 0})"), ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": 2, "t_end": 1})"), ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": [[0, 0], [0, 0]], "t_end": 1})"),
                  ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": 0, "t_end": -1})"), ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": 0, "t_end": 1, "samples": 0})"),
                  ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": 0, "t_end": 1, "method": "pade"})"),
                  ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], )" + base + R"(, "initial": 0, "t_end": 1, "outputs": ["plot"]})"),
                  ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": [0, 1], "couplings": [], "initial": 0, "t_end": 1})"), ScenarioError);
  CHECK_THROWS_AS(parse(R"({"levels": "x", )" + base + R"(, "initial": 0, "t_end": 1})"), ScenarioError);
  CHECK_THROWS_AS(load_scenario(kFixtures / "does_not_exist.json"), ScenarioError);

  try {
    load_scenario(kFixtures / "malformed.json");
    FAIL("expected a parse error");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}
