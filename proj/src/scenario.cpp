#include "nlevel/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nlevel {
namespace {

using json = nlohmann::json;

constexpr Output kAllOutputs[] = {Output::Populations, Output::Amplitudes, Output::Propagator,
                                  Output::Conditions};

Output parse_output(const std::string& name) {
  for (Output o : kAllOutputs) {
    if (to_string(o) == name) return o;
  }
  throw ScenarioError("unknown output '" + name + "'");
}

template <typename T>
T field(const json& obj, const char* key, const char* context) {
  if (!obj.contains(key)) throw ScenarioError(std::string(context) + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioError(std::string(context) + ": bad value for '" + key + "': " + e.what());
  }
}

Complex parse_complex(const json& value) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
    throw ScenarioError("complex amplitudes must be [re, im] pairs");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

}  // namespace

std::string_view to_string(Output output) {
  switch (output) {
    case Output::Populations: return "populations";
    case Output::Amplitudes: return "amplitudes";
    case Output::Propagator: return "propagator";
    case Output::Conditions: return "conditions";
  }
  return "unknown";
}

StateVector Scenario::initial_state() const {
  const int n = system.size();
  if (const int* index = std::get_if<int>(&initial)) return StateVector::basis(n, *index);
  const auto& amps = std::get<std::vector<Complex>>(initial);
  if (static_cast<int>(amps.size()) != n) {
    throw ScenarioError("initial state has " + std::to_string(amps.size()) + " amplitudes for " +
                        std::to_string(n) + " levels");
  }
  ComplexVector v(n);
  for (int k = 0; k < n; ++k) v(k) = amps[static_cast<std::size_t>(k)];
  return StateVector::normalized(v);
}

bool Scenario::wants(Output output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("malformed scenario JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");

  const auto levels = field<std::vector<double>>(doc, "levels", "scenario");
  const json& raw_couplings = doc.contains("couplings") ? doc.at("couplings") : json();
  if (!raw_couplings.is_array()) throw ScenarioError("scenario: 'couplings' must be an array");
  std::vector<Coupling> couplings;
  for (const json& c : raw_couplings) {
    if (!c.is_object()) throw ScenarioError("each coupling must be an object");
    Coupling cp;
    cp.i = field<int>(c, "i", "coupling");
    cp.j = field<int>(c, "j", "coupling");
    cp.g = field<double>(c, "g", "coupling");
    cp.omega = field<double>(c, "omega", "coupling");
    cp.phi = c.contains("phi") ? field<double>(c, "phi", "coupling") : 0.0;
    couplings.push_back(cp);
  }

  std::variant<int, std::vector<Complex>> initial;
  if (!doc.contains("initial")) throw ScenarioError("scenario: missing key 'initial'");
  const json& init = doc.at("initial");
  if (init.is_number_integer()) {
    initial = init.get<int>();
  } else if (init.is_array()) {
    std::vector<Complex> amps;
    for (const json& a : init) amps.push_back(parse_complex(a));
    initial = std::move(amps);
  } else {
    throw ScenarioError("scenario: 'initial' must be a level index or a list of [re, im]");
  }

  const double t_end = field<double>(doc, "t_end", "scenario");
  const int samples = doc.contains("samples") ? field<int>(doc, "samples", "scenario") : 1001;
  std::optional<Method> method;
  if (doc.contains("method")) {
    const auto name = field<std::string>(doc, "method", "scenario");
    if (name != "auto") {
      try {
        method = parse_method(name);
      } catch (const InvalidInput& e) {
        throw ScenarioError(e.what());
      }
    }
  }
  std::vector<Output> outputs{Output::Populations, Output::Amplitudes};
  if (doc.contains("outputs")) {
    outputs.clear();
    for (const auto& name : field<std::vector<std::string>>(doc, "outputs", "scenario")) {
      outputs.push_back(parse_output(name));
    }
  }

  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ScenarioError("t_end must be >= 0");
  if (samples < 1 || (t_end > 0.0 && samples < 2)) {
    throw ScenarioError("samples must be >= 2 (or 1 with t_end = 0)");
  }

  try {
    Scenario s{LevelSystem(levels, std::move(couplings)), std::move(initial), t_end, samples,
               method, std::move(outputs)};
    (void)s.initial_state();
    return s;
  } catch (const ScenarioError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ScenarioError(std::string("invalid scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  json doc;
  doc["levels"] = scenario.system.energies();
  json couplings = json::array();
  for (const auto& c : scenario.system.couplings()) {
    json entry{{"i", c.i}, {"j", c.j}, {"g", c.g}, {"omega", c.omega}};
    if (c.phi != 0.0) entry["phi"] = c.phi;
    couplings.push_back(std::move(entry));
  }
  doc["couplings"] = std::move(couplings);
  if (const int* index = std::get_if<int>(&scenario.initial)) {
    doc["initial"] = *index;
  } else {
    json amps = json::array();
    for (const Complex& a : std::get<std::vector<Complex>>(scenario.initial)) {
      amps.push_back({a.real(), a.imag()});
    }
    doc["initial"] = std::move(amps);
  }
  doc["t_end"] = scenario.t_end;
  doc["samples"] = scenario.samples;
  doc["method"] = scenario.method ? std::string(to_string(*scenario.method)) : "auto";
  json outputs = json::array();
  for (Output o : scenario.outputs) outputs.push_back(std::string(to_string(o)));
  doc["outputs"] = std::move(outputs);
  return doc.dump(2) + "\n";
}

}  // namespace nlevel
