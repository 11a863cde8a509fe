#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlevel/model.hpp"
#include "nlevel/propagator.hpp"

namespace nlevel {

enum class Output { Populations, Amplitudes, Propagator, Conditions };

std::string_view to_string(Output output);

/// A simulation request, stored in JSON:
///
///   {
///     "levels": [0.0, 1.0, 3.0],
///     "couplings": [{"i": 0, "j": 1, "g": 0.1, "omega": 1.0, "phi": 0.0}, ...],
///     "initial": 0                      // basis index, or [[re, im], ...]
///     "t_end": 20.0,
///     "samples": 1001,                  // optional
///     "method": "lagrange3",            // optional, default auto
///     "outputs": ["populations", "amplitudes"]   // optional
///   }
///
/// Couplings are rotating-wave g (the field is 2 g cos(omega t + phi)).
struct Scenario {
  LevelSystem system;
  std::variant<int, std::vector<Complex>> initial;
  double t_end = 0.0;
  int samples = 1001;
  std::optional<Method> method;
  std::vector<Output> outputs{Output::Populations, Output::Amplitudes};

  StateVector initial_state() const;
  bool wants(Output output) const;

  bool operator==(const Scenario&) const = default;
};

/// Thrown for malformed or invalid scenario documents.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& scenario);

}  // namespace nlevel
