#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nlevel/propagator.hpp"

namespace nlevel::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;            // I/O, parse or numeric failure
inline constexpr int kConditionViolation = 2; // resonance/consistency/phase check failed

struct Options {
  std::string scenario_path;
  std::optional<std::string> out_path;  // stdout when unset
  std::optional<std::string> method;    // overrides the scenario; "auto" clears it
  std::optional<double> rtol;
  std::optional<double> atol;
};

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_eigen(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err);

/// Parses argv and runs a subcommand. Always returns 0, 1 or 2.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// One significant digit scientific notation without padding: 0.0e0, 5.0e-1.
std::string format_residual(double value);

}  // namespace nlevel::cli
