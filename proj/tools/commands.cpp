#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "nlevel/model.hpp"
#include "nlevel/oracle.hpp"
#include "nlevel/roots.hpp"
#include "nlevel/scenario.hpp"

namespace nlevel::cli {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<Method> resolve_method(const Options& opts, const Scenario& scenario) {
  if (!opts.method) return scenario.method;
  if (*opts.method == "auto") return std::nullopt;
  return parse_method(*opts.method);
}

IntegrationConfig integration_config(const Options& opts) {
  IntegrationConfig cfg;
  if (opts.rtol) cfg.rel_tol = *opts.rtol;
  if (opts.atol) cfg.abs_tol = *opts.atol;
  return cfg;
}

void print_report(std::ostream& os, const char* name, const ConditionReport& report) {
  os << name << ":\n";
  if (report.residuals.empty()) os << "  (no pairs)\n";
  for (const auto& r : report.residuals) {
    os << "  " << std::left << std::setw(8) << r.label << format_residual(r.value) << "\n";
  }
  os << name << ": " << (report.satisfied ? "OK" : "FAILED") << " (worst "
     << format_residual(report.worst);
  if (!report.satisfied) os << ", tol " << format_residual(report.tolerance);
  os << ")\n";
}

// Runs `body` with the CSV stream, which is either the --out file or `out`.
template <typename Body>
int with_output(const Options& opts, std::ostream& out, std::ostream& err, Body body) {
  if (!opts.out_path) {
    body(out);
    return out ? kOk : kFailure;
  }
  std::ofstream file(*opts.out_path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file " << *opts.out_path << "\n";
    return kFailure;
  }
  body(file);
  file.flush();
  if (!file) {
    err << "error: failed writing " << *opts.out_path << "\n";
    return kFailure;
  }
  return kOk;
}

// Shared error mapping: condition violations exit 2, everything else 1.
template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const ConditionViolation& e) {
    err << "error: " << e.what() << "\n";
    print_report(err, "residuals", e.report());
    return kConditionViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

std::vector<double> scenario_grid(const Scenario& s) {
  return uniform_grid(s.t_end, s.t_end == 0.0 ? 1 : s.samples);
}

}  // namespace

std::string format_residual(double value) {
  if (value == 0.0) return "0.0e0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.1e", value);
  std::string text(buf);
  const auto e = text.find('e');
  std::string mantissa = text.substr(0, e);
  int exponent = std::stoi(text.substr(e + 1));
  return mantissa + "e" + std::to_string(exponent);
}

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scenario = load_scenario(opts.scenario_path);
    const std::optional<Method> method = resolve_method(opts, scenario);
    const LevelSystem& system = scenario.system;
    const int n = system.size();
    require_reducible(system);

    const std::vector<double> grid = scenario_grid(scenario);
    Method used = Method::Reference;
    const TimeSeries series =
        closed_form_series(system, scenario.initial_state(), grid, method, &used);

    std::vector<ComplexMatrix> propagators;
    if (scenario.wants(Output::Propagator)) {
      for (double t : grid) propagators.push_back(full_frame_propagator(system, t, used));
    }

    return with_output(opts, out, err, [&](std::ostream& csv) {
      csv << "t";
      if (scenario.wants(Output::Populations))
        for (int j = 0; j < n; ++j) csv << ",pop_" << j;
      if (scenario.wants(Output::Amplitudes))
        for (int j = 0; j < n; ++j) csv << ",re_" << j << ",im_" << j;
      if (scenario.wants(Output::Propagator))
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) csv << ",u_" << i << "_" << j << "_re,u_" << i << "_" << j << "_im";
      csv << "\n";

      double worst_norm = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const ComplexVector& psi = series.states[k];
        worst_norm = std::max(worst_norm, std::abs(psi.norm() - 1.0));
        csv << num(grid[k]);
        if (scenario.wants(Output::Populations))
          for (int j = 0; j < n; ++j) csv << "," << num(series.populations(k, j));
        if (scenario.wants(Output::Amplitudes))
          for (int j = 0; j < n; ++j) csv << "," << num(psi(j).real()) << "," << num(psi(j).imag());
        if (scenario.wants(Output::Propagator))
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              csv << "," << num(propagators[k](i, j).real()) << "," << num(propagators[k](i, j).imag());
        csv << "\n";
      }
      csv << "# method=" << to_string(used) << "\n";
      csv << "# max_norm_error=" << num(worst_norm) << "\n";
      if (scenario.wants(Output::Conditions)) {
        const double tol = default_condition_tolerance(system);
        for (const auto& [name, report] :
             {std::pair{"resonance", check_resonance(system, tol)},
              std::pair{"consistency", check_consistency(system, tol)}}) {
          for (const auto& r : report.residuals) {
            csv << "# " << name << " " << r.label << " " << num(r.value) << "\n";
          }
        }
      }
    });
  });
}

int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scenario = load_scenario(opts.scenario_path);
    const double tol = default_condition_tolerance(scenario.system);
    const ConditionReport resonance = check_resonance(scenario.system, tol);
    const ConditionReport consistency = check_consistency(scenario.system, tol);
    print_report(out, "resonance", resonance);
    print_report(out, "consistency", consistency);
    if (scenario.system.has_phases()) {
      out << "phases: nonzero (closed-form propagation needs phase-free fields)\n";
    }
    return resonance.satisfied && consistency.satisfied ? kOk : kConditionViolation;
  });
}

int cmd_eigen(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scenario = load_scenario(opts.scenario_path);
    const CouplingMatrix q = build_coupling_matrix(scenario.system);
    const int n = q.size();
    const EigenDecomposition jacobi = jacobi_eigendecompose(q);

    std::optional<Spectrum> closed;
    std::string closed_note;
    try {
      closed = closed_form_spectrum(q);
    } catch (const std::exception& e) {
      closed_note = e.what();
    }

    out << std::left << std::setw(4) << "k" << std::setw(26) << "closed-form" << std::setw(26)
        << "jacobi"
        << "difference\n";
    for (int k = 0; k < n; ++k) {
      const double lj = jacobi.spectrum.eigenvalues[k];
      out << std::setw(4) << k;
      if (closed) {
        const double lc = closed->eigenvalues[k];
        out << std::setw(26) << num(lc) << std::setw(26) << num(lj) << num(std::abs(lc - lj));
      } else {
        out << std::setw(26) << "unavailable" << std::setw(26) << num(lj) << "-";
      }
      out << "\n";
    }
    if (!closed) out << "closed-form: unavailable (" << closed_note << ")\n";

    if (n == 3 && closed) {
      try {
        const EigenDecomposition ev = eigenvectors_three_level(q, *closed);
        out << "closed-form eigenvectors (columns):\n";
        for (int i = 0; i < 3; ++i) {
          out << " ";
          for (int j = 0; j < 3; ++j) out << " " << std::setw(26) << num(ev.vectors(i, j));
          out << "\n";
        }
      } catch (const DegenerateSpectrum& e) {
        out << "closed-form eigenvectors: unavailable (" << e.what() << ")\n";
      }
    }
    return kOk;
  });
}

int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scenario = load_scenario(opts.scenario_path);
    const std::optional<Method> method = resolve_method(opts, scenario);
    const LevelSystem& system = scenario.system;
    const int n = system.size();
    const StateVector psi0 = scenario.initial_state();
    require_reducible(system);

    const std::vector<double> grid = scenario_grid(scenario);
    const TimeSeries closed = closed_form_series(system, psi0, grid, method);
    TimeSeries rwa;
    TimeSeries full;
    if (grid.size() == 1) {
      rwa = full = closed;
      rwa.states = full.states = {psi0.amplitudes()};
      rwa.populations = full.populations = populations_of(rwa.states);
    } else {
      const IntegrationConfig cfg = integration_config(opts);
      const int samples = static_cast<int>(grid.size());
      rwa = integrate_schrodinger([&](double t) { return hamiltonian_rwa(system, t); }, psi0,
                                  scenario.t_end, samples, cfg);
      full = integrate_schrodinger([&](double t) { return hamiltonian_full(system, t); }, psi0,
                                   scenario.t_end, samples, cfg);
    }

    auto max_pop_dev = [&](const TimeSeries& a, const TimeSeries& b) {
      return (a.populations - b.populations).cwiseAbs().maxCoeff();
    };
    auto max_state_dev = [&](const TimeSeries& a, const TimeSeries& b) {
      double worst = 0.0;
      for (std::size_t k = 0; k < a.states.size(); ++k)
        worst = std::max(worst, (a.states[k] - b.states[k]).norm());
      return worst;
    };

    return with_output(opts, out, err, [&](std::ostream& csv) {
      csv << "t";
      for (const char* tag : {"closed", "rwa", "full"})
        for (int j = 0; j < n; ++j) csv << "," << tag << "_pop_" << j;
      csv << "\n";
      for (std::size_t k = 0; k < grid.size(); ++k) {
        csv << num(grid[k]);
        for (const TimeSeries* ts : std::array<const TimeSeries*, 3>{&closed, &rwa, &full})
          for (int j = 0; j < n; ++j) csv << "," << num(ts->populations(k, j));
        csv << "\n";
      }
      csv << "# max_pop_dev closed-rwa=" << num(max_pop_dev(closed, rwa))
          << " closed-full=" << num(max_pop_dev(closed, full))
          << " rwa-full=" << num(max_pop_dev(rwa, full)) << "\n";
      csv << "# max_state_dev closed-rwa=" << num(max_state_dev(closed, rwa))
          << " closed-full=" << num(max_state_dev(closed, full))
          << " rwa-full=" << num(max_state_dev(rwa, full)) << "\n";
    });
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form and numerical dynamics of laser-driven n-level atoms", "nlevel"};
  app.require_subcommand(1);

  Options opts;
  const std::vector<std::string> method_names{"auto",           "two-level",     "lagrange3",
                                              "lagrange4",      "equal-coupling", "closed-eigen3",
                                              "jacobi",         "reference"};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", opts.scenario_path, "Scenario JSON file")->required();
  };

  auto* simulate = app.add_subcommand("simulate", "Closed-form time series to CSV");
  add_common(simulate);
  simulate->add_option("--out", opts.out_path, "Output CSV (stdout when omitted)");
  simulate->add_option("--method", opts.method, "Propagator method")
      ->check(CLI::IsMember(method_names));

  auto* verify = app.add_subcommand("verify", "Check resonance and consistency conditions");
  add_common(verify);

  auto* eigen = app.add_subcommand("eigen", "Closed-form vs Jacobi spectrum of Q");
  add_common(eigen);

  auto* compare = app.add_subcommand("compare", "Closed form vs RK4 (RWA) vs RK4 (full)");
  add_common(compare);
  compare->add_option("--out", opts.out_path, "Output CSV (stdout when omitted)");
  compare->add_option("--method", opts.method, "Propagator method")
      ->check(CLI::IsMember(method_names));
  compare->add_option("--rtol", opts.rtol, "Integrator relative tolerance")
      ->check(CLI::PositiveNumber);
  compare->add_option("--atol", opts.atol, "Integrator absolute tolerance")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }

  if (simulate->parsed()) return cmd_simulate(opts, out, err);
  if (verify->parsed()) return cmd_verify(opts, out, err);
  if (eigen->parsed()) return cmd_eigen(opts, out, err);
  return cmd_compare(opts, out, err);
}

}  // namespace nlevel::cli
