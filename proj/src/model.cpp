#include "nlevel/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace nlevel {
namespace {

std::string pair_label(int i, int j) { return std::to_string(i) + "-" + std::to_string(j); }

void finish(ConditionReport& report, double tol) {
  report.tolerance = tol;
  report.worst = 0.0;
  for (const auto& r : report.residuals) report.worst = std::max(report.worst, r.value);
  report.satisfied = report.worst <= tol;
}

void require_positive_tol(double tol) {
  if (!(tol > 0.0)) throw InvalidInput("condition tolerance must be positive");
}

std::string describe(const ConditionReport& report, const char* what) {
  std::ostringstream os;
  os << what << " violated (worst residual " << report.worst << ", tolerance "
     << report.tolerance << ")";
  return os.str();
}

}  // namespace

LevelSystem::LevelSystem(std::vector<double> energies, std::vector<Coupling> couplings)
    : energies_(std::move(energies)) {
  const int n = size();
  if (n < 2) throw InvalidInput("a level system needs at least two levels");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(energies_[j])) throw InvalidInput("energies must be finite");
    if (j > 0 && !(energies_[j] > energies_[j - 1])) {
      throw InvalidInput("energies must be strictly increasing (level " + std::to_string(j) + ")");
    }
  }
  const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (couplings.size() != pairs) {
    throw InvalidInput("expected " + std::to_string(pairs) + " couplings for " +
                       std::to_string(n) + " levels, got " + std::to_string(couplings.size()));
  }
  for (auto& c : couplings) {
    if (c.i > c.j) std::swap(c.i, c.j);
    if (c.i < 0 || c.j >= n || c.i == c.j) {
      throw InvalidInput("coupling (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                         ") does not name two distinct levels");
    }
    if (!std::isfinite(c.g) || !std::isfinite(c.omega) || !std::isfinite(c.phi)) {
      throw InvalidInput("coupling " + pair_label(c.i, c.j) + " has non-finite parameters");
    }
    if (c.g < 0.0) throw InvalidInput("coupling " + pair_label(c.i, c.j) + " has g < 0");
  }
  std::sort(couplings.begin(), couplings.end(),
            [](const Coupling& a, const Coupling& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (std::size_t k = 1; k < couplings.size(); ++k) {
    if (couplings[k].i == couplings[k - 1].i && couplings[k].j == couplings[k - 1].j) {
      throw InvalidInput("duplicate coupling " + pair_label(couplings[k].i, couplings[k].j));
    }
  }
  couplings_ = std::move(couplings);
}

const Coupling& LevelSystem::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int n = size();
  if (i < 0 || j >= n || i == j) throw InvalidInput("no coupling " + pair_label(i, j));
  // Row-major index into the sorted upper triangle.
  const int index = i * n - i * (i + 1) / 2 + (j - i - 1);
  return couplings_[static_cast<std::size_t>(index)];
}

double LevelSystem::max_abs_omega() const {
  double m = 0.0;
  for (const auto& c : couplings_) m = std::max(m, std::abs(c.omega));
  return m;
}

double LevelSystem::max_coupling() const {
  double m = 0.0;
  for (const auto& c : couplings_) m = std::max(m, c.g);
  return m;
}

bool LevelSystem::has_phases() const {
  return std::any_of(couplings_.begin(), couplings_.end(),
                     [](const Coupling& c) { return c.phi != 0.0; });
}

LevelSystem LevelSystem::without_phases() const {
  LevelSystem copy = *this;
  for (auto& c : copy.couplings_) c.phi = 0.0;
  return copy;
}

double default_condition_tolerance(const LevelSystem& system) {
  const double w = system.max_abs_omega();
  return w > 0.0 ? 1e-9 * w : 1e-9;
}

CouplingMatrix build_coupling_matrix(const LevelSystem& system) {
  const int n = system.size();
  RealMatrix q = RealMatrix::Zero(n, n);
  for (const auto& c : system.couplings()) {
    q(c.i, c.j) = c.g;
    q(c.j, c.i) = c.g;
  }
  return CouplingMatrix(std::move(q));
}

ConditionReport check_resonance(const LevelSystem& system, double tol) {
  require_positive_tol(tol);
  ConditionReport report;
  const auto& e = system.energies();
  for (int j = 1; j < system.size(); ++j) {
    report.residuals.push_back(
        {pair_label(j - 1, j), std::abs(system.omega(j - 1, j) - (e[j] - e[j - 1]))});
  }
  finish(report, tol);
  return report;
}

ConditionReport check_consistency(const LevelSystem& system, double tol) {
  require_positive_tol(tol);
  ConditionReport report;
  const int n = system.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      double span = 0.0;
      for (int l = i + 1; l <= j; ++l) span += system.sequential_omega(l);
      report.residuals.push_back({pair_label(i, j), std::abs(system.omega(i, j) - span)});
    }
  }
  finish(report, tol);
  return report;
}

ComplexVector frame_phases(const LevelSystem& system, double t) {
  const int n = system.size();
  ComplexVector d(n);
  double cumulative = 0.0;
  d(0) = 1.0;
  for (int l = 1; l < n; ++l) {
    cumulative += system.sequential_omega(l);
    d(l) = std::polar(1.0, -cumulative * t);
  }
  return d;
}

ComplexMatrix frame_matrix(const LevelSystem& system, double t) {
  return frame_phases(system, t).asDiagonal();
}

namespace {

ComplexMatrix bare_hamiltonian(const LevelSystem& system) {
  const int n = system.size();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int j = 1; j < n; ++j) h(j, j) = system.delta(j);
  return h;
}

}  // namespace

ComplexMatrix hamiltonian_rwa(const LevelSystem& system, double t) {
  if (system.has_phases()) {
    throw InvalidInput("the RWA Hamiltonian is phase-free; use hamiltonian_full for phases");
  }
  ComplexMatrix h = bare_hamiltonian(system);
  for (const auto& c : system.couplings()) {
    const Complex v = c.g * std::polar(1.0, c.omega * t);
    h(c.i, c.j) = v;
    h(c.j, c.i) = std::conj(v);
  }
  return h;
}

ComplexMatrix hamiltonian_full(const LevelSystem& system, double t) {
  ComplexMatrix h = bare_hamiltonian(system);
  for (const auto& c : system.couplings()) {
    const double v = 2.0 * c.g * std::cos(c.omega * t + c.phi);
    h(c.i, c.j) = v;
    h(c.j, c.i) = v;
  }
  return h;
}

void require_reducible(const LevelSystem& system, std::optional<double> tol) {
  const double tolerance = tol.value_or(default_condition_tolerance(system));
  const ConditionReport resonance = check_resonance(system, tolerance);
  if (!resonance.satisfied) throw ConditionViolation(describe(resonance, "resonance"), resonance);
  const ConditionReport consistency = check_consistency(system, tolerance);
  if (!consistency.satisfied) {
    throw ConditionViolation(describe(consistency, "consistency"), consistency);
  }
  if (system.has_phases()) {
    ConditionReport phases;
    for (const auto& c : system.couplings()) {
      phases.residuals.push_back({pair_label(c.i, c.j), std::abs(c.phi)});
    }
    finish(phases, tolerance);
    phases.satisfied = false;
    throw ConditionViolation("closed-form solution requires zero phases", phases);
  }
}

ComplexMatrix full_frame_propagator(const LevelSystem& system, double t,
                                    std::optional<Method> method) {
  require_reducible(system);
  const Propagator p = propagator(build_coupling_matrix(system), t, method);
  return frame_phases(system, t).asDiagonal() * p.matrix;
}

StateVector full_solution(const LevelSystem& system, const StateVector& psi0, double t,
                          std::optional<Method> method) {
  if (psi0.size() != system.size()) throw InvalidInput("state dimension mismatch");
  require_reducible(system);
  const Propagator p = propagator(build_coupling_matrix(system), t, method);
  ComplexVector psi = frame_phases(system, t).cwiseProduct(p.matrix * psi0.amplitudes());
  try {
    return StateVector(std::move(psi), 1e-10);
  } catch (const InvalidInput& e) {
    throw NumericError(std::string("propagated state lost normalization: ") + e.what());
  }
}

TimeSeries closed_form_series(const LevelSystem& system, const StateVector& psi0,
                              const std::vector<double>& times, std::optional<Method> method,
                              Method* used) {
  if (psi0.size() != system.size()) throw InvalidInput("state dimension mismatch");
  require_reducible(system);
  const CouplingMatrix q = build_coupling_matrix(system);
  const Method chosen = method.value_or(select_method(q));
  if (used) *used = chosen;
  TimeSeries out;
  out.times = times;
  out.states.reserve(times.size());
  for (double t : times) {
    const Propagator p = propagator(q, t, chosen);
    out.states.push_back(frame_phases(system, t).cwiseProduct(p.matrix * psi0.amplitudes()));
  }
  out.populations = populations_of(out.states);
  return out;
}

std::vector<double> uniform_grid(double t_end, int samples) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be finite and >= 0");
  if (samples == 1) return {0.0};
  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) grid[k] = t_end * k / (samples - 1);
  grid.back() = t_end;
  return grid;
}

}  // namespace nlevel
