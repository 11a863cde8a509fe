#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlevel/coupling_matrix.hpp"
#include "nlevel/error.hpp"
#include "nlevel/propagator.hpp"
#include "nlevel/state.hpp"
#include "nlevel/types.hpp"

namespace nlevel {

/// One laser field driving the i <-> j transition (i < j).
///
/// `g` is the rotating-wave coupling: the field enters the full Hamiltonian
/// as 2 g cos(omega t + phi) and the RWA Hamiltonian as g e^{i omega t}.
struct Coupling {
  int i = 0;
  int j = 0;
  double g = 0.0;
  double omega = 0.0;
  double phi = 0.0;

  bool operator==(const Coupling&) const = default;
};

/// An n-level atom driven by n(n-1)/2 fields, hbar = 1.
class LevelSystem {
 public:
  /// Validates: n >= 2, strictly increasing finite energies, exactly one
  /// coupling per pair (order and orientation free), finite g >= 0, finite
  /// omega and phi.
  LevelSystem(std::vector<double> energies, std::vector<Coupling> couplings);

  int size() const { return static_cast<int>(energies_.size()); }
  const std::vector<double>& energies() const { return energies_; }
  /// Sorted by (i, j).
  const std::vector<Coupling>& couplings() const { return couplings_; }

  const Coupling& coupling(int i, int j) const;
  double g(int i, int j) const { return coupling(i, j).g; }
  double omega(int i, int j) const { return coupling(i, j).omega; }
  double phi(int i, int j) const { return coupling(i, j).phi; }

  /// Delta_j = E_j - E_0.
  double delta(int j) const { return energies_[j] - energies_[0]; }
  /// omega_l = omega_{l-1,l}, l >= 1.
  double sequential_omega(int l) const { return omega(l - 1, l); }
  double max_abs_omega() const;
  double max_coupling() const;
  bool has_phases() const;

  /// Same system with every phase set to zero.
  LevelSystem without_phases() const;

  bool operator==(const LevelSystem&) const = default;

 private:
  std::vector<double> energies_;
  std::vector<Coupling> couplings_;
};

struct ConditionResidual {
  std::string label;  // "i-j"
  double value = 0.0;

  bool operator==(const ConditionResidual&) const = default;
};

struct ConditionReport {
  bool satisfied = true;
  std::vector<ConditionResidual> residuals;
  double worst = 0.0;
  double tolerance = 0.0;
};

/// Raised when the constant-Q reduction does not apply to a scenario.
class ConditionViolation : public Error {
 public:
  ConditionViolation(const std::string& what, ConditionReport report)
      : Error(what), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

/// 1e-9 times the largest |omega| (1e-9 if every omega is zero).
double default_condition_tolerance(const LevelSystem& system);

CouplingMatrix build_coupling_matrix(const LevelSystem& system);

/// |omega_{j-1,j} - (E_j - E_{j-1})| for j = 1..n-1.
ConditionReport check_resonance(const LevelSystem& system, double tol);

/// epsilon_ij = |omega_ij - (omega_{i+1} + ... + omega_j)| for j - i >= 2.
ConditionReport check_consistency(const LevelSystem& system, double tol);

/// Diagonal of U(t): 1, e^{-i w1 t}, e^{-i (w1+w2) t}, ...
ComplexVector frame_phases(const LevelSystem& system, double t);
ComplexMatrix frame_matrix(const LevelSystem& system, double t);

/// H0 + V(t), V_ij = g_ij e^{i omega_ij t} above the diagonal. Rejects
/// systems with nonzero phases.
ComplexMatrix hamiltonian_rwa(const LevelSystem& system, double t);

/// H0 plus 2 g_ij cos(omega_ij t + phi_ij) off the diagonal (no RWA).
ComplexMatrix hamiltonian_full(const LevelSystem& system, double t);

/// Throws ConditionViolation unless the system is resonant, consistent and
/// phase-free at `tol` (default_condition_tolerance when omitted).
void require_reducible(const LevelSystem& system,
                       std::optional<double> tol = std::nullopt);

/// Psi(t) = U(t) exp(-itQ) Psi(0).
StateVector full_solution(const LevelSystem& system, const StateVector& psi0,
                          double t, std::optional<Method> method = std::nullopt);

/// full_solution over a grid, checking the conditions once. The method that
/// was actually used is written to `used` when non-null.
TimeSeries closed_form_series(const LevelSystem& system,
                              const StateVector& psi0,
                              const std::vector<double>& times,
                              std::optional<Method> method = std::nullopt,
                              Method* used = nullptr);

/// U(t) exp(-itQ), the lab-frame propagator.
ComplexMatrix full_frame_propagator(const LevelSystem& system, double t,
                                    std::optional<Method> method = std::nullopt);

/// t_k = t_end k / (samples - 1); a single {0} when samples == 1.
std::vector<double> uniform_grid(double t_end, int samples);

}  // namespace nlevel
