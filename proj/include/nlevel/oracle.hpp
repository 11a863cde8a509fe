#pragma once

#include <functional>

#include "nlevel/model.hpp"
#include "nlevel/state.hpp"
#include "nlevel/types.hpp"

namespace nlevel {

struct IntegrationConfig {
  double dt = 1e-2;  // initial step (the fixed step when !adaptive)
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  long max_steps = 50'000'000;
  bool renormalize = false;
  bool adaptive = true;
};

using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// Classic RK4 on i dPsi/dt = H(t) Psi with step-doubling error control,
/// sampled on a uniform grid over [0, t_end].
///
/// Throws InvalidInput for bad arguments or a non-Hermitian H (checked at
/// t = 0, t_end and every accepted step), NumericError past max_steps.
TimeSeries integrate_schrodinger(const HamiltonianFn& hamiltonian,
                                 const StateVector& psi0, double t_end,
                                 int samples, const IntegrationConfig& cfg = {});

/// Max over samples of |Psi_full - Psi_rwa|, both integrated from psi0.
/// Phases act on the full Hamiltonian only.
double rwa_error(const LevelSystem& system, const StateVector& psi0,
                 double t_end, int samples, const IntegrationConfig& cfg = {});

}  // namespace nlevel
