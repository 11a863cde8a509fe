#include "nlevel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlevel/error.hpp"

namespace nlevel {
namespace {

const Complex kMinusI(0.0, -1.0);

void require_hermitian(const ComplexMatrix& h, double t, int n) {
  if (h.rows() != n || h.cols() != n) {
    throw InvalidInput("Hamiltonian has wrong shape at t = " + std::to_string(t));
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double skew = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (!(skew <= 1e-12 * scale)) {
    throw InvalidInput("Hamiltonian is not Hermitian at t = " + std::to_string(t));
  }
}

ComplexVector rk4_step(const HamiltonianFn& h, double t, const ComplexVector& y, double dt) {
  const ComplexMatrix h_mid = h(t + 0.5 * dt);
  const ComplexVector k1 = kMinusI * (h(t) * y);
  const ComplexVector k2 = kMinusI * (h_mid * (y + 0.5 * dt * k1));
  const ComplexVector k3 = kMinusI * (h_mid * (y + 0.5 * dt * k2));
  const ComplexVector k4 = kMinusI * (h(t + dt) * (y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TimeSeries integrate_schrodinger(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                                 double t_end, int samples, const IntegrationConfig& cfg) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be positive");
  if (samples < 2) throw InvalidInput("need at least two samples");
  if (!(cfg.dt > 0.0) || !(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || cfg.max_steps < 1) {
    throw InvalidInput("integration config needs dt > 0, positive tolerances and max_steps >= 1");
  }
  const int n = psi0.size();
  require_hermitian(hamiltonian(0.0), 0.0, n);
  require_hermitian(hamiltonian(t_end), t_end, n);

  const std::vector<double> grid = uniform_grid(t_end, samples);
  TimeSeries out;
  out.times = grid;
  out.states.reserve(grid.size());

  ComplexVector y = psi0.amplitudes();
  out.states.push_back(y);
  double t = 0.0;
  double h = std::min(cfg.dt, t_end);
  long steps = 0;

  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double target = grid[k];
    while (t < target) {
      if (++steps > cfg.max_steps) {
        throw NumericError("integrator exceeded max_steps = " + std::to_string(cfg.max_steps));
      }
      const double remaining = target - t;
      const bool clipped = h >= remaining;
      const double step = clipped ? remaining : h;

      if (!cfg.adaptive) {
        y = rk4_step(hamiltonian, t, y, step);
        t = clipped ? target : t + step;
      } else {
        const ComplexVector full = rk4_step(hamiltonian, t, y, step);
        const ComplexVector half = rk4_step(hamiltonian, t, y, 0.5 * step);
        const ComplexVector twice = rk4_step(hamiltonian, t + 0.5 * step, half, 0.5 * step);
        const double err = (twice - full).cwiseAbs().maxCoeff() / 15.0;
        const double tol = cfg.abs_tol + cfg.rel_tol * twice.cwiseAbs().maxCoeff();
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0);
        if (err > tol) {
          h = step * factor;
          continue;
        }
        y = twice + (twice - full) / 15.0;
        t = clipped ? target : t + step;
        h = clipped ? std::max(h, step * factor) : step * factor;
      }
      require_hermitian(hamiltonian(t), t, n);
      if (cfg.renormalize) y /= y.norm();
    }
    out.states.push_back(y);
  }
  out.populations = populations_of(out.states);
  return out;
}

double rwa_error(const LevelSystem& system, const StateVector& psi0, double t_end, int samples,
                 const IntegrationConfig& cfg) {
  if (psi0.size() != system.size()) throw InvalidInput("state dimension mismatch");
  const LevelSystem phase_free = system.without_phases();
  const TimeSeries full = integrate_schrodinger(
      [&](double t) { return hamiltonian_full(system, t); }, psi0, t_end, samples, cfg);
  const TimeSeries rwa = integrate_schrodinger(
      [&](double t) { return hamiltonian_rwa(phase_free, t); }, psi0, t_end, samples, cfg);
  double worst = 0.0;
  for (std::size_t k = 0; k < full.states.size(); ++k) {
    worst = std::max(worst, (full.states[k] - rwa.states[k]).norm());
  }
  return worst;
}

}  // namespace nlevel
