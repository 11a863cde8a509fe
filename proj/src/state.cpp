#include "nlevel/state.hpp"

#include <cmath>
#include <string>

#include "nlevel/error.hpp"

namespace nlevel {

StateVector::StateVector(ComplexVector amplitudes, double norm_tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) throw InvalidInput("state vector is empty");
  if (!amplitudes_.allFinite()) throw InvalidInput("state vector has non-finite amplitudes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > norm_tol) {
    throw InvalidInput("state vector is not normalized (norm " + std::to_string(norm) + ")");
  }
}

StateVector StateVector::normalized(const ComplexVector& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidInput("cannot normalize a zero or non-finite state");
  }
  return StateVector(amplitudes / norm);
}

StateVector StateVector::basis(int n, int k) {
  if (n < 1 || k < 0 || k >= n) {
    throw InvalidInput("basis index " + std::to_string(k) + " out of range for " +
                       std::to_string(n) + " levels");
  }
  ComplexVector v = ComplexVector::Zero(n);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

RealMatrix populations_of(const std::vector<ComplexVector>& states) {
  if (states.empty()) return RealMatrix(0, 0);
  const auto n = states.front().size();
  RealMatrix pops(static_cast<Eigen::Index>(states.size()), n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    pops.row(static_cast<Eigen::Index>(k)) = states[k].cwiseAbs2().transpose();
  }
  return pops;
}

}  // namespace nlevel
