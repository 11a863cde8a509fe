#pragma once

#include <vector>

#include "nlevel/types.hpp"

namespace nlevel {

/// Normalized complex amplitude vector.
class StateVector {
 public:
  /// Throws InvalidInput when the norm differs from 1 by more than `norm_tol`.
  explicit StateVector(ComplexVector amplitudes, double norm_tol = 1e-12);

  /// Rescales a nonzero vector to unit norm.
  static StateVector normalized(const ComplexVector& amplitudes);
  /// The k-th computational basis state of an n-level system.
  static StateVector basis(int n, int k);

  int size() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](int k) const { return amplitudes_(k); }
  RealVector populations() const { return amplitudes_.cwiseAbs2(); }

 private:
  ComplexVector amplitudes_;
};

/// Sampled trajectory. `states` keeps the raw integrated vectors so norm
/// drift stays observable; populations(k, j) = |states[k](j)|^2.
struct TimeSeries {
  std::vector<double> times;
  std::vector<ComplexVector> states;
  RealMatrix populations;
};

/// Builds the populations matrix from `states`.
RealMatrix populations_of(const std::vector<ComplexVector>& states);

}  // namespace nlevel
