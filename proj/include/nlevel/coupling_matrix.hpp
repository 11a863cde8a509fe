#pragma once

#include <optional>

#include "nlevel/types.hpp"

namespace nlevel {

/// Real symmetric matrix of coupling constants with zero diagonal.
///
/// In the rotating frame, once the resonance and consistency conditions hold,
/// the Schrodinger equation reduces to i dPsi/dt = Q Psi with this Q.
class CouplingMatrix {
 public:
  /// Throws InvalidInput unless `entries` is square (n >= 2), finite,
  /// exactly symmetric and has an exactly zero diagonal.
  explicit CouplingMatrix(RealMatrix entries);

  /// g times the all-ones matrix with zero diagonal.
  static CouplingMatrix equal_coupling(int n, double g);

  int size() const { return static_cast<int>(entries_.rows()); }
  const RealMatrix& matrix() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  double frobenius_norm() const { return entries_.norm(); }
  /// Largest absolute row sum, a Gershgorin bound on the spectral radius.
  double max_row_sum() const;

  /// The common off-diagonal value when all couplings agree within
  /// `rel_tol` of the largest one.
  std::optional<double> equal_coupling_value(double rel_tol = 1e-12) const;

 private:
  RealMatrix entries_;
};

}  // namespace nlevel
