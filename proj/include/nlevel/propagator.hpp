#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlevel/coupling_matrix.hpp"
#include "nlevel/roots.hpp"
#include "nlevel/types.hpp"

namespace nlevel {

enum class Method {
  TwoLevel,
  Lagrange3,
  Lagrange4,
  EqualCoupling,
  ClosedEigen3,
  JacobiEigen,
  Reference,
};

std::string_view to_string(Method method);
/// Accepts the names produced by to_string; throws InvalidInput otherwise.
Method parse_method(std::string_view name);

/// exp(-itQ) together with the method that produced it.
struct Propagator {
  int n = 0;
  ComplexMatrix matrix;
  double t = 0.0;
  Method method = Method::Reference;
};

/// Coefficients f_k of exp(-itQ) = sum_k f_k Q^k.
struct LagrangeCoeffs {
  std::vector<Complex> f;
  double t = 0.0;
  Spectrum spectrum;
};

/// Q = O diag(lambda) O^T with orthonormal eigenvector columns in O.
struct EigenDecomposition {
  Spectrum spectrum;
  RealMatrix vectors;
};

/// Rabi matrix [[cos gt, -i sin gt], [-i sin gt, cos gt]].
Propagator propagator_two_level(double g, double t);

/// Partial-fraction (Lagrange) coefficients over the spectrum. Throws
/// DegenerateSpectrum when the gap is at or below 1e-8 times the spectral
/// radius.
LagrangeCoeffs lagrange_coeffs(const Spectrum& spectrum, double t);

/// Cayley-Hamilton expansion f0 + f1 Q + f2 Q^2 (+ f3 Q^3) for n = 3, 4,
/// with the spectrum from the closed-form root solvers.
Propagator propagator_lagrange(const CouplingMatrix& q, double t);

/// exp(-itgR) = e^{igt} (1 + (e^{-ingt} - 1)/n |1><1|), R = |1><1| - 1.
Propagator propagator_equal_coupling(int n, double g, double t);

/// Normalized eigenvectors of a 3x3 Q from the closed-form component formula
///   x_j = ( sqrt((l^2-g2^2)/D), sqrt((l^2-g3^2)/D), sqrt((l^2-g1^2)/D) ),
///   D = 3 l^2 - (g1^2 + g2^2 + g3^2),
/// with square-root signs chosen to minimize |Q x - l x|. Columns with
/// l^2 within 1e-8 of some g^2 use the unnormalized cofactor form instead.
EigenDecomposition eigenvectors_three_level(const CouplingMatrix& q,
                                            const Spectrum& spectrum);

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// 1e-12 |Q|_F. Eigenvalues sorted descending, columns permuted to match.
EigenDecomposition jacobi_eigendecompose(const CouplingMatrix& q);

/// O diag(exp(-it lambda)) O^T.
Propagator propagator_from_eigen(const EigenDecomposition& decomp, double t,
                                 Method method = Method::JacobiEigen);

/// Chooses a method when none is forced:
///   n = 2 -> TwoLevel; equal couplings -> EqualCoupling;
///   n = 3, 4 -> Lagrange3/4 unless the spectrum is degenerate, then Jacobi;
///   n >= 5 -> JacobiEigen.
/// A forced method whose preconditions fail throws.
Method select_method(const CouplingMatrix& q);
Propagator propagator(const CouplingMatrix& q, double t,
                      std::optional<Method> method = std::nullopt);

}  // namespace nlevel
