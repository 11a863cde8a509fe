#pragma once

#include <vector>

#include "nlevel/coupling_matrix.hpp"

namespace nlevel {

/// lambda^3 - c1 lambda - c0 = 0.
struct CubicCoeffs {
  double c1 = 0.0;
  double c0 = 0.0;
};

/// lambda^4 + p lambda^2 + q lambda + r = 0.
struct QuarticCoeffs {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// Real eigenvalues sorted descending, with the smallest pairwise
/// separation recorded for dispatch decisions.
struct Spectrum {
  std::vector<double> eigenvalues;
  double degeneracy_gap = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  double spectral_radius() const;
};

/// Sorts descending (stable, so ties keep their assembly order) and
/// records the degeneracy gap.
Spectrum make_spectrum(std::vector<double> eigenvalues);

/// Characteristic cubic of a 3x3 coupling matrix, with
/// (g1, g2, g3) = (Q01, Q12, Q02).
CubicCoeffs char_poly_3(const CouplingMatrix& q);

/// Characteristic quartic of a 4x4 coupling matrix. Coupling labels:
/// g1 = Q01, g2 = Q12, g3 = Q23, g4 = Q02, g5 = Q13, g6 = Q03.
QuarticCoeffs char_poly_4(const CouplingMatrix& q);

/// Cardano roots of a depressed cubic with three real roots.
///
/// alpha_plus is the principal cube root of c0/2 + sqrt(c0^2/4 - c1^3/27);
/// alpha_minus = (c1/3)/alpha_plus keeps the pair on matching branches. The
/// roots are alpha_+ + alpha_-, s^2 alpha_+ + s alpha_-, s alpha_+ + s^2
/// alpha_- with s = exp(2 pi i/3), each polished by one guarded Newton step.
/// Throws InvalidInput when a root has a non-negligible imaginary part.
Spectrum solve_cubic_depressed(const CubicCoeffs& c);

/// Euler roots of a depressed quartic with four real roots.
///
/// beta = sqrt(B) for the largest root B of the resolvent cubic
/// 64B^3 + 32pB^2 - 4(4r - p^2)B - q^2 = 0; alpha^2 and gamma^2 solve
/// x^2 + (q/4beta) x + (B + p/2)^2/4 = 0 and their signs are fixed by
/// alpha gamma = -(B + p/2)/2. Roots with sigma = i:
///   alpha + beta + gamma,  -i alpha - beta + i gamma,
///   -alpha + beta - gamma,  i alpha - beta - i gamma.
/// q ~ 0 is solved as a biquadratic.
Spectrum solve_quartic(const QuarticCoeffs& c);

/// Eigenvalues of Q from the closed-form route: +-|g| for n = 2, Cardano for
/// n = 3, Euler for n = 4. Throws InvalidInput for other sizes.
Spectrum closed_form_spectrum(const CouplingMatrix& q);

/// Residuals used by the solvers' refinement and by tests.
double cubic_residual(const CubicCoeffs& c, double lambda);
double quartic_residual(const QuarticCoeffs& c, double lambda);

}  // namespace nlevel
