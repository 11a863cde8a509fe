#include "nlevel/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nlevel/error.hpp"
#include "nlevel/expm.hpp"

namespace nlevel {
namespace {

constexpr double kDegenerateGap = 1e-8;   // relative to the spectral radius
constexpr double kNearCoupling = 1e-8;    // |lambda^2 - g^2| relative to |Q|_F^2
constexpr double kDirectionFloor = 1e-10; // |D_j| relative to |Q|_F^2
constexpr double kJacobiTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

Complex phase(double angle) { return std::polar(1.0, angle); }

bool lagrange_safe(const Spectrum& s) {
  const double radius = s.spectral_radius();
  return radius > 0.0 && s.degeneracy_gap > kDegenerateGap * radius;
}

// Coefficients (constant term first) of prod_{m != skip} (x - roots[m]).
std::vector<double> product_polynomial(const std::vector<double>& roots, std::size_t skip) {
  std::vector<double> poly{1.0};
  for (std::size_t m = 0; m < roots.size(); ++m) {
    if (m == skip) continue;
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= roots[m] * poly[k];
    }
    poly = std::move(next);
  }
  return poly;
}

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double eigen_residual(const RealMatrix& q, const Eigen::Vector3d& x, double lambda) {
  return (q * x - lambda * x).norm();
}

// Kernel direction of (lambda I - Q) from the largest cross product of two of
// its rows. The (row 0, row 1) product is the unnormalized eigenvector
// (lambda g3 + g1 g2, lambda g2 + g1 g3, lambda^2 - g1^2).
Eigen::Vector3d cofactor_eigenvector(const RealMatrix& q, double lambda) {
  std::array<Vec3, 3> rows;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rows[r][c] = (r == c ? lambda : 0.0) - q(r, c);
  }
  const std::array<Vec3, 3> candidates{cross(rows[0], rows[1]), cross(rows[1], rows[2]),
                                       cross(rows[2], rows[0])};
  const auto best = std::max_element(candidates.begin(), candidates.end(),
                                     [](const Vec3& a, const Vec3& b) { return norm3(a) < norm3(b); });
  const double len = norm3(*best);
  if (len == 0.0) throw DegenerateSpectrum("eigenvalue is degenerate; no unique eigenvector");
  return Eigen::Vector3d((*best)[0], (*best)[1], (*best)[2]) / len;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::TwoLevel: return "two-level";
    case Method::Lagrange3: return "lagrange3";
    case Method::Lagrange4: return "lagrange4";
    case Method::EqualCoupling: return "equal-coupling";
    case Method::ClosedEigen3: return "closed-eigen3";
    case Method::JacobiEigen: return "jacobi";
    case Method::Reference: return "reference";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::TwoLevel, Method::Lagrange3, Method::Lagrange4, Method::EqualCoupling,
                   Method::ClosedEigen3, Method::JacobiEigen, Method::Reference}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown propagator method '" + std::string(name) + "'");
}

Propagator propagator_two_level(double g, double t) {
  const double c = std::cos(g * t);
  const Complex s(0.0, -std::sin(g * t));
  ComplexMatrix m(2, 2);
  m << c, s, s, c;
  return {2, std::move(m), t, Method::TwoLevel};
}

LagrangeCoeffs lagrange_coeffs(const Spectrum& spectrum, double t) {
  if (!lagrange_safe(spectrum)) {
    throw DegenerateSpectrum("spectrum gap " + std::to_string(spectrum.degeneracy_gap) +
                             " too small for the Lagrange expansion");
  }
  const auto& lambda = spectrum.eigenvalues;
  const std::size_t n = lambda.size();
  LagrangeCoeffs out;
  out.f.assign(n, Complex(0.0));
  out.t = t;
  out.spectrum = spectrum;
  if (t == 0.0) {
    out.f[0] = 1.0;
    return out;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double denom = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m != j) denom *= lambda[j] - lambda[m];
    }
    const Complex weight = phase(-t * lambda[j]) / denom;
    const std::vector<double> poly = product_polynomial(lambda, j);
    for (std::size_t k = 0; k < n; ++k) out.f[k] += weight * poly[k];
  }
  return out;
}

Propagator propagator_lagrange(const CouplingMatrix& q, double t) {
  const int n = q.size();
  if (n != 3 && n != 4) {
    throw InvalidInput("Lagrange expansion is implemented for n = 3 and 4, got " +
                       std::to_string(n));
  }
  const LagrangeCoeffs coeffs = lagrange_coeffs(closed_form_spectrum(q), t);
  const Method method = n == 3 ? Method::Lagrange3 : Method::Lagrange4;
  if (t == 0.0) return {n, ComplexMatrix::Identity(n, n), t, method};
  const RealMatrix& q1 = q.matrix();
  const RealMatrix q2 = q1 * q1;
  ComplexMatrix m = coeffs.f[0] * ComplexMatrix::Identity(n, n) +
                    coeffs.f[1] * q1.cast<Complex>() + coeffs.f[2] * q2.cast<Complex>();
  if (n == 4) {
    const RealMatrix q3 = q2 * q1;
    m += coeffs.f[3] * q3.cast<Complex>();
  }
  return {n, std::move(m), t, method};
}

Propagator propagator_equal_coupling(int n, double g, double t) {
  if (n < 2) throw InvalidInput("equal-coupling propagator needs n >= 2");
  const Complex global = phase(g * t);
  const Complex rank_one = (phase(-n * g * t) - 1.0) / static_cast<double>(n);
  ComplexMatrix m = ComplexMatrix::Constant(n, n, global * rank_one);
  m.diagonal().setConstant(global * (1.0 + rank_one));
  return {n, std::move(m), t, Method::EqualCoupling};
}

EigenDecomposition eigenvectors_three_level(const CouplingMatrix& q, const Spectrum& spectrum) {
  if (q.size() != 3 || spectrum.size() != 3) {
    throw InvalidInput("eigenvectors_three_level needs a 3x3 matrix and three eigenvalues");
  }
  const double g1 = q(0, 1);
  const double g2 = q(1, 2);
  const double g3 = q(0, 2);
  const double sum_sq = g1 * g1 + g2 * g2 + g3 * g3;
  const double norm_sq = q.matrix().squaredNorm();
  const double q_norm = std::sqrt(norm_sq);
  const std::array<double, 3> g_sq{g2 * g2, g3 * g3, g1 * g1};  // per component

  EigenDecomposition out;
  out.spectrum = spectrum;
  out.vectors.resize(3, 3);
  for (int j = 0; j < 3; ++j) {
    const double lambda = spectrum.eigenvalues[j];
    const double d = 3.0 * lambda * lambda - sum_sq;
    if (!(std::abs(d) >= kDirectionFloor * norm_sq) || norm_sq == 0.0) {
      throw DegenerateSpectrum("eigenvalue " + std::to_string(lambda) +
                               " is (nearly) degenerate; closed-form eigenvector undefined");
    }
    const double lambda_sq = lambda * lambda;
    const bool near_coupling = std::any_of(g_sq.begin(), g_sq.end(), [&](double gs) {
      return std::abs(lambda_sq - gs) <= kNearCoupling * norm_sq;
    });

    Eigen::Vector3d column;
    double residual = std::numeric_limits<double>::infinity();
    if (!near_coupling) {
      std::array<Complex, 3> root;
      for (int k = 0; k < 3; ++k) root[k] = std::sqrt(Complex((lambda_sq - g_sq[k]) / d, 0.0));
      // First component fixed, the remaining two signs searched.
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          const Eigen::Vector3d candidate(root[0].real(), s1 * root[1].real(), s2 * root[2].real());
          const double r = eigen_residual(q.matrix(), candidate, lambda);
          if (r < residual) {
            residual = r;
            column = candidate;
          }
        }
      }
    }
    if (near_coupling || residual > 1e-8 * q_norm) {
      column = cofactor_eigenvector(q.matrix(), lambda);
      residual = eigen_residual(q.matrix(), column, lambda);
      if (residual > 1e-8 * q_norm) {
        throw NumericError("closed-form eigenvector residual " + std::to_string(residual) +
                           " exceeds tolerance");
      }
    }
    out.vectors.col(j) = column;
  }
  return out;
}

EigenDecomposition jacobi_eigendecompose(const CouplingMatrix& q) {
  const int n = q.size();
  RealMatrix a = q.matrix();
  RealMatrix v = RealMatrix::Identity(n, n);
  const double target = kJacobiTol * q.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep <= kJacobiMaxSweeps; ++sweep) {
    if (off_norm() <= target) break;
    if (sweep == kJacobiMaxSweeps) {
      throw NumericError("Jacobi eigensolver did not converge in 100 sweeps");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (apr == 0.0) continue;
        const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkr = v(k, r);
          v(k, p) = c * vkp - s * vkr;
          v(k, r) = s * vkp + c * vkr;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) > a(y, y); });
  std::vector<double> values(n);
  EigenDecomposition out;
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  out.spectrum = make_spectrum(std::move(values));
  return out;
}

Propagator propagator_from_eigen(const EigenDecomposition& decomp, double t, Method method) {
  const int n = decomp.spectrum.size();
  if (decomp.vectors.rows() != n || decomp.vectors.cols() != n) {
    throw InvalidInput("eigendecomposition shape mismatch");
  }
  if (t == 0.0) return {n, ComplexMatrix::Identity(n, n), t, method};
  ComplexVector phases(n);
  for (int k = 0; k < n; ++k) phases(k) = phase(-t * decomp.spectrum.eigenvalues[k]);
  const ComplexMatrix o = decomp.vectors.cast<Complex>();
  ComplexMatrix m = o * phases.asDiagonal() * o.transpose();
  return {n, std::move(m), t, method};
}

Method select_method(const CouplingMatrix& q) {
  const int n = q.size();
  if (n == 2) return Method::TwoLevel;
  if (q.equal_coupling_value()) return Method::EqualCoupling;
  if (n == 3 || n == 4) {
    try {
      if (lagrange_safe(closed_form_spectrum(q))) {
        return n == 3 ? Method::Lagrange3 : Method::Lagrange4;
      }
    } catch (const InvalidInput&) {
      // Closed-form roots failed their own checks; the general path still works.
    }
  }
  return Method::JacobiEigen;
}

Propagator propagator(const CouplingMatrix& q, double t, std::optional<Method> method) {
  const int n = q.size();
  const Method chosen = method.value_or(select_method(q));
  if (!std::isfinite(t)) throw InvalidInput("time must be finite");

  switch (chosen) {
    case Method::TwoLevel:
      if (n != 2) throw InvalidInput("two-level propagator needs n = 2");
      return propagator_two_level(q(0, 1), t);
    case Method::Lagrange3:
    case Method::Lagrange4:
      if (n != (chosen == Method::Lagrange3 ? 3 : 4)) {
        throw InvalidInput(std::string(to_string(chosen)) + " does not apply to n = " +
                           std::to_string(n));
      }
      return propagator_lagrange(q, t);
    case Method::EqualCoupling: {
      const auto g = q.equal_coupling_value();
      if (!g) throw InvalidInput("couplings are not all equal");
      return propagator_equal_coupling(n, *g, t);
    }
    case Method::ClosedEigen3:
      if (n != 3) throw InvalidInput("closed-eigen3 needs n = 3");
      return propagator_from_eigen(eigenvectors_three_level(q, closed_form_spectrum(q)), t,
                                   Method::ClosedEigen3);
    case Method::JacobiEigen:
      return propagator_from_eigen(jacobi_eigendecompose(q), t, Method::JacobiEigen);
    case Method::Reference: {
      const ComplexMatrix a = Complex(0.0, -t) * q.matrix().cast<Complex>();
      return {n, reference_expm(a), t, Method::Reference};
    }
  }
  throw InvalidInput("unknown method");
}

}  // namespace nlevel
