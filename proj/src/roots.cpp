#include "nlevel/roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlevel/error.hpp"

namespace nlevel {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Imaginary residue allowed on an assembled root, relative to max(1, scale).
constexpr double kImagTol = 1e-10;

Complex principal_cbrt(Complex z) {
  if (z == Complex(0.0)) return Complex(0.0);
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

// Keeps the real part of each root; fails when the imaginary residue is not
// roundoff. `scale` bounds the root magnitudes.
std::vector<double> real_parts(const std::vector<Complex>& roots, double scale,
                               const char* what) {
  std::vector<double> out;
  out.reserve(roots.size());
  const double tol = kImagTol * std::max(1.0, scale);
  for (const Complex& z : roots) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z.imag()) > tol) {
      throw InvalidInput(std::string(what) + ": root has imaginary part " +
                         std::to_string(z.imag()) +
                         "; coefficients do not come from a real symmetric matrix");
    }
    out.push_back(z.real());
  }
  return out;
}

// One Newton step, kept only when it lowers |f|.
template <typename F, typename DF>
double polish(double x, F f, DF df) {
  const double fx = f(x);
  const double dfx = df(x);
  if (fx == 0.0 || dfx == 0.0 || !std::isfinite(dfx)) return x;
  const double next = x - fx / dfx;
  return std::abs(f(next)) < std::abs(fx) ? next : x;
}

Spectrum solve_biquadratic(const QuarticCoeffs& c) {
  // mu^2 + p mu + r = 0 with mu = lambda^2 >= 0.
  const double p = c.p;
  const double r = c.r;
  double disc = p * p - 4.0 * r;
  const double disc_scale = p * p + 4.0 * std::abs(r);
  if (disc < 0.0) {
    if (disc < -64.0 * kEps * disc_scale) {
      throw InvalidInput("biquadratic has complex roots");
    }
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  // Larger-magnitude root first, then the other from the product r.
  const double big = (p <= 0.0) ? (-p + sq) / 2.0 : (-p - sq) / 2.0;
  const double small = (big != 0.0) ? r / big : 0.0;
  const double mu_scale = std::max(std::abs(big), std::abs(small));
  std::array<double, 2> mus{big, small};
  for (double& mu : mus) {
    if (mu < 0.0) {
      if (mu < -64.0 * kEps * std::max(mu_scale, std::sqrt(disc_scale))) {
        throw InvalidInput("biquadratic has a negative lambda^2 root");
      }
      mu = 0.0;
    }
  }
  const double a = std::sqrt(mus[0]);
  const double b = std::sqrt(mus[1]);
  return make_spectrum({a, b, -b, -a});
}

}  // namespace

double Spectrum::spectral_radius() const {
  double r = 0.0;
  for (double v : eigenvalues) r = std::max(r, std::abs(v));
  return r;
}

Spectrum make_spectrum(std::vector<double> eigenvalues) {
  std::stable_sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  Spectrum s;
  s.degeneracy_gap = eigenvalues.size() < 2 ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < eigenvalues.size(); ++k) {
    s.degeneracy_gap = std::min(s.degeneracy_gap, eigenvalues[k - 1] - eigenvalues[k]);
  }
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

CubicCoeffs char_poly_3(const CouplingMatrix& q) {
  if (q.size() != 3) throw InvalidInput("char_poly_3 needs a 3x3 coupling matrix");
  const double g1 = q(0, 1);
  const double g2 = q(1, 2);
  const double g3 = q(0, 2);
  return {g1 * g1 + g2 * g2 + g3 * g3, 2.0 * g1 * g2 * g3};
}

QuarticCoeffs char_poly_4(const CouplingMatrix& q) {
  if (q.size() != 4) throw InvalidInput("char_poly_4 needs a 4x4 coupling matrix");
  const double g1 = q(0, 1);
  const double g2 = q(1, 2);
  const double g3 = q(2, 3);
  const double g4 = q(0, 2);
  const double g5 = q(1, 3);
  const double g6 = q(0, 3);
  QuarticCoeffs c;
  c.p = -(g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4 + g5 * g5 + g6 * g6);
  c.q = -2.0 * (g1 * g2 * g4 + g1 * g5 * g6 + g2 * g3 * g5 + g3 * g4 * g6);
  c.r = g1 * g1 * g3 * g3 + g2 * g2 * g6 * g6 + g4 * g4 * g5 * g5 -
        2.0 * g1 * g2 * g3 * g6 - 2.0 * g1 * g3 * g4 * g5 - 2.0 * g2 * g4 * g5 * g6;
  return c;
}

double cubic_residual(const CubicCoeffs& c, double x) {
  return (x * x - c.c1) * x - c.c0;
}

double quartic_residual(const QuarticCoeffs& c, double x) {
  const double x2 = x * x;
  return (x2 + c.p) * x2 + c.q * x + c.r;
}

Spectrum solve_cubic_depressed(const CubicCoeffs& c) {
  if (!std::isfinite(c.c1) || !std::isfinite(c.c0)) {
    throw InvalidInput("cubic coefficients must be finite");
  }
  const double scale = std::max(std::sqrt(std::abs(c.c1)), std::cbrt(std::abs(c.c0)));
  if (scale == 0.0) return make_spectrum({0.0, 0.0, 0.0});

  const double half = c.c0 / 2.0;
  const double third_cubed = c.c1 * c.c1 * c.c1 / 27.0;
  double disc = half * half - third_cubed;
  // A double root leaves disc at roundoff level of either sign.
  if (disc > 0.0 && disc <= 64.0 * kEps * (half * half + std::abs(third_cubed))) disc = 0.0;

  const Complex root_disc = std::sqrt(Complex(disc, 0.0));
  // Take the larger of half +- sqrt(disc) to avoid cancellation; swapping
  // alpha_+ and alpha_- only swaps lambda_2 and lambda_3.
  Complex radicand = Complex(half) + root_disc;
  const Complex other = Complex(half) - root_disc;
  if (std::abs(other) > std::abs(radicand)) radicand = other;

  const Complex alpha_plus = principal_cbrt(radicand);
  if (alpha_plus == Complex(0.0)) return make_spectrum({0.0, 0.0, 0.0});
  const Complex alpha_minus = (c.c1 / 3.0) / alpha_plus;

  const Complex sigma = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const Complex sigma2 = sigma * sigma;
  const std::vector<Complex> assembled{
      alpha_plus + alpha_minus,
      sigma2 * alpha_plus + sigma * alpha_minus,
      sigma * alpha_plus + sigma2 * alpha_minus,
  };
  std::vector<double> roots = real_parts(assembled, scale, "cubic");
  for (double& x : roots) {
    x = polish(
        x, [&](double v) { return cubic_residual(c, v); },
        [&](double v) { return 3.0 * v * v - c.c1; });
  }
  return make_spectrum(std::move(roots));
}

Spectrum solve_quartic(const QuarticCoeffs& c) {
  if (!std::isfinite(c.p) || !std::isfinite(c.q) || !std::isfinite(c.r)) {
    throw InvalidInput("quartic coefficients must be finite");
  }
  const double scale = std::max({std::sqrt(std::abs(c.p)), std::cbrt(std::abs(c.q)),
                                 std::sqrt(std::sqrt(std::abs(c.r)))});
  if (scale == 0.0) return make_spectrum({0.0, 0.0, 0.0, 0.0});

  const double q_floor =
      1e-12 * std::max({1.0, std::abs(c.p), std::sqrt(std::abs(c.r))});
  if (std::abs(c.q) <= q_floor) return solve_biquadratic(c);

  // Resolvent B^3 + a B^2 + b B + d = 0, depressed by B = y - a/3.
  const double a = c.p / 2.0;
  const double b = (c.p * c.p - 4.0 * c.r) / 16.0;
  const double d = -c.q * c.q / 64.0;
  const CubicCoeffs depressed{a * a / 3.0 - b, -(2.0 * a * a * a / 27.0 - a * b / 3.0 + d)};
  const Spectrum resolvent = solve_cubic_depressed(depressed);
  double big_b = resolvent.eigenvalues.front() - a / 3.0;
  big_b = polish(
      big_b, [&](double v) { return ((v + a) * v + b) * v + d; },
      [&](double v) { return (3.0 * v + 2.0 * a) * v + b; });
  if (big_b < -1e-12 * scale * scale) {
    throw InvalidInput("resolvent cubic has no non-negative root");
  }
  if (big_b <= 0.0) return solve_biquadratic(c);

  const double beta = std::sqrt(big_b);
  const double k = c.q / (4.0 * beta);
  const double m = big_b + c.p / 2.0;
  // alpha^2 = (-k + sqrt(k^2 - m^2))/2, gamma^2 = (-k - sqrt(k^2 - m^2))/2.
  const Complex root_disc = std::sqrt(Complex((k - m) * (k + m), 0.0));
  const Complex alpha_sq_sum = Complex(-k) + root_disc;
  const Complex gamma_sq_sum = Complex(-k) - root_disc;
  const Complex product = Complex(m * m / 4.0);
  Complex alpha_sq;
  Complex gamma_sq;
  if (std::abs(alpha_sq_sum) >= std::abs(gamma_sq_sum)) {
    alpha_sq = alpha_sq_sum / 2.0;
    gamma_sq = alpha_sq != Complex(0.0) ? product / alpha_sq : Complex(0.0);
  } else {
    gamma_sq = gamma_sq_sum / 2.0;
    alpha_sq = gamma_sq != Complex(0.0) ? product / gamma_sq : Complex(0.0);
  }

  const Complex alpha0 = std::sqrt(alpha_sq);
  const Complex gamma0 = std::sqrt(gamma_sq);
  const Complex target(-m / 2.0);
  Complex alpha = alpha0;
  Complex gamma = gamma0;
  double best = std::numeric_limits<double>::infinity();
  for (double sa : {1.0, -1.0}) {
    for (double sg : {1.0, -1.0}) {
      const double mismatch = std::abs(sa * alpha0 * sg * gamma0 - target);
      if (mismatch < best) {
        best = mismatch;
        alpha = sa * alpha0;
        gamma = sg * gamma0;
      }
    }
  }
  if (best > 1e-9 * std::max({1.0, std::abs(m), scale * scale})) {
    throw InvalidInput("no sign choice for alpha, gamma satisfies alpha*gamma = -(B + p/2)/2");
  }

  const Complex i(0.0, 1.0);
  const std::vector<Complex> assembled{
      alpha + beta + gamma,
      -i * alpha - beta + i * gamma,
      -alpha + beta - gamma,
      i * alpha - beta - i * gamma,
  };
  std::vector<double> roots = real_parts(assembled, scale, "quartic");
  for (double& x : roots) {
    x = polish(
        x, [&](double v) { return quartic_residual(c, v); },
        [&](double v) { return (4.0 * v * v + 2.0 * c.p) * v + c.q; });
  }
  return make_spectrum(std::move(roots));
}

Spectrum closed_form_spectrum(const CouplingMatrix& q) {
  switch (q.size()) {
    case 2: {
      const double g = std::abs(q(0, 1));
      return make_spectrum({g, -g});
    }
    case 3:
      return solve_cubic_depressed(char_poly_3(q));
    case 4:
      return solve_quartic(char_poly_4(q));
    default:
      throw InvalidInput("no closed-form spectrum for n = " + std::to_string(q.size()));
  }
}

}  // namespace nlevel
