#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlevel/error.hpp"
#include "nlevel/model.hpp"
#include "oracles.hpp"

using namespace nlevel;
using nlevel::testing::random_reducible_system;
using nlevel::testing::random_state;

namespace {

const Complex kI(0.0, 1.0);

LevelSystem three_level(std::vector<double> e, double w01, double w12, double w02) {
  return LevelSystem(std::move(e), {{0, 1, 1.0, w01, 0.0}, {1, 2, 2.0, w12, 0.0}, {0, 2, 3.0, w02, 0.0}});
}

}  // namespace

TEST_CASE("coupling matrix construction") {
  CHECK_THROWS_AS(CouplingMatrix(RealMatrix::Zero(1, 1)), InvalidInput);
  RealMatrix asym = RealMatrix::Zero(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(CouplingMatrix{asym}, InvalidInput);
  RealMatrix diag = RealMatrix::Zero(2, 2);
  diag(0, 0) = 0.1;
  CHECK_THROWS_AS(CouplingMatrix{diag}, InvalidInput);
  RealMatrix nan = RealMatrix::Zero(2, 2);
  nan(0, 1) = nan(1, 0) = std::nan("");
  CHECK_THROWS_AS(CouplingMatrix{nan}, InvalidInput);

  const CouplingMatrix r = CouplingMatrix::equal_coupling(4, 1.0);
  CHECK(r.equal_coupling_value().value() == 1.0);
  CHECK(r.frobenius_norm() == doctest::Approx(std::sqrt(12.0)));
  CHECK(r.max_row_sum() == 3.0);
}

TEST_CASE("level system validation") {
  CHECK_THROWS_AS(LevelSystem({0.0}, {}), InvalidInput);
  CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {}), InvalidInput);
  CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {{0, 1, -1.0, 1.0, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {{0, 1, 1.0, 1.0, 0.0}, {1, 0, 1.0, 1.0, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {{0, 2, 1.0, 1.0, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {{0, 0, 1.0, 1.0, 0.0}}), InvalidInput);
  // Orientation is free; storage is sorted by (i, j).
  const LevelSystem s({0.0, 1.0, 3.0}, {{2, 1, 2.0, 2.0, 0.0}, {0, 2, 3.0, 3.0, 0.0}, {1, 0, 1.0, 1.0, 0.0}});
  CHECK(s.couplings()[0].i == 0);
  CHECK(s.couplings()[0].j == 1);
  CHECK(s.couplings()[2].i == 1);
  CHECK(s.g(2, 0) == 3.0);
  CHECK(s.delta(2) == 3.0);
  CHECK(s.sequential_omega(2) == 2.0);
}

TEST_CASE("build_coupling_matrix") {
  RealMatrix want(3, 3);
  want << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  const CouplingMatrix q = build_coupling_matrix(three_level({0, 1, 3}, 1, 2, 3));
  CHECK(q.matrix() == want);
  CHECK(q.matrix().trace() == 0.0);

  const LevelSystem two({0.0, 0.7}, {{0, 1, 0.4, 0.7, 0.0}});
  RealMatrix want2(2, 2);
  want2 << 0, 0.4, 0.4, 0;
  CHECK(build_coupling_matrix(two).matrix() == want2);

  std::vector<Coupling> ones;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) ones.push_back({i, j, 1.0, double(j - i), 0.0});
  CHECK(build_coupling_matrix(LevelSystem({0, 1, 2, 3}, ones)).matrix() ==
        CouplingMatrix::equal_coupling(4, 1.0).matrix());
}

TEST_CASE("resonance and consistency checks") {
  const ConditionReport ok = check_resonance(three_level({0, 1, 3}, 1, 2, 3), 1e-9);
  CHECK(ok.satisfied);
  CHECK(ok.worst == 0.0);
  CHECK(ok.residuals.size() == 2);

  const ConditionReport off = check_resonance(three_level({0, 1, 3}, 1.1, 2, 3.1), 1e-9);
  CHECK_FALSE(off.satisfied);
  CHECK(off.worst == doctest::Approx(0.1));
  CHECK(off.residuals[0].label == "0-1");

  CHECK(check_resonance(LevelSystem({0.0, 2.5}, {{0, 1, 1.0, 2.5, 0.0}}), 1e-9).satisfied);

  const ConditionReport cons = check_consistency(three_level({0, 1, 3}, 1, 2, 3), 1e-9);
  CHECK(cons.satisfied);
  CHECK(cons.worst == 0.0);
  REQUIRE(cons.residuals.size() == 1);
  CHECK(cons.residuals[0].label == "0-2");

  const ConditionReport bad = check_consistency(three_level({0, 1, 3}, 1, 2, 2.5), 1e-9);
  CHECK_FALSE(bad.satisfied);
  CHECK(bad.worst == doctest::Approx(0.5));

  std::mt19937_64 rng(1);
  const LevelSystem four = random_reducible_system(rng, 4);
  const double tol = default_condition_tolerance(four);
  CHECK(check_consistency(four, tol).satisfied);
  CHECK(check_consistency(four, tol).residuals.size() == 3);
  CHECK(check_resonance(four, tol).satisfied);
  CHECK(check_consistency(LevelSystem({0.0, 1.0}, {{0, 1, 1.0, 1.0, 0.0}}), 1e-9).residuals.empty());
}

TEST_CASE("frame matrix") {
  const LevelSystem s = three_level({0, 1, 3}, 1, 2, 3);
  CHECK(frame_matrix(s, 0.0) == ComplexMatrix::Identity(3, 3));
  const ComplexMatrix u = frame_matrix(s, std::numbers::pi);
  CHECK(std::abs(u(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(u(1, 1) + 1.0) < 1e-15);
  CHECK(std::abs(u(2, 2) + 1.0) < 1e-15);

  const LevelSystem two({0.0, 1.7}, {{0, 1, 0.3, 1.7, 0.0}});
  CHECK(std::abs(frame_matrix(two, 0.9)(1, 1) - std::polar(1.0, -1.7 * 0.9)) < 1e-15);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(-50.0, 50.0);
  const LevelSystem five = random_reducible_system(rng, 5);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix f = frame_matrix(five, ut(rng));
    CHECK((f * f.adjoint() - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Hamiltonians") {
  const LevelSystem s = three_level({0, 1, 3}, 1, 2, 3);
  RealMatrix at0(3, 3);
  at0 << 0, 1, 3, 1, 1, 2, 3, 2, 3;
  CHECK(hamiltonian_rwa(s, 0.0) == at0.cast<Complex>());

  const LevelSystem two({0.0, 1.5}, {{0, 1, 0.4, 1.5, 0.0}});
  const double t = 0.37;
  const ComplexMatrix h2 = hamiltonian_rwa(two, t);
  CHECK(std::abs(h2(0, 1) - 0.4 * std::polar(1.0, 1.5 * t)) < 1e-15);
  CHECK(std::abs(h2(1, 0) - 0.4 * std::polar(1.0, -1.5 * t)) < 1e-15);
  CHECK(h2(1, 1) == Complex(1.5));

  const LevelSystem phased({0.0, 1.5}, {{0, 1, 0.4, 1.5, 0.3}});
  CHECK_THROWS_AS(hamiltonian_rwa(phased, 0.0), InvalidInput);
  const ComplexMatrix hf = hamiltonian_full(phased, t);
  CHECK(hf(0, 1) == hf(1, 0));
  CHECK(hf(0, 1).real() == doctest::Approx(2 * 0.4 * std::cos(1.5 * t + 0.3)));
  CHECK(hf(0, 1).imag() == 0.0);

  const LevelSystem quiet({0.0, 1.0, 2.0}, {{0, 1, 0.0, 1.0, 0.0}, {1, 2, 0.0, 1.0, 0.0}, {0, 2, 0.0, 2.0, 0.0}});
  for (double tt : {0.0, 1.0, 7.3}) {
    ComplexMatrix h0 = ComplexMatrix::Zero(3, 3);
    h0(1, 1) = 1.0;
    h0(2, 2) = 2.0;
    CHECK(hamiltonian_full(quiet, tt) == h0);
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(-20.0, 20.0);
  const LevelSystem four = random_reducible_system(rng, 4);
  for (int k = 0; k < 20; ++k) {
    const double tk = ut(rng);
    const ComplexMatrix hr = hamiltonian_rwa(four, tk);
    const ComplexMatrix hfull = hamiltonian_full(four, tk);
    CHECK((hr - hr.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(hfull == hfull.adjoint());
  }
}

TEST_CASE("frame identity") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ut(-30.0, 30.0);
  for (int n = 2; n <= 5; ++n) {
    const LevelSystem s = random_reducible_system(rng, n);
    const ComplexMatrix q = build_coupling_matrix(s).matrix().cast<Complex>();
    for (int k = 0; k < 10; ++k) {
      const double t = ut(rng);
      const ComplexMatrix u = frame_matrix(s, t);
      ComplexMatrix shift = ComplexMatrix::Zero(n, n);
      double cumulative = 0.0;
      for (int j = 1; j < n; ++j) {
        cumulative += s.sequential_omega(j);
        shift(j, j) = cumulative;
      }
      // U^dag H U - i U^dag dU/dt
      const ComplexMatrix effective = u.adjoint() * hamiltonian_rwa(s, t) * u - shift;
      CHECK((effective - q).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, s.max_abs_omega()));
    }
  }
}

TEST_CASE("full_solution") {
  const double g = 0.8;
  const double w = 1.9;
  const LevelSystem two({0.0, w}, {{0, 1, g, w, 0.0}});
  const StateVector ground = StateVector::basis(2, 0);
  CHECK(full_solution(two, ground, 0.0).amplitudes() == ground.amplitudes());
  for (double t : {0.1, 1.0, 3.3, 17.0}) {
    const StateVector psi = full_solution(two, ground, t);
    CHECK(std::abs(psi[0] - std::cos(g * t)) < 1e-12);
    CHECK(std::abs(psi[1] - (-kI * std::polar(1.0, -w * t) * std::sin(g * t))) < 1e-12);
  }

  CHECK_THROWS_AS(full_solution(three_level({0, 1, 3}, 1, 2, 2.5), StateVector::basis(3, 0), 1.0),
                  ConditionViolation);
  CHECK_THROWS_AS(full_solution(three_level({0, 1, 3}, 1.2, 2, 3.2), StateVector::basis(3, 0), 1.0),
                  ConditionViolation);
  const LevelSystem phased({0.0, 1.5}, {{0, 1, 0.4, 1.5, 0.3}});
  CHECK_THROWS_AS(full_solution(phased, ground, 1.0), ConditionViolation);
  try {
    full_solution(three_level({0, 1, 3}, 1, 2, 2.5), StateVector::basis(3, 0), 1.0);
  } catch (const ConditionViolation& e) {
    CHECK(e.report().worst == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(full_solution(two, StateVector::basis(3, 0), 1.0), InvalidInput);

  std::mt19937_64 rng(6);
  for (int n = 2; n <= 6; ++n) {
    const LevelSystem s = random_reducible_system(rng, n);
    const StateVector psi0(random_state(rng, n));
    const double horizon = 100.0 / s.max_coupling();
    for (double frac : {0.1, 0.5, 1.0}) {
      const StateVector psi = full_solution(s, psi0, frac * horizon);
      CHECK(std::abs(psi.amplitudes().norm() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("closed_form_series and grids") {
  CHECK(uniform_grid(2.0, 1) == std::vector<double>{0.0});
  const auto grid = uniform_grid(2.0, 5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.back() == 2.0);
  CHECK(grid[2] == 1.0);
  CHECK_THROWS_AS(uniform_grid(1.0, 0), InvalidInput);

  const LevelSystem s = three_level({0, 1, 3}, 1, 2, 3);
  Method used = Method::Reference;
  const TimeSeries ts = closed_form_series(s, StateVector::basis(3, 0), grid, std::nullopt, &used);
  CHECK(used == Method::Lagrange3);
  CHECK(ts.populations.rows() == 5);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(ts.populations.row(k).sum() - 1.0) < 1e-12);
}
