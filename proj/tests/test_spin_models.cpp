#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "spinrl/linalg.hpp"
#include "spinrl/spin_models.hpp"

using namespace spinrl;

namespace {

SystemSpec single_spec(DriveVariant drive = DriveVariant::A) {
  SystemSpec s;
  s.kind = SystemKind::SingleSpin;
  s.drive = drive;
  return s;
}

SystemSpec two_spec(DriveVariant drive = DriveVariant::Step) {
  SystemSpec s;
  s.kind = SystemKind::TwoSpin;
  s.drive = drive;
  return s;
}

}  // namespace

TEST_CASE("system spec validation rejects mismatched drives and bad sizes") {
  CHECK_NOTHROW(validate(single_spec(DriveVariant::A)));
  CHECK_NOTHROW(validate(single_spec(DriveVariant::B)));
  CHECK_NOTHROW(validate(two_spec(DriveVariant::Step)));
  CHECK_NOTHROW(validate(two_spec(DriveVariant::Smooth)));

  SystemSpec bad = single_spec(DriveVariant::Step);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = two_spec(DriveVariant::A);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  SystemSpec s = single_spec();
  s.n_steps = 0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = single_spec();
  s.tau = -1.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = single_spec();
  s.beta = 0.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = single_spec();
  s.b0 = 0.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);

  CHECK(single_spec().dim() == 2);
  CHECK(two_spec().dim() == 4);
}

TEST_CASE("single spin endpoints: pure z field at t=0, pure x field at t=tau") {
  for (DriveVariant d : {DriveVariant::A, DriveVariant::B}) {
    SystemSpec s = single_spec(d);
    Matrix h0 = single_spin_hamiltonian(s, 0.0);
    CHECK((h0 - Matrix(0.5 * pauli('z'))).cwiseAbs().maxCoeff() < 1e-14);
    Matrix ht = single_spin_hamiltonian(s, s.tau);
    CHECK((ht - Matrix(0.5 * pauli('x'))).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("single spin field magnitude stays at b0 and bz stays non-negative") {
  for (DriveVariant d : {DriveVariant::A, DriveVariant::B}) {
    SystemSpec s = single_spec(d);
    s.b0 = 1.7;
    for (int i = 0; i <= 40; ++i) {
      double t = s.tau * i / 40.0;
      Matrix h = single_spin_hamiltonian(s, t);
      // h = (bx sx + bz sz)/2, so bx = 2 Re h(0,1), bz = 2 Re h(0,0).
      double bx = 2.0 * h(0, 1).real();
      double bz = 2.0 * h(0, 0).real();
      CHECK(bz >= 0.0);
      CHECK(bx * bx + bz * bz == doctest::Approx(s.b0 * s.b0).epsilon(1e-12));
    }
  }
}

TEST_CASE("drive profiles A and B differ away from the endpoints") {
  SystemSpec sa = single_spec(DriveVariant::A);
  SystemSpec sb = single_spec(DriveVariant::B);
  double t = 0.25;
  double bx_a = 2.0 * single_spin_hamiltonian(sa, t)(0, 1).real();
  double bx_b = 2.0 * single_spin_hamiltonian(sb, t)(0, 1).real();
  CHECK(bx_a == doctest::Approx(std::sin(M_PI / 8)).epsilon(1e-12));
  // B ramps through sin((pi/2) sin^2(...)): slower start than A.
  double want_b = std::sin(0.5 * M_PI * std::pow(std::sin(M_PI / 8), 2));
  CHECK(bx_b == doctest::Approx(want_b).epsilon(1e-12));
  CHECK(bx_b < bx_a);
}

TEST_CASE("single spin control is -sigma_y") {
  Matrix m = single_spin_control();
  CHECK(std::abs(m(0, 1) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(m(1, 0) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(m(0, 0)) < 1e-15);
  CHECK(hermiticity_residual(m) == 0.0);
}

TEST_CASE("two spin bare hamiltonian at t=0 is diag(3/2,1/2,-1/2,-3/2)") {
  SystemSpec s = two_spec(DriveVariant::Step);
  Matrix h = two_spin_hamiltonian(s, 0.0);
  double want[4] = {1.5, 0.5, -0.5, -1.5};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex expect = (i == j) ? Complex(want[i], 0) : Complex(0, 0);
      CHECK(std::abs(h(i, j) - expect) < 1e-14);
    }
  }
}

TEST_CASE("step coupling switches on exactly at tau/2 and is right-continuous") {
  SystemSpec s = two_spec(DriveVariant::Step);
  // The transverse exchange puts weight 2J on the (1,2) element.
  CHECK(std::abs(two_spin_hamiltonian(s, 0.49999)(1, 2)) < 1e-14);
  CHECK(two_spin_hamiltonian(s, 0.5)(1, 2).real() == doctest::Approx(2.0));
  CHECK(two_spin_hamiltonian(s, 1.0)(1, 2).real() == doctest::Approx(2.0));

  // On the default 10-step grid the left endpoints t_5..t_9 carry J=1.
  auto grid = hamiltonian_grid(s);
  REQUIRE(grid.size() == 10);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(grid[i](1, 2)) < 1e-14);
  for (int i = 5; i < 10; ++i) CHECK(grid[i](1, 2).real() == doctest::Approx(2.0));
}

TEST_CASE("smooth coupling hits the frozen midpoint value and the endpoints") {
  SystemSpec s = two_spec(DriveVariant::Smooth);
  CHECK(std::abs(two_spin_hamiltonian(s, 0.0)(1, 2)) < 1e-14);
  CHECK(two_spin_hamiltonian(s, s.tau)(1, 2).real() == doctest::Approx(2.0).epsilon(1e-12));
  // J(tau/2) = sin(pi/2 - (pi/2) cos(pi/4)); the matrix element is 2J.
  CHECK(two_spin_hamiltonian(s, 0.5)(1, 2).real() ==
        doctest::Approx(2 * 0.4440158403262132).epsilon(1e-12));
}

TEST_CASE("two spin control operators have the expected sparsity") {
  // Difference form acts purely in the odd-parity block {|01>, |10>},
  // the block the exchange drive pushes out of equilibrium.
  Matrix diff = two_spin_control(TwoSpinControlForm::Difference);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex want(0, 0);
      if (i == 1 && j == 2) want = Complex(0, 2);
      if (i == 2 && j == 1) want = Complex(0, -2);
      CHECK(std::abs(diff(i, j) - want) < 1e-14);
    }
  }
  CHECK(hermiticity_residual(diff) < 1e-15);

  // Symmetric form couples only |00> and |11>.
  Matrix sym = two_spin_control(TwoSpinControlForm::Symmetric);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex want(0, 0);
      if (i == 0 && j == 3) want = Complex(0, -2);
      if (i == 3 && j == 0) want = Complex(0, 2);
      CHECK(std::abs(sym(i, j) - want) < 1e-14);
    }
  }
  CHECK(hermiticity_residual(sym) < 1e-15);

  // Doubled single-product form touches both blocks.
  Matrix dbl = two_spin_control(TwoSpinControlForm::Doubled);
  CHECK(std::abs(dbl(0, 3) - Complex(0, -2)) < 1e-14);
  CHECK(std::abs(dbl(1, 2) - Complex(0, 2)) < 1e-14);
  CHECK(std::abs(dbl(2, 1) - Complex(0, -2)) < 1e-14);
  CHECK(std::abs(dbl(3, 0) - Complex(0, 2)) < 1e-14);
  CHECK(hermiticity_residual(dbl) < 1e-15);

  CHECK((sym + diff - dbl).cwiseAbs().maxCoeff() < 1e-14);

  SystemSpec s = two_spec();
  CHECK((control_operator(s) - diff).cwiseAbs().maxCoeff() < 1e-15);
  s.control_form = TwoSpinControlForm::Symmetric;
  CHECK((control_operator(s) - sym).cwiseAbs().maxCoeff() < 1e-15);
  s.control_form = TwoSpinControlForm::Doubled;
  CHECK((control_operator(s) - dbl).cwiseAbs().maxCoeff() < 1e-15);

  CHECK(to_string(TwoSpinControlForm::Difference) == "difference");
  CHECK(control_form_from_string("symmetric") == TwoSpinControlForm::Symmetric);
  CHECK_THROWS_AS(control_form_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("final two spin hamiltonian has the nondegenerate spectrum") {
  SystemSpec s = two_spec(DriveVariant::Step);
  EigResult e = eig_hermitian(two_spin_hamiltonian(s, 1.0));
  // Even block gives +-3/2; odd block [[1/2, 2], [2, -1/2]] gives
  // +-sqrt(1/4 + 4) = +-sqrt(17)/2.
  const double s17 = std::sqrt(17.0) / 2;
  CHECK(e.values(0) == doctest::Approx(-s17).epsilon(1e-12));
  CHECK(e.values(1) == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(e.values(2) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(e.values(3) == doctest::Approx(s17).epsilon(1e-12));
  CHECK(min_eigen_gap(e.values) > 0.3);
}

TEST_CASE("hamiltonian grid samples left endpoints") {
  SystemSpec s = single_spec();
  s.n_steps = 4;
  s.tau = 2.0;
  auto grid = hamiltonian_grid(s);
  REQUIRE(grid.size() == 4);
  for (int i = 0; i < 4; ++i) {
    Matrix direct = single_spin_hamiltonian(s, i * 0.5);
    CHECK((grid[i] - direct).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("system dispatch matches the per-kind builders") {
  SystemSpec s1 = single_spec();
  CHECK((system_hamiltonian(s1, 0.3) - single_spin_hamiltonian(s1, 0.3))
            .cwiseAbs().maxCoeff() < 1e-15);
  CHECK((control_operator(s1) - single_spin_control()).cwiseAbs().maxCoeff() < 1e-15);
  SystemSpec s2 = two_spec();
  CHECK((system_hamiltonian(s2, 0.7) - two_spin_hamiltonian(s2, 0.7))
            .cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("approach helpers") {
  CHECK(to_string(Approach::DenseDensity) == "dense-density");
  CHECK(to_string(Approach::DensePure) == "dense-pure");
  CHECK(to_string(Approach::LstmEnergyTime) == "lstm-energy-time");
  CHECK(to_string(Approach::LstmTimeOnly) == "lstm-time-only");

  CHECK(!approach_uses_lstm(Approach::DenseDensity));
  CHECK(!approach_uses_lstm(Approach::DensePure));
  CHECK(approach_uses_lstm(Approach::LstmEnergyTime));
  CHECK(approach_uses_lstm(Approach::LstmTimeOnly));

  CHECK(!approach_uses_measurement(Approach::DenseDensity));
  CHECK(approach_uses_measurement(Approach::DensePure));
  CHECK(approach_uses_measurement(Approach::LstmEnergyTime));
  CHECK(!approach_uses_measurement(Approach::LstmTimeOnly));

  CHECK(observation_size(Approach::DenseDensity, 2) == 5);
  CHECK(observation_size(Approach::DenseDensity, 4) == 17);
  CHECK(observation_size(Approach::DensePure, 2) == 5);
  CHECK(observation_size(Approach::DensePure, 4) == 9);
  CHECK(observation_size(Approach::LstmEnergyTime, 2) == 2);
  CHECK(observation_size(Approach::LstmTimeOnly, 4) == 1);
}

TEST_CASE("density observation layout: time, diagonal, then upper Re/Im pairs") {
  SystemSpec s = single_spec();
  Matrix rho(2, 2);
  rho << Complex(0.7, 0), Complex(0.1, -0.2),
         Complex(0.1, 0.2), Complex(0.3, 0);
  QuantumState st = QuantumState::density(rho);

  Observation obs = encode_observation(Approach::DenseDensity, st, 0.0, 3, s);
  REQUIRE(obs.values.size() == 5);
  CHECK(obs.values[0] == doctest::Approx(0.3).epsilon(1e-14));  // 3/10
  CHECK(obs.values[1] == doctest::Approx(0.7));
  CHECK(obs.values[2] == doctest::Approx(0.3));
  CHECK(obs.values[3] == doctest::Approx(0.1));
  CHECK(obs.values[4] == doctest::Approx(-0.2));

  CHECK_THROWS_AS(encode_observation(Approach::DenseDensity, st, 0.0, -1, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode_observation(Approach::DenseDensity, st, 0.0, 11, s),
                  std::invalid_argument);
}

TEST_CASE("pure observation applies the global phase fix before flattening") {
  SystemSpec s = single_spec();
  Vector psi(2);
  // Both amplitudes carry phase i; after the fix they are real positive.
  psi << Complex(0, 1 / std::sqrt(2.0)), Complex(0, 1 / std::sqrt(2.0));
  QuantumState st = QuantumState::pure(psi);
  Observation obs = encode_observation(Approach::DensePure, st, 0.0, 0, s);
  REQUIRE(obs.values.size() == 5);
  CHECK(obs.values[0] == doctest::Approx(0.0));
  CHECK(obs.values[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(obs.values[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(obs.values[3] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(obs.values[4] == doctest::Approx(0.0).epsilon(1e-12));

  // Density input is the wrong state kind for this encoding.
  QuantumState dens = QuantumState::density(st.as_density());
  CHECK_THROWS_AS(encode_observation(Approach::DensePure, dens, 0.0, 0, s),
                  std::invalid_argument);
}

TEST_CASE("recurrent observations carry time and optionally the measured energy") {
  SystemSpec s = two_spec();
  Vector psi(4);
  psi << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0);
  QuantumState st = QuantumState::pure(psi);

  Observation et = encode_observation(Approach::LstmEnergyTime, st, -0.5, 2, s);
  REQUIRE(et.values.size() == 2);
  CHECK(et.values[0] == doctest::Approx(0.2));
  CHECK(et.values[1] == doctest::Approx(-0.5));

  Observation to = encode_observation(Approach::LstmTimeOnly, st, 0.0, 10, s);
  REQUIRE(to.values.size() == 1);
  CHECK(to.values[0] == doctest::Approx(1.0));
}
