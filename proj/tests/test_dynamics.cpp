#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "snailbudget/dynamics.hpp"

using namespace snailbudget;

namespace {

constexpr double kPi = std::numbers::pi;

Config table1_iswap() {
  Config c;
  c.device.n_qubits = 4;
  c.device.g3_over_2pi_hz = 60e6;
  c.device.lambda = 0.1;
  c.device.t1_per_qubit.assign(4, 80e-6);
  c.device.bandwidth = {4e9, 5e9};
  c.gate.kind = GateKind::ISWAP;
  c.gate.theta = gate_theta(GateKind::ISWAP);
  c.gate.target_fidelity = 0.99;
  c.separations.delta_q_hz = 180e6;
  c.separations.delta2_q_hz = 150e6;
  return c;
}

int basis_index(int b0, int b1, int b2, int b3) {
  return b0 * 8 + b1 * 4 + b2 * 2 + b3;
}

}  // namespace

TEST_CASE("target_rate") {
  // Direct evaluation: 6 * 1 * (2*pi*60e6) * 0.1^2
  double expected = 6.0 * 2 * kPi * 60e6 * 0.01;
  CHECK(target_rate(1.0, 60e6, 0.1) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(target_rate(1.0, 60e6, 0.1) == doctest::Approx(2.2619e7).epsilon(1e-4));
  CHECK(target_rate(0.0, 60e6, 0.1) == 0.0);
  CHECK(target_rate(1.0, 60e6, 0.2) ==
        doctest::Approx(4 * target_rate(1.0, 60e6, 0.1)).epsilon(1e-15));
}

TEST_CASE("gate_duration") {
  double rate = target_rate(1.0, 60e6, 0.1);
  CHECK(gate_duration(rate, kPi / 2) == doctest::Approx(6.944e-8).epsilon(1e-3));
  CHECK(gate_duration(rate, kPi / 4) ==
        doctest::Approx(gate_duration(rate, kPi / 2) / 2).epsilon(1e-15));
  CHECK(gate_duration(2 * rate, kPi / 2) ==
        doctest::Approx(gate_duration(rate, kPi / 2) / 2).epsilon(1e-15));
  CHECK_THROWS_AS(gate_duration(0.0, kPi / 2), std::invalid_argument);
}

TEST_CASE("spectator_rate models") {
  double rate = target_rate(1.0, 60e6, 0.1);
  double t_f = gate_duration(rate, kPi / 2);

  double am = spectator_rate(rate, 150e6, t_f, SpectatorModel::ANGLE_MATCHED);
  double expected_am =
      2.0 * rate / (2 * kPi * 150e6 * std::numbers::ln2 * t_f);
  CHECK(am == doctest::Approx(expected_am).epsilon(1e-15));
  CHECK(am == doctest::Approx(9.97e5).epsilon(1e-3));
  CHECK(am / rate == doctest::Approx(0.044).epsilon(2e-2));

  double lit = spectator_rate(rate, 150e6, t_f, SpectatorModel::LITERAL);
  CHECK(lit == doctest::Approx(rate * 2.0 / (150.0 * std::numbers::ln2))
                   .epsilon(1e-15));
  CHECK(lit == doctest::Approx(4.352e5).epsilon(1e-3));

  // 1/delta scaling, both models
  CHECK(spectator_rate(rate, 1500e6, t_f, SpectatorModel::ANGLE_MATCHED) ==
        doctest::Approx(am / 10).epsilon(1e-12));
  CHECK(spectator_rate(rate, 1500e6, t_f, SpectatorModel::LITERAL) ==
        doctest::Approx(lit / 10).epsilon(1e-12));

  CHECK(spectator_rate(rate, 150e6, t_f, SpectatorModel::OFF) == 0.0);
  CHECK_THROWS_AS(spectator_rate(rate, 0.0, t_f, SpectatorModel::LITERAL),
                  std::invalid_argument);
}

TEST_CASE("angle-matched spectator reproduces the worst-case angle bound") {
  double rate = target_rate(0.7, 60e6, 0.08);
  for (double theta : {kPi / 2, kPi / 4}) {
    double t_f = gate_duration(rate, theta);
    for (double delta : {37e6, 150e6, 912e6}) {
      double sr = spectator_rate(rate, delta, t_f, SpectatorModel::ANGLE_MATCHED);
      double angle = sr * t_f;
      double bound = (2.0 / std::numbers::ln2) * rate / (2 * kPi * delta);
      CHECK(angle == doctest::Approx(bound).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_hamiltonian structure") {
  HilbertSpace space = HilbertSpace::four_qubits();
  double rate = 2.0e7, spec = 3.0e5;

  ComplexMatrix h = build_hamiltonian(rate, 0.0, space);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  int nonzeros = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (h(i, j) != Complex(0)) ++nonzeros;
  CHECK(nonzeros == 8);  // |10ab><01ab| for 4 spectator states, plus h.c.
  for (int a : {0, 1})
    for (int b : {0, 1})
      CHECK(h(basis_index(1, 0, a, b), basis_index(0, 1, a, b)) ==
            Complex(rate));

  ComplexMatrix h2 = build_hamiltonian(rate, spec, space);
  CHECK((h2 - h2.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h2(basis_index(0, 0, 1, 0), basis_index(0, 0, 0, 1)) == Complex(spec));

  CHECK_THROWS_AS(build_hamiltonian(rate, spec, HilbertSpace({2, 2})),
                  std::invalid_argument);
}

TEST_CASE("build_liouvillian unitary part and trace preservation") {
  HilbertSpace space = HilbertSpace::four_qubits();
  ComplexMatrix h = build_hamiltonian(1.3e7, 5.0e5, space);
  ComplexMatrix id = ComplexMatrix::Identity(16, 16);

  ComplexMatrix l0 = build_liouvillian(h, {0, 0, 0, 0}, space);
  ComplexMatrix expected =
      Complex(0, -1) * (kron(id, h) - kron(h.transpose(), id));
  CHECK((l0 - expected).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix l = build_liouvillian(h, {1e4, 2e4, 3e4, 4e4}, space);
  Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(256);
  for (int i = 0; i < 16; ++i) vec_id(i + 16 * i) = 1.0;
  CHECK((vec_id.adjoint() * l).cwiseAbs().maxCoeff() < 1e-11 * l.cwiseAbs().maxCoeff());
}

TEST_CASE("amplitude damping decays the excited population as exp(-gamma t)") {
  HilbertSpace one({2});
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  double gamma = 1.0 / 80e-6;
  ComplexMatrix l = build_liouvillian(h, {gamma}, one);
  for (double t : {10e-6, 50e-6, 200e-6}) {
    ComplexMatrix s = evolve(l, t);
    // vec(|1><1|) has a single 1 at index 3; population is entry (3,3).
    CHECK(s(3, 3).real() == doctest::Approx(std::exp(-gamma * t)).epsilon(1e-12));
    CHECK(trace_preservation_error(s) < 1e-12);
  }
}

TEST_CASE("evolve basics and oracles") {
  HilbertSpace space = HilbertSpace::four_qubits();
  ComplexMatrix h = build_hamiltonian(2.26e7, 9.9e5, space);
  double t = 6.9e-8;

  ComplexMatrix l0 = build_liouvillian(h, {0, 0, 0, 0}, space);
  CHECK(evolve(l0, 0.0).isApprox(ComplexMatrix::Identity(256, 256)));

  // Unitary case: channel equals conj(U) (x) U with U = expm(-iHt).
  ComplexMatrix u = expm(ComplexMatrix(Complex(0, -1) * h * t));
  ComplexMatrix diff = evolve(l0, t) - unitary_superop(u);
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-11);

  // Dissipative case against the fixed-step integrator oracle.
  ComplexMatrix l = build_liouvillian(h, {1.25e4, 1.25e4, 1.25e4, 1.25e4}, space);
  ComplexMatrix s = evolve(l, t);
  CHECK((s - oracle::stepped_rk4(l, t)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(trace_preservation_error(s) < 1e-9);
  CHECK(choi_min_eigenvalue(s) > -1e-8);
}

TEST_CASE("ideal_gate convention") {
  HilbertSpace space = HilbertSpace::four_qubits();
  ComplexMatrix u = ideal_gate(GateKind::ISWAP, space);
  // |0100> -> -i|1000>
  Complex amp = u(basis_index(1, 0, 0, 0), basis_index(0, 1, 0, 0));
  CHECK(std::abs(amp - Complex(0, -1)) < 1e-14);

  ComplexMatrix root = ideal_gate(GateKind::SQRT_ISWAP, space);
  CHECK((root * root - u).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("average gate fidelity anchors") {
  HilbertSpace space = HilbertSpace::four_qubits();
  ComplexMatrix u = ideal_gate(GateKind::ISWAP, space);
  CHECK(average_gate_fidelity(unitary_superop(u), u, 16) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Completely depolarizing channel: rho -> I/16.
  Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(256);
  for (int i = 0; i < 16; ++i) vec_id(i + 16 * i) = 1.0;
  ComplexMatrix depol = (vec_id * vec_id.adjoint()) / 16.0;
  CHECK(std::abs(average_gate_fidelity(depol, u, 16) - 1.0 / 16) < 1e-12);

  // Pauli X on one qubit against the identity target.
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  ComplexMatrix v = embed(x, 0, space);
  ComplexMatrix id16 = ComplexMatrix::Identity(16, 16);
  CHECK(std::abs(average_gate_fidelity(unitary_superop(v), id16, 16) -
                 1.0 / 17) < 1e-12);
}

TEST_CASE("simulate_gate noiseless exactness") {
  Config c = table1_iswap();
  c.device.t1_per_qubit.assign(4, std::numeric_limits<double>::infinity());
  c.spectator_model = SpectatorModel::OFF;
  for (GateKind kind : {GateKind::ISWAP, GateKind::SQRT_ISWAP}) {
    c.gate.kind = kind;
    c.gate.theta = gate_theta(kind);
    GateResult r = simulate_gate(c, 1.0, 150e6);
    CHECK(r.avg_fidelity >= 1.0 - 1e-9);
  }
}

TEST_CASE("simulate_gate matches the stepped-integrator oracle with T1") {
  Config c = table1_iswap();
  c.spectator_model = SpectatorModel::OFF;
  GateResult r = simulate_gate(c, 1.0, 150e6);

  HilbertSpace space = HilbertSpace::four_qubits();
  double rate = target_rate(1.0, c.device.g3_over_2pi_hz, c.device.lambda);
  double t_f = gate_duration(rate, c.gate.theta);
  ComplexMatrix h = build_hamiltonian(rate, 0.0, space);
  ComplexMatrix l =
      build_liouvillian(h, {1 / 80e-6, 1 / 80e-6, 1 / 80e-6, 1 / 80e-6}, space);
  ComplexMatrix oracle_channel = oracle::stepped_rk4(l, t_f);
  double f_oracle =
      average_gate_fidelity(oracle_channel, ideal_gate(c.gate.kind, space), 16);
  CHECK(r.avg_fidelity == doctest::Approx(f_oracle).epsilon(1e-6));
  CHECK(r.t_f == doctest::Approx(t_f).epsilon(1e-15));
}

TEST_CASE("fidelity is monotone in the conversion separation") {
  Config c = table1_iswap();
  double prev = -1.0;
  for (double delta : {150e6, 250e6, 350e6, 500e6, 600e6}) {
    double f = simulate_gate(c, 1.0, delta).avg_fidelity;
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
  CHECK(simulate_gate(c, 1.0, 600e6).avg_fidelity >=
        simulate_gate(c, 1.0, 150e6).avg_fidelity);
}

TEST_CASE("two regimes: interior optimum in the pump amplitude") {
  Config c = table1_iswap();
  std::vector<double> etas;
  for (int i = 0; i < 12; ++i)
    etas.push_back(0.05 * std::pow(4.0 / 0.05, i / 11.0));
  double best_eta = etas[0], best_f = -1;
  for (double eta : etas) {
    double f = simulate_gate(c, eta, 150e6).avg_fidelity;
    if (f > best_f) {
      best_f = f;
      best_eta = eta;
    }
  }
  CHECK(best_f > simulate_gate(c, best_eta / 8, 150e6).avg_fidelity);
  CHECK(best_f > simulate_gate(c, best_eta * 8, 150e6).avg_fidelity);
}
