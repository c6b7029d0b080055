#include "snailbudget/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snailbudget {

namespace {
constexpr Complex kI{0.0, 1.0};
}

double target_rate(double eta, double g3_over_2pi_hz, double lambda) {
  return 6.0 * eta * to_angular(g3_over_2pi_hz) * lambda * lambda;
}

double gate_duration(double rate, double theta) {
  if (rate <= 0) throw std::invalid_argument("gate_duration: rate must be > 0");
  return theta / rate;
}

double spectator_rate(double rate, double delta2_hz, double t_f,
                      SpectatorModel model) {
  if (model == SpectatorModel::OFF) return 0.0;
  if (delta2_hz <= 0)
    throw std::invalid_argument("spectator_rate: delta2 must be > 0");
  if (t_f <= 0) throw std::invalid_argument("spectator_rate: t_f must be > 0");
  if (rate <= 0) throw std::invalid_argument("spectator_rate: rate must be > 0");
  const double log2 = std::numbers::ln2;
  if (model == SpectatorModel::LITERAL)
    return rate * 2.0 / ((delta2_hz / 1e6) * log2);
  return 2.0 * rate / (to_angular(delta2_hz) * log2 * t_f);
}

ComplexMatrix build_hamiltonian(double rate, double spec_rate,
                                const HilbertSpace& space) {
  if (space.mode_dims != std::vector<int>{2, 2, 2, 2})
    throw std::invalid_argument("build_hamiltonian: expected four qubit modes");
  auto conv = [&](int a, int b) {
    ComplexMatrix qa = embed(annihilation(2), a, space);
    ComplexMatrix qb = embed(annihilation(2), b, space);
    return ComplexMatrix(qa.adjoint() * qb + qb.adjoint() * qa);
  };
  return rate * conv(0, 1) + spec_rate * conv(2, 3);
}

ComplexMatrix build_liouvillian(const ComplexMatrix& h,
                                const std::vector<double>& collapse_rates,
                                const HilbertSpace& space) {
  const int d = space.total_dim;
  if (h.rows() != d || h.cols() != d)
    throw std::invalid_argument("build_liouvillian: Hamiltonian shape mismatch");
  if (static_cast<int>(collapse_rates.size()) != space.num_modes())
    throw std::invalid_argument("build_liouvillian: one rate per mode required");
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (int k = 0; k < space.num_modes(); ++k) {
    double gamma = collapse_rates[k];
    if (gamma < 0)
      throw std::invalid_argument("build_liouvillian: negative collapse rate");
    if (gamma == 0) continue;
    ComplexMatrix q = embed(annihilation(space.mode_dims[k]), k, space);
    ComplexMatrix num = q.adjoint() * q;
    l += gamma * (kron(q.conjugate(), q) - 0.5 * kron(id, num) -
                  0.5 * kron(num.transpose(), id));
  }
  return l;
}

ComplexMatrix evolve(const ComplexMatrix& liouvillian, double t) {
  if (t < 0) throw std::invalid_argument("evolve: negative time");
  return expm(liouvillian * t);
}

ComplexMatrix ideal_gate(GateKind kind, const HilbertSpace& space) {
  ComplexMatrix q0 = embed(annihilation(space.mode_dims[0]), 0, space);
  ComplexMatrix q1 = embed(annihilation(space.mode_dims[1]), 1, space);
  ComplexMatrix gen = q0.adjoint() * q1 + q1.adjoint() * q0;
  return expm(-kI * gate_theta(kind) * gen);
}

ComplexMatrix unitary_superop(const ComplexMatrix& u) {
  return kron(u.conjugate(), u);
}

double average_gate_fidelity(const ComplexMatrix& channel,
                             const ComplexMatrix& u, int dim) {
  if (u.rows() != dim || u.cols() != dim || channel.rows() != dim * dim ||
      channel.cols() != dim * dim)
    throw std::invalid_argument("average_gate_fidelity: dimension mismatch");
  Complex f_pro = hs_inner(unitary_superop(u), channel) /
                  static_cast<double>(dim * dim);
  return (dim * f_pro.real() + 1.0) / (dim + 1.0);
}

GateResult simulate_gate(const Config& config, double eta, double delta2_hz) {
  if (eta <= 0) throw std::invalid_argument("simulate_gate: eta must be > 0");
  if (delta2_hz <= 0)
    throw std::invalid_argument("simulate_gate: delta2 must be > 0");

  const DeviceParams& dev = config.device;
  HilbertSpace space = HilbertSpace::four_qubits();

  double rate = target_rate(eta, dev.g3_over_2pi_hz, dev.lambda);
  double t_f = gate_duration(rate, config.gate.theta);
  double spec = spectator_rate(rate, delta2_hz, t_f, config.spectator_model);

  // Worst case: spectator pair shares the target's T1 budget. The module
  // model is always four qubits; broadcast or truncate the device list.
  std::vector<double> rates(4);
  for (int k = 0; k < 4; ++k) {
    double t1 = dev.t1_per_qubit[k % dev.t1_per_qubit.size()];
    rates[k] = std::isinf(t1) ? 0.0 : 1.0 / t1;
  }

  ComplexMatrix h = build_hamiltonian(rate, spec, space);
  ComplexMatrix l = build_liouvillian(h, rates, space);
  ComplexMatrix channel = evolve(l, t_f);
  ComplexMatrix u = ideal_gate(config.gate.kind, space);

  GateResult out;
  out.avg_fidelity = average_gate_fidelity(channel, u, space.total_dim);
  out.channel = std::move(channel);
  out.t_f = t_f;
  out.eta = eta;
  out.delta2_hz = delta2_hz;
  return out;
}

double trace_preservation_error(const ComplexMatrix& superop) {
  const int d2 = static_cast<int>(superop.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
  Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(d2);
  for (int i = 0; i < d; ++i) vec_id(i + d * i) = 1.0;
  Eigen::RowVectorXcd row = vec_id.adjoint() * superop;
  return (row - vec_id.adjoint()).cwiseAbs().maxCoeff();
}

double choi_min_eigenvalue(const ComplexMatrix& superop) {
  const int d2 = static_cast<int>(superop.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
  // Block (i,j) of the Choi matrix is the channel applied to |i><j|,
  // i.e. column i + d*j of the superoperator reshaped to d x d.
  ComplexMatrix choi(d2, d2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Eigen::Map<const ComplexMatrix> block(superop.col(i + d * j).data(), d, d);
      choi.block(i * d, j * d, d, d) = block;
    }
  choi = 0.5 * (choi + choi.adjoint().eval());  // CP test only needs Herm part
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(choi,
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace snailbudget
