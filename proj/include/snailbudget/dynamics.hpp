#pragma once

#include "snailbudget/config.hpp"
#include "snailbudget/operators.hpp"

namespace snailbudget {

/// Static generator of the open-system evolution plus the gate duration.
struct LindbladModel {
  ComplexMatrix hamiltonian;           // angular units (rad/s)
  std::vector<double> collapse_rates;  // per-qubit 1/T1 (1/s)
  HilbertSpace space;
  double t_f = 0.0;  // s
};

struct GateResult {
  ComplexMatrix channel;  // superoperator on column-vectorized densities
  double avg_fidelity = 0.0;
  double t_f = 0.0;
  double eta = 0.0;
  double delta2_hz = 0.0;
};

/// Resonant conversion rate 6*eta*(2*pi*g3)*lambda^2, in rad/s.
double target_rate(double eta, double g3_over_2pi_hz, double lambda);

/// t_f such that rate * t_f = theta.
double gate_duration(double rate, double theta);

/// Static rate standing in for the worst-case off-resonant conversion pair.
///
/// ANGLE_MATCHED: the constant rate whose accumulated angle over t_f equals
/// the worst-case bound (2/log 2) * rate / (2*pi*delta2).
/// LITERAL: rate * 2 / (delta2_in_MHz * log 2), reading the prefactor as a
/// dimensionless number with the separation expressed in MHz.
/// OFF: zero.
double spectator_rate(double rate, double delta2_hz, double t_f,
                      SpectatorModel model);

/// rate*(q0^dag q1 + h.c.) + spec_rate*(q2^dag q3 + h.c.) on four qubits.
ComplexMatrix build_hamiltonian(double rate, double spec_rate,
                                const HilbertSpace& space);

/// Lindblad generator on column-vectorized density matrices, with one
/// amplitude-damping channel per mode at the given rates.
ComplexMatrix build_liouvillian(const ComplexMatrix& h,
                                const std::vector<double>& collapse_rates,
                                const HilbertSpace& space);

/// expm(L*t).
ComplexMatrix evolve(const ComplexMatrix& liouvillian, double t);

/// exp(-i*theta*(q0^dag q1 + h.c.)) on modes (0,1), identity on the rest.
/// For ISWAP this maps |01> -> -i|10>.
ComplexMatrix ideal_gate(GateKind kind, const HilbertSpace& space);

/// Unitary channel superoperator conj(U) (x) U of the same vectorization
/// convention as build_liouvillian.
ComplexMatrix unitary_superop(const ComplexMatrix& u);

/// (dim * Re F_pro + 1) / (dim + 1) with F_pro = <S_U, channel>_HS / dim^2.
double average_gate_fidelity(const ComplexMatrix& channel,
                             const ComplexMatrix& u, int dim);

/// Full pipeline for one (eta, delta2) point of the worst-case module model.
GateResult simulate_gate(const Config& config, double eta, double delta2_hz);

/// max_j |(vec(I)^dag S)_j - vec(I)^dag_j|; zero for a trace-preserving map.
double trace_preservation_error(const ComplexMatrix& superop);

/// Minimum eigenvalue of the Choi matrix; >= 0 for a completely positive map.
double choi_min_eigenvalue(const ComplexMatrix& superop);

}  // namespace snailbudget
