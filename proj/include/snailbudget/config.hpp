#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snailbudget {

/// Raised when a config document is malformed or violates an invariant.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GateKind { ISWAP, SQRT_ISWAP };
enum class SpectatorModel { ANGLE_MATCHED, LITERAL, OFF };

/// Linear frequency (Hz) to angular frequency (rad/s).
double to_angular(double f_hz);

struct Band {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

/// Physical constants of one SNAIL module. All frequencies are linear Hz,
/// all times seconds; the angular conversion happens once, at Hamiltonian
/// construction.
struct DeviceParams {
  double g3_over_2pi_hz = 0.0;
  double lambda = 0.0;               // SNAIL-qubit hybridization, in (0,1)
  std::vector<double> t1_per_qubit;  // seconds; may be infinite
  int n_qubits = 0;
  Band bandwidth;
  double alpha_over_2pi_hz = 0.0;  // informational only, never enters dynamics
  std::optional<double> snail_freq_hz;
};

struct GateSpec {
  GateKind kind = GateKind::ISWAP;
  double theta = 0.0;  // rad; fixed by kind
  double target_fidelity = 0.0;
};

/// Rotation angle accumulated by the conversion generator for a gate kind.
double gate_theta(GateKind kind);

struct SeparationConstraints {
  double delta_q_hz = 0.0;   // min qubit-qubit separation
  double delta2_q_hz = 0.0;  // min conversion-conversion separation
  std::optional<double> delta_s_hz;       // min qubit-SNAIL separation
  std::optional<double> delta_s_conv_hz;  // SNAIL-qubit vs qubit-qubit conv
  std::optional<double> delta4_q_hz;      // inter-module; placeholder, unused
};

struct Config {
  DeviceParams device;
  GateSpec gate;
  SeparationConstraints separations;
  SpectatorModel spectator_model = SpectatorModel::ANGLE_MATCHED;
};

/// Parses a flat key = value document (# starts a comment). All required
/// keys must be present; unknown keys are rejected.
Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const Config& c);

std::string gate_kind_name(GateKind kind);
std::string spectator_model_name(SpectatorModel model);

}  // namespace snailbudget
