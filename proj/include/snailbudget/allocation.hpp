#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "snailbudget/simplex.hpp"

namespace snailbudget {

struct SnailAllocationConstraints {
  double snail_freq_hz = 0.0;
  double delta_s_hz = 0.0;       // min |qubit - SNAIL| separation
  double delta_s_conv_hz = 0.0;  // min |qubit-qubit conv - SNAIL-qubit conv|
};

struct AllocationProblem {
  int n = 0;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
  double delta_q_hz = 0.0;
  std::optional<SnailAllocationConstraints> snail;
};

struct SolverStats {
  long branch_nodes = 0;
  long lp_iterations = 0;
};

struct AllocationResult {
  std::vector<double> freqs_hz;        // strictly increasing, length n
  std::vector<double> conversions_hz;  // sorted pairwise differences
  double achieved_delta_hz = 0.0;      // +inf sentinel when C(n,2) < 2
  bool feasible = false;
  SolverStats stats;
};

struct Violation {
  std::string description;
  double margin_hz = 0.0;  // amount by which the constraint is missed
};

struct VerifyReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// All pairwise differences of a strictly increasing list, ascending.
std::vector<double> conversion_frequencies(const std::vector<double>& freqs_hz);

/// Independent checker: band membership, qubit gaps >= delta_Q, conversion
/// gaps >= delta2, optional SNAIL separations. Shares no code with the
/// solver. tol_hz absorbs float noise in externally printed frequencies.
VerifyReport verify_allocation(const std::vector<double>& freqs_hz,
                               const AllocationProblem& problem,
                               double delta2_hz, double tol_hz = 1.0);

/// Exact feasibility at a fixed conversion separation: sign-forced pairs as
/// plain LP rows, ambiguous pairs by branch-and-bound over sign choices.
std::optional<std::vector<double>> feasible_at(const AllocationProblem& problem,
                                               double delta2_hz,
                                               SolverStats* stats = nullptr);

/// Binary search for the largest feasible conversion separation.
AllocationResult maximize_delta(const AllocationProblem& problem,
                                double resolution_hz = 1e6);

/// JSON record with freqs_hz, conversions_hz, achieved_delta_hz, feasible
/// and solver statistics. An infinite achieved_delta_hz is stored as null.
std::string serialize_result(const AllocationResult& r);
AllocationResult parse_result(const std::string& text);

constexpr double kInfDelta = std::numeric_limits<double>::infinity();

}  // namespace snailbudget
