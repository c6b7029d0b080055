#pragma once

#include <optional>
#include <vector>

namespace snailbudget {

enum class Relation { LE, GE, EQ };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LE;
  double bound = 0.0;
};

/// Linear program over nonnegative variables. The objective, when present,
/// is minimized.
struct LinearProgram {
  int num_vars = 0;
  std::vector<LinearConstraint> constraints;
  std::optional<std::vector<double>> objective;
};

struct SimplexResult {
  bool feasible = false;
  std::vector<double> x;
  double objective_value = 0.0;
  long iterations = 0;
};

/// Phase-1 simplex (Bland's rule): a feasible assignment or infeasibility.
SimplexResult simplex_feasible(const LinearProgram& lp);

/// Two-phase simplex; requires lp.objective. Throws on an unbounded program.
SimplexResult simplex_minimize(const LinearProgram& lp);

}  // namespace snailbudget
