#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snailbudget/config.hpp"

namespace snailbudget {

struct SweepPoint {
  double eta = 0.0;
  double delta2_hz = 0.0;
  double fidelity = 0.0;
  double t_f = 0.0;
};

struct FidelityGrid {
  std::vector<double> eta_axis;
  std::vector<double> delta_axis_hz;
  std::vector<std::vector<double>> fidelity;  // [eta][delta]
  std::vector<std::vector<double>> t_f;       // [eta][delta]
  double threshold = 0.99;
};

/// count log-spaced points over [lo, hi].
std::vector<double> log_space(double lo, double hi, int count);

/// Default sweep window: eta in [0.05, 4], delta in [10 MHz, 1 GHz],
/// 40 x 40 log-spaced.
std::vector<double> default_eta_axis(int count = 40);
std::vector<double> default_delta_axis(int count = 40);

/// Fidelity surface over (eta, delta2). Points are pure and independent;
/// they are evaluated concurrently and merged by index, so the result is
/// bitwise identical regardless of thread count.
FidelityGrid fidelity_grid(const Config& config,
                           const std::vector<double>& eta_axis,
                           const std::vector<double>& delta_axis_hz);

/// Smallest separation in [delta_lo, delta_hi] with F >= f_target, by
/// bisection (F is monotone in the separation); nullopt when even delta_hi
/// misses the target.
std::optional<double> min_delta_for_target(const Config& config, double eta,
                                           double f_target, double delta_lo_hz,
                                           double delta_hi_hz,
                                           double tol_hz = 1e6);

/// CSV: header `eta,delta2_hz,fidelity,t_f_s`, row-major by eta then delta.
void emit_grid_csv(const FidelityGrid& grid, const std::string& path);
std::string grid_csv(const FidelityGrid& grid);

/// Static heatmap with one iso-fidelity polyline at grid.threshold when the
/// threshold is crossed. Byte-identical for identical input.
void emit_heatmap_svg(const FidelityGrid& grid, const std::string& path);
std::string grid_svg(const FidelityGrid& grid);

}  // namespace snailbudget
