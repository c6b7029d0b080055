#pragma once

// Independent reference implementations used only by tests. None of these
// share a code path with the library routines they check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "snailbudget/allocation.hpp"
#include "snailbudget/operators.hpp"

namespace snailbudget::oracle {

/// Plain truncated Taylor series for the matrix exponential.
inline ComplexMatrix taylor_expm(const ComplexMatrix& a, int terms = 30) {
  ComplexMatrix sum = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = (term * a) / double(k);
    sum += term;
  }
  return sum;
}

/// Fixed-step classical RK4 applied to dS/dt = L S from S(0) = I. The
/// generator is constant, so each step multiplies by the same one-step
/// matrix; 2^levels steps are taken by repeated squaring of that matrix.
inline ComplexMatrix stepped_rk4(const ComplexMatrix& liouvillian, double t,
                                 int levels = 14) {
  const auto n = liouvillian.rows();
  ComplexMatrix x = liouvillian * (t / std::pow(2.0, levels));
  ComplexMatrix step = ComplexMatrix::Identity(n, n) + x + (x * x) / 2.0 +
                       (x * x * x) / 6.0 + (x * x * x * x) / 24.0;
  for (int i = 0; i < levels; ++i) step = step * step;
  return step;
}

inline ComplexMatrix random_complex(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

struct LatticeOptimum {
  double delta_hz = -1.0;  // max-min conversion gap; <0 when infeasible
  std::vector<double> freqs_hz;
};

/// Exhaustive search over all ascending frequency combinations on a lattice,
/// maximizing the minimum pairwise conversion gap subject to the qubit gap.
inline LatticeOptimum lattice_max_delta(int n, double band_lo_hz,
                                        double band_hi_hz, double delta_q_hz,
                                        double step_hz) {
  const int points = static_cast<int>((band_hi_hz - band_lo_hz) / step_hz) + 1;
  LatticeOptimum best;
  std::vector<int> idx(n);
  std::vector<double> freqs(n), convs;
  convs.reserve(n * (n - 1) / 2);

  auto min_conv_gap = [&](int count) {
    convs.clear();
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) convs.push_back(freqs[j] - freqs[i]);
    std::sort(convs.begin(), convs.end());
    double gap = kInfDelta;
    for (size_t i = 0; i + 1 < convs.size(); ++i)
      gap = std::min(gap, convs[i + 1] - convs[i]);
    return gap;
  };

  auto rec = [&](auto&& self, int depth, int start) -> void {
    if (depth == n) {
      double gap = min_conv_gap(n);
      if (gap > best.delta_hz) {
        best.delta_hz = gap;
        best.freqs_hz = freqs;
      }
      return;
    }
    for (int p = start; p < points; ++p) {
      freqs[depth] = band_lo_hz + p * step_hz;
      if (depth > 0 && freqs[depth] - freqs[depth - 1] < delta_q_hz - 1e-6)
        continue;
      // The running min gap only shrinks as qubits are added.
      if (depth >= 2 && min_conv_gap(depth + 1) <= best.delta_hz) continue;
      self(self, depth + 1, p + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace snailbudget::oracle
