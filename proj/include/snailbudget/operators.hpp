#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace snailbudget {

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Tensor product of truncated bosonic modes. Mode 0 is the most
/// significant factor in the Kronecker ordering, so the basis state
/// |n0 n1 ... nk> has index n0*d1*...*dk + n1*d2*...*dk + ... + nk.
struct HilbertSpace {
  std::vector<int> mode_dims;
  int total_dim = 1;

  explicit HilbertSpace(std::vector<int> dims);
  static HilbertSpace four_qubits() { return HilbertSpace({2, 2, 2, 2}); }
  int num_modes() const { return static_cast<int>(mode_dims.size()); }
};

/// Lowering operator on a d-level truncation: a[n-1,n] = sqrt(n).
ComplexMatrix annihilation(int d);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I (x) ... (x) op (x) ... (x) I with op at mode_index.
ComplexMatrix embed(const ComplexMatrix& op, int mode_index,
                    const HilbertSpace& space);

/// Matrix exponential, scaling-and-squaring with a degree-13 Pade core.
ComplexMatrix expm(const ComplexMatrix& a);

/// Hilbert-Schmidt pairing Tr(A^dag B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace snailbudget
