#include "snailbudget/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace snailbudget {

HilbertSpace::HilbertSpace(std::vector<int> dims) : mode_dims(std::move(dims)) {
  if (mode_dims.empty()) throw std::invalid_argument("HilbertSpace: no modes");
  total_dim = 1;
  for (int d : mode_dims) {
    if (d < 2)
      throw std::invalid_argument("HilbertSpace: mode dimension must be >= 2");
    total_dim *= d;
  }
}

ComplexMatrix annihilation(int d) {
  if (d < 2)
    throw std::invalid_argument("annihilation: dimension must be >= 2, got " +
                                std::to_string(d));
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, int mode_index,
                    const HilbertSpace& space) {
  if (mode_index < 0 || mode_index >= space.num_modes())
    throw std::invalid_argument("embed: mode index out of range");
  if (op.rows() != op.cols() || op.rows() != space.mode_dims[mode_index])
    throw std::invalid_argument("embed: operator dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int m = 0; m < space.num_modes(); ++m) {
    if (m == mode_index)
      out = kron(out, op);
    else
      out = kron(out, ComplexMatrix::Identity(space.mode_dims[m],
                                              space.mode_dims[m]));
  }
  return out;
}

// Higham's scaling-and-squaring with the [13/13] Pade approximant.
ComplexMatrix expm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: non-square");
  const Eigen::Index n = a.rows();
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const double theta13 = 5.371920351148152;

  double norm1 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    norm1 = std::max(norm1, a.col(j).cwiseAbs().sum());

  int squarings = 0;
  if (norm1 > theta13)
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  ComplexMatrix as = a / std::pow(2.0, squarings);

  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix a2 = as * as;
  ComplexMatrix a4 = a2 * a2;
  ComplexMatrix a6 = a2 * a4;
  ComplexMatrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
            b[5] * a4 + b[3] * a2 + b[1] * id);
  ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                    b[4] * a4 + b[2] * a2 + b[0] * id;

  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  return a.conjugate().cwiseProduct(b).sum();
}

}  // namespace snailbudget
