#include "relindex/linalg.hpp"

#include <Eigen/QR>

namespace relindex {

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

CMatrix haar_unitary(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = {gauss(rng), gauss(rng)};
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix random_projection(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (rank < 0 || rank > dim)
    throw Error(ErrorCode::invalid_argument, "projection rank out of range");
  const CMatrix w = haar_unitary(dim, rng);
  const CMatrix basis = w.leftCols(rank);
  return basis * basis.adjoint();
}

CMatrix diagonal_matrix(const CVector& entries) {
  CMatrix d = CMatrix::Zero(entries.size(), entries.size());
  d.diagonal() = entries;
  return d;
}

cplx trace_of_power(const CMatrix& a, int power) {
  if (a.rows() != a.cols())
    throw Error(ErrorCode::dimension_mismatch, "trace_of_power needs a square matrix");
  if (power < 0) throw Error(ErrorCode::invalid_argument, "negative power");
  if (power == 0) return static_cast<double>(a.rows());
  if (power == 1) return a.trace();

  // Tr(A^k) = sum_ij (A^h)_ij (A^{k-h})_ji, so only powers up to k/2 are formed.
  const int half = power / 2;
  CMatrix lo = a;  // A^half by repeated squaring
  CMatrix acc = CMatrix::Identity(a.rows(), a.cols());
  {
    int e = half;
    CMatrix base = a;
    bool first = true;
    while (e > 0) {
      if (e & 1) {
        acc = first ? base : CMatrix(acc * base);
        first = false;
      }
      e >>= 1;
      if (e > 0) base = base * base;
    }
    lo = acc;
  }
  const CMatrix hi = (power - half == half) ? lo : CMatrix(lo * a);
  return (lo.array() * hi.transpose().array()).sum();
}

}  // namespace relindex
