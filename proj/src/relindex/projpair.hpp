#pragma once

// Relative index of a pair of orthogonal projections.
//
// Three independent evaluations are provided:
//   * spectral counting of the ±1 eigenspaces of P − Q,
//   * traces of odd powers of P − Q,
//   * the Fedosov trace difference for Q = U P U†.
// Raw values are kept as reals together with their distance from the nearest
// integer; rounding is left to the caller.

#include "relindex/types.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace relindex {

/// Complex Hermitian idempotent matrix. Construction validates Hermiticity and
/// idempotency against `idempotency_tol`; truncations of infinite-dimensional
/// projections may carry a larger tolerance which then records the achieved
/// residual.
class HermitianProjection {
 public:
  static constexpr double kDefaultTol = 1e-10;

  explicit HermitianProjection(CMatrix matrix, double idempotency_tol = kDefaultTol);

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double idempotency_tol() const { return tol_; }
  /// max |M² − M| measured at construction.
  double idempotency_residual() const { return idempotency_residual_; }

  /// 1 − P
  HermitianProjection complement() const;
  /// W P W† for unitary W.
  HermitianProjection conjugated(const CMatrix& w) const;
  /// D P D† for D = diag(phases), |phases| = 1. Hermiticity and the
  /// idempotency residual carry over exactly, so no re-validation is done.
  HermitianProjection phase_conjugated(const CVector& phases) const;

 private:
  struct Trusted {};
  HermitianProjection(Trusted, CMatrix matrix, double tol, double residual)
      : matrix_(std::move(matrix)), tol_(tol), idempotency_residual_(residual) {}

  CMatrix matrix_;
  double tol_;
  double idempotency_residual_ = 0.0;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix matrix, double unitarity_tol = 1e-10);

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double unitarity_tol() const { return tol_; }

 private:
  CMatrix matrix_;
  double tol_;
};

enum class IndexMethod { spectral_count, odd_trace, fedosov };

std::string_view to_string(IndexMethod m);

struct IndexReport {
  double value = 0.0;
  IndexMethod method = IndexMethod::spectral_count;
  int trace_power = 0;
  /// |value − round(value)|
  double residual = 0.0;
  /// Magnitude of the discarded imaginary part of the trace.
  double imag = 0.0;

  long rounded() const { return std::lround(value); }
};

IndexReport index_by_spectral_count(const HermitianProjection& p,
                                    const HermitianProjection& q,
                                    double eig_tol = 0.5);

/// Tr (P − Q)^{2n+1}
IndexReport index_by_odd_trace(const HermitianProjection& p,
                               const HermitianProjection& q, int n);

/// Tr (P − Q)^{2k+1} for k = 0..n_max.
std::vector<std::pair<int, double>> odd_trace_stability(const HermitianProjection& p,
                                                        const HermitianProjection& q,
                                                        int n_max);

/// Tr (P − PUPU†P)^{n+1} − Tr (P − PU†PUP)^{n+1}; equals Index(P, UPU†).
IndexReport index_by_fedosov(const HermitianProjection& p, const UnitaryMatrix& u,
                             int n);

struct AdditivityResult {
  long lhs = 0;  ///< Index(P, R)
  long rhs = 0;  ///< Index(P, Q) + Index(Q, R)
};

AdditivityResult additivity_check(const HermitianProjection& p,
                                  const HermitianProjection& q,
                                  const HermitianProjection& r, double eig_tol = 0.5);

/// max |(P−Q)²P − P(P−Q)²|
double square_commutator_residual(const HermitianProjection& p,
                                  const HermitianProjection& q);

}  // namespace relindex
