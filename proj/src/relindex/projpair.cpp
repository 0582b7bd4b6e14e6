#include "relindex/projpair.hpp"

#include "relindex/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace relindex {
namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b)
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                    " vs " + std::to_string(b) + ")");
}

IndexReport make_report(cplx raw, IndexMethod method, int power) {
  IndexReport r;
  r.value = raw.real();
  r.imag = std::abs(raw.imag());
  r.method = method;
  r.trace_power = power;
  r.residual = std::abs(r.value - std::round(r.value));
  return r;
}

}  // namespace

HermitianProjection::HermitianProjection(CMatrix matrix, double idempotency_tol)
    : matrix_(std::move(matrix)), tol_(idempotency_tol) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw Error(ErrorCode::dimension_mismatch, "projection must be square and nonempty");
  if (tol_ < 0) throw Error(ErrorCode::invalid_argument, "negative idempotency tolerance");
  const double herm = max_abs_entry(matrix_ - matrix_.adjoint());
  if (herm > tol_)
    throw Error(ErrorCode::precondition,
                "matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  idempotency_residual_ = max_abs_entry(matrix_ * matrix_ - matrix_);
  if (idempotency_residual_ > tol_)
    throw Error(ErrorCode::precondition, "matrix is not idempotent (residual " +
                                             std::to_string(idempotency_residual_) + ")");
}

HermitianProjection HermitianProjection::complement() const {
  return HermitianProjection(CMatrix::Identity(dim(), dim()) - matrix_, tol_);
}

HermitianProjection HermitianProjection::conjugated(const CMatrix& w) const {
  require_same_dim(dim(), w.rows(), "conjugated");
  CMatrix m = w * matrix_ * w.adjoint();
  // Restore exact Hermiticity lost to rounding in the triple product.
  m = 0.5 * (m + m.adjoint()).eval();
  return HermitianProjection(std::move(m), std::max(tol_, 1e-10));
}

HermitianProjection HermitianProjection::phase_conjugated(const CVector& phases) const {
  require_same_dim(dim(), phases.size(), "phase_conjugated");
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    if (std::abs(std::abs(phases(i)) - 1.0) > 1e-12)
      throw Error(ErrorCode::invalid_argument, "phase_conjugated needs unimodular phases");
  CMatrix m = phases.asDiagonal() * matrix_ * phases.conjugate().asDiagonal();
  return HermitianProjection(Trusted{}, std::move(m), tol_, idempotency_residual_);
}

UnitaryMatrix::UnitaryMatrix(CMatrix matrix, double unitarity_tol)
    : matrix_(std::move(matrix)), tol_(unitarity_tol) {
  if (matrix_.rows() != matrix_.cols())
    throw Error(ErrorCode::dimension_mismatch, "unitary must be square");
  const double res =
      max_abs_entry(matrix_ * matrix_.adjoint() - CMatrix::Identity(dim(), dim()));
  if (res > tol_)
    throw Error(ErrorCode::precondition,
                "matrix is not unitary (residual " + std::to_string(res) + ")");
}

std::string_view to_string(IndexMethod m) {
  switch (m) {
    case IndexMethod::spectral_count: return "spectral-count";
    case IndexMethod::odd_trace: return "odd-trace";
    case IndexMethod::fedosov: return "fedosov";
  }
  return "unknown";
}

IndexReport index_by_spectral_count(const HermitianProjection& p,
                                    const HermitianProjection& q, double eig_tol) {
  require_same_dim(p.dim(), q.dim(), "index_by_spectral_count");
  if (eig_tol <= 0.0 || eig_tol > 1.0)
    throw Error(ErrorCode::invalid_argument, "eig_tol must lie in (0, 1]");
  const CMatrix diff = p.matrix() - q.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  long plus = 0;
  long minus = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    const bool near_plus = std::abs(ev - 1.0) < eig_tol;
    const bool near_minus = std::abs(ev + 1.0) < eig_tol;
    if (near_plus && near_minus)
      throw Error(ErrorCode::invalid_argument,
                  "eigenvalue within eig_tol of both +1 and -1");
    plus += near_plus;
    minus += near_minus;
  }
  IndexReport r;
  r.value = static_cast<double>(plus - minus);
  r.method = IndexMethod::spectral_count;
  return r;
}

IndexReport index_by_odd_trace(const HermitianProjection& p,
                               const HermitianProjection& q, int n) {
  require_same_dim(p.dim(), q.dim(), "index_by_odd_trace");
  if (n < 0) throw Error(ErrorCode::invalid_argument, "trace power index n must be >= 0");
  const CMatrix diff = p.matrix() - q.matrix();
  return make_report(trace_of_power(diff, 2 * n + 1), IndexMethod::odd_trace, n);
}

std::vector<std::pair<int, double>> odd_trace_stability(const HermitianProjection& p,
                                                        const HermitianProjection& q,
                                                        int n_max) {
  require_same_dim(p.dim(), q.dim(), "odd_trace_stability");
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "n_max must be >= 1");
  const CMatrix diff = p.matrix() - q.matrix();
  const CMatrix sq = diff * diff;
  std::vector<std::pair<int, double>> out;
  CMatrix power = diff;  // (P−Q)^{2k+1}
  for (int k = 0; k <= n_max; ++k) {
    out.emplace_back(k, power.trace().real());
    if (k < n_max) power = sq * power;
  }
  return out;
}

IndexReport index_by_fedosov(const HermitianProjection& p, const UnitaryMatrix& u,
                             int n) {
  require_same_dim(p.dim(), u.dim(), "index_by_fedosov");
  if (n < 0) throw Error(ErrorCode::invalid_argument, "trace power index n must be >= 0");
  const CMatrix& pm = p.matrix();
  const CMatrix& um = u.matrix();
  const CMatrix pu = pm * um;
  const CMatrix pud = pm * um.adjoint();
  const CMatrix a = pm - pu * pm * um.adjoint() * pm;
  const CMatrix b = pm - pud * pm * um * pm;
  const cplx raw = trace_of_power(a, n + 1) - trace_of_power(b, n + 1);
  return make_report(raw, IndexMethod::fedosov, n);
}

AdditivityResult additivity_check(const HermitianProjection& p,
                                  const HermitianProjection& q,
                                  const HermitianProjection& r, double eig_tol) {
  AdditivityResult res;
  res.lhs = index_by_spectral_count(p, r, eig_tol).rounded();
  res.rhs = index_by_spectral_count(p, q, eig_tol).rounded() +
            index_by_spectral_count(q, r, eig_tol).rounded();
  return res;
}

double square_commutator_residual(const HermitianProjection& p,
                                  const HermitianProjection& q) {
  require_same_dim(p.dim(), q.dim(), "square_commutator_residual");
  const CMatrix d = p.matrix() - q.matrix();
  const CMatrix d2 = d * d;
  return max_abs_entry(d2 * p.matrix() - p.matrix() * d2);
}

}  // namespace relindex
