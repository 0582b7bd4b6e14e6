#include "relindex/landau.hpp"

#include "relindex/linalg.hpp"
#include "relindex/rules.hpp"

#include <algorithm>
#include <map>
#include <numbers>

namespace relindex {
namespace {

void require_indices(int n, int m) {
  if (n < 0 || m < 0) throw Error(ErrorCode::invalid_argument, "Landau indices must be >= 0");
}

// log of |c| r^{a+b} e^{-r²/2}, evaluated in log space so that large powers
// and tiny gaussians do not overflow separately.
cplx term_value(const LandauPolynomial::Term& t, double log_r, double theta, double r2) {
  const int deg = t.a + t.b;
  const double mag =
      (deg == 0) ? std::exp(-0.5 * r2) : std::exp(deg * log_r - 0.5 * r2);
  return t.coeff * std::polar(mag, (t.a - t.b) * theta);
}

cplx eval_poly(const LandauPolynomial& p, Vec2 z) {
  const double r2 = z.norm2();
  const double log_r = r2 > 0.0 ? 0.5 * std::log(r2) : 0.0;
  const double theta = std::atan2(z.y, z.x);
  cplx acc{0.0, 0.0};
  for (const auto& t : p.terms) {
    if (r2 == 0.0 && t.a + t.b > 0) continue;
    acc += term_value(t, log_r, theta, r2);
  }
  return p.normalization * acc;
}

}  // namespace

LandauPolynomial landau_polynomial(int n, int m) {
  require_indices(n, m);
  std::map<std::pair<int, int>, double> terms{{{n, 0}, 1.0}};
  for (int step = 0; step < m; ++step) {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [ab, c] : terms) {
      const auto [a, b] = ab;
      next[{a, b + 1}] += c;
      if (a > 0) next[{a - 1, b}] -= c * a;
    }
    terms.clear();
    for (const auto& [ab, c] : next)
      if (c != 0.0) terms[ab] = c;
  }

  LandauPolynomial out;
  out.n = n;
  out.m = m;
  for (const auto& [ab, c] : terms) out.terms.push_back({ab.first, ab.second, c});

  double norm2 = 0.0;
  for (const auto& s : out.terms)
    for (const auto& t : out.terms)
      if (s.a + t.b == s.b + t.a)
        norm2 += s.coeff * t.coeff * std::numbers::pi * std::tgamma(s.a + t.b + 1.0);
  out.norm_squared = norm2;
  out.normalization = 1.0 / std::sqrt(norm2);
  return out;
}

double landau_normalization(int n, int m) {
  require_indices(n, m);
  return 1.0 / std::sqrt(std::numbers::pi * std::tgamma(n + 1.0) * std::tgamma(m + 1.0));
}

cplx basis_wavefunction(int n, int m, Vec2 z) { return eval_poly(landau_polynomial(n, m), z); }

LandauBasis::LandauBasis(int level, int max_angular) : level_(level) {
  require_indices(max_angular, level);
  polys_.reserve(max_angular + 1);
  for (int n = 0; n <= max_angular; ++n) polys_.push_back(landau_polynomial(n, level));
}

cplx LandauBasis::operator()(int n, Vec2 z) const { return eval_poly(polys_.at(n), z); }

double landau_working_radius(int n_max, int level) {
  return std::sqrt(2.0 * (n_max + level) + 1.0) + 8.0;
}

namespace {

// Columns: basis states; rows: quadrature nodes.
CMatrix sample_basis(const LandauBasis& basis, const PolarRule& rule) {
  CMatrix s(static_cast<Eigen::Index>(rule.points.size()), basis.max_angular() + 1);
  for (int n = 0; n <= basis.max_angular(); ++n)
    for (std::size_t j = 0; j < rule.points.size(); ++j)
      s(static_cast<Eigen::Index>(j), n) = basis(n, rule.points[j]);
  return s;
}

Eigen::VectorXd weight_vector(const PolarRule& rule) {
  return Eigen::Map<const Eigen::VectorXd>(rule.weights.data(),
                                           static_cast<Eigen::Index>(rule.weights.size()));
}

CMatrix flux_matrix_on(const LandauBasis& basis, const PolarRule& rule) {
  const CMatrix s = sample_basis(basis, rule);
  CVector w(static_cast<Eigen::Index>(rule.points.size()));
  for (std::size_t j = 0; j < rule.points.size(); ++j) {
    const Vec2 x = rule.points[j];
    const double r = x.norm();
    w(static_cast<Eigen::Index>(j)) = rule.weights[j] * cplx(x.x / r, x.y / r);
  }
  return s.adjoint() * w.asDiagonal() * s;
}

}  // namespace

CMatrix landau_gram(int m1, int m2, int n_max, int radial_nodes, int angular_nodes) {
  const LandauBasis b1(m1, n_max);
  const LandauBasis b2(m2, n_max);
  const PolarRule rule =
      polar_rule(landau_working_radius(n_max, std::max(m1, m2)), radial_nodes, angular_nodes);
  const Eigen::VectorXd w = weight_vector(rule);
  return sample_basis(b1, rule).adjoint() * w.cast<cplx>().asDiagonal() *
         sample_basis(b2, rule);
}

IntegralKernel landau_kernel(int level) {
  require_indices(0, level);
  const LandauPolynomial p = landau_polynomial(level, level);
  // ⟨0|m,m⟩ is the constant term; ⟨m,m|z⟩ only has terms with a = b, so the
  // profile is a polynomial in |z|².
  double at_origin = 0.0;
  for (const auto& t : p.terms)
    if (t.a == 0 && t.b == 0) at_origin = t.coeff;
  std::vector<double> poly(level + 1, 0.0);
  for (const auto& t : p.terms) {
    if (t.a != t.b) throw Error(ErrorCode::precondition, "non-radial diagonal Landau state");
    poly[t.a] += p.normalization * at_origin * p.normalization * t.coeff;
  }
  return IntegralKernel::covariant("landau-" + std::to_string(level), level, std::move(poly),
                                   1.0, 0.5);
}

FluxMatrix flux_matrix(int level, int n_max, int radial_nodes, int angular_nodes,
                       double convergence_tol) {
  require_indices(n_max, level);
  if (radial_nodes < 8) throw Error(ErrorCode::invalid_argument, "too few radial nodes");
  const LandauBasis basis(level, n_max);
  const double radius = landau_working_radius(n_max, level);
  FluxMatrix out;
  out.matrix = flux_matrix_on(basis, polar_rule(radius, radial_nodes, angular_nodes));
  const CMatrix coarse =
      flux_matrix_on(basis, polar_rule(radius, (3 * radial_nodes) / 4, angular_nodes));
  out.quadrature_residual = max_abs_entry(out.matrix - coarse);
  for (Eigen::Index i = 0; i < out.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < out.matrix.cols(); ++j)
      if (i != j + 1) out.pattern_residual = std::max(out.pattern_residual, std::abs(out.matrix(i, j)));
  if (out.quadrature_residual > convergence_tol)
    throw Error(ErrorCode::convergence, "flux_matrix: quadrature residual " +
                                            std::to_string(out.quadrature_residual));
  return out;
}

int shift_index(const CMatrix& m, double zero_tol) {
  if (m.rows() == 0 || m.cols() == 0) throw Error(ErrorCode::invalid_argument, "empty matrix");
  if (zero_tol < 0.0) throw Error(ErrorCode::invalid_argument, "negative zero_tol");
  std::vector<int> admissible;
  for (Eigen::Index off = -(m.rows() - 1); off <= m.cols() - 1; ++off) {
    bool ok = true;
    for (Eigen::Index i = 0; i < m.rows() && ok; ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (j - i != off && std::abs(m(i, j)) > zero_tol) {
          ok = false;
          break;
        }
    if (ok) admissible.push_back(static_cast<int>(off));
  }
  if (admissible.empty())
    throw Error(ErrorCode::precondition, "not a shift matrix: no admissible offset");
  if (admissible.size() > 1)
    throw Error(ErrorCode::precondition, "shift offset ambiguous (matrix is numerically zero)");
  return admissible.front();
}

TruncatedPair truncated_projection_pair(int level, const GaugeUnitary& u,
                                        const PolarGrid& grid, double max_residual) {
  const IntegralKernel p = landau_kernel(level);
  PolarRule rule = polar_rule(grid.radius, grid.radial_nodes, grid.angular_nodes);
  const auto dim = static_cast<Eigen::Index>(rule.points.size());
  CMatrix pm(dim, dim);
  std::vector<double> sw(rule.weights.size());
  for (std::size_t j = 0; j < sw.size(); ++j) sw[j] = std::sqrt(rule.weights[j]);
  for (Eigen::Index k = 0; k < dim; ++k)
    for (Eigen::Index j = k; j < dim; ++j) {
      const cplx v = sw[j] * sw[k] * p(rule.points[j], rule.points[k]);
      pm(j, k) = v;
      pm(k, j) = std::conj(v);
    }
  CVector phases(dim);
  for (Eigen::Index j = 0; j < dim; ++j) phases(j) = u(rule.points[j]);

  HermitianProjection proj(std::move(pm), max_residual);
  HermitianProjection q = proj.phase_conjugated(phases);
  return {std::move(proj), std::move(q), std::move(rule)};
}

IndexReport truncated_landau_index(const TruncatedPair& pair, int n) {
  IndexReport r = index_by_odd_trace(pair.p, pair.q, n);
  r.value = -r.value;
  return r;
}

}  // namespace relindex
