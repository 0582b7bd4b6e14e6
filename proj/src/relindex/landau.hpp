#pragma once

// Landau levels for B = 2 in the symmetric gauge: basis states |n,m⟩,
// covariant level projections, and the matrix of z/|z| between states of one
// level.

#include "relindex/gauge.hpp"
#include "relindex/kernel.hpp"
#include "relindex/projpair.hpp"
#include "relindex/rules.hpp"
#include "relindex/types.hpp"

#include <utility>
#include <vector>

namespace relindex {

/// Polynomial part of (D*)^m (z^n e^{−|z|²/2}), D* = −∂_z + z̄/2, stored as
/// terms c·z^a z̄^b. Acting on the polynomial part, D* is f ↦ z̄f − ∂_z f.
struct LandauPolynomial {
  struct Term {
    int a = 0;  ///< power of z
    int b = 0;  ///< power of z̄
    double coeff = 0.0;
  };

  int n = 0;
  int m = 0;
  std::vector<Term> terms;
  /// ∫ |poly|² e^{−|z|²} d²z, from the exact moments
  /// ∫ z^p z̄^q e^{−|z|²} = π p! δ_pq.
  double norm_squared = 0.0;
  /// 1/√norm_squared
  double normalization = 0.0;
};

LandauPolynomial landau_polynomial(int n, int m);

/// (π n! m!)^{−1/2}, the constant that normalizes (D*)^m z^n e^{−|z|²/2}
/// given [D, D*] = 1.
double landau_normalization(int n, int m);

/// Normalized ⟨z|n,m⟩.
cplx basis_wavefunction(int n, int m, Vec2 z);

/// States |n,m⟩ of one level, n = 0..max_angular.
class LandauBasis {
 public:
  LandauBasis(int level, int max_angular);

  int level() const { return level_; }
  int max_angular() const { return static_cast<int>(polys_.size()) - 1; }
  static constexpr double field_b = 2.0;

  cplx operator()(int n, Vec2 z) const;
  const LandauPolynomial& polynomial(int n) const { return polys_.at(n); }

 private:
  int level_;
  std::vector<LandauPolynomial> polys_;
};

/// Radial extent used for matrix elements of states up to angular index n.
double landau_working_radius(int n_max, int level);

/// ⟨n,m1|n',m2⟩ for n, n' ≤ n_max.
CMatrix landau_gram(int m1, int m2, int n_max, int radial_nodes = 120,
                    int angular_nodes = 256);

/// p_m(0, z) = ⟨0|m,m⟩⟨m,m|z⟩ extended by the magnetic phase,
/// p_m(x, y) = e^{i Im(x ȳ)} p_m(0, y − x).
IntegralKernel landau_kernel(int level);

struct FluxMatrix {
  CMatrix matrix;  ///< rows n, columns n'
  /// Largest entry off the n = n' + 1 pattern.
  double pattern_residual = 0.0;
  /// Largest entry change between the working rule and a coarser one.
  double quadrature_residual = 0.0;
};

/// ⟨n,m| z/|z| |n',m⟩ by polar quadrature. Throws convergence when the
/// quadrature residual exceeds `convergence_tol`.
FluxMatrix flux_matrix(int level, int n_max, int radial_nodes = 120, int angular_nodes = 256,
                       double convergence_tol = 1e-8);

/// Common offset (column − row) of a matrix supported on one diagonal.
int shift_index(const CMatrix& m, double zero_tol);

struct PolarGrid {
  double radius = 8.0;
  int radial_nodes = 24;
  int angular_nodes = 96;
};

struct TruncatedPair {
  HermitianProjection p;
  HermitianProjection q;
  PolarRule rule;
};

/// P_jk = √w_j √w_k p_m(x_j, x_k) and Q = D_u P D_u†, D_u = diag u(x_j).
/// Throws precondition if the idempotency residual of P exceeds `max_residual`.
TruncatedPair truncated_projection_pair(int level, const GaugeUnitary& u,
                                        const PolarGrid& grid, double max_residual = 0.1);

/// Index(P U P) = −Tr(P − UPU†)^{2n+1} on the truncated pair.
IndexReport truncated_landau_index(const TruncatedPair& pair, int n);

}  // namespace relindex
