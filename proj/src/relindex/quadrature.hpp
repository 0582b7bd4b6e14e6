#pragma once

// Integration engines: the area integral of three gauge phases, the reduced
// 4D index integral, the 6D Monte Carlo trace of (P − UPU†)³, and traces
// from diagonal kernel values.

#include "relindex/gauge.hpp"
#include "relindex/kernel.hpp"
#include "relindex/types.hpp"

#include <cstdint>
#include <vector>

namespace relindex {

struct QuadratureSpec {
  double outer_radius = 8.0;      ///< R
  double puncture_radius = 1e-3;  ///< ε
  int radial_nodes = 48;
  int angular_nodes = 256;
  int axis_nodes = 48;  ///< per-axis nodes of tensor rules on [−R, R]
  std::int64_t mc_samples = 10'000'000;
  std::uint64_t seed = 1;
  double target_tol = 1e-6;
};

struct Triangle {
  Vec2 a, b, c;

  /// a∧b + b∧c + c∧a, twice the signed area.
  double oriented_area_twice() const { return wedge(a, b) + wedge(b, c) + wedge(c, a); }
};

struct ConnesResult {
  cplx value;            ///< interior + tail
  cplx interior;         ///< punctured disk |x| < R
  cplx tail;             ///< |x| > R, integrated after inversion r = R/s
  double interior_error = 0.0;
  double tail_error = 0.0;  ///< coarse-vs-fine difference of the tail rule
  double tail_bound = 0.0;  ///< analytic bound on |tail| from the 1/|x| decay of each factor
  std::size_t cells = 0;
};

/// ∫ (1 − u(x−a)/u(x−b))(1 − u(x−b)/u(x−c))(1 − u(x−c)/u(x−a)) dx over the
/// plane minus ε-balls at the punctures. The disk |x| < R is integrated by
/// adaptive polar cubature to absolute accuracy target_tol; its complement
/// is mapped onto s ∈ (0, 1] and integrated by a product rule. Throws
/// precondition when the geometry violates R ≥ 10·max|puncture| or
/// ε < 0.1·min separation, convergence when the interior cell budget runs
/// out, tolerance when the tail error exceeds target_tol.
ConnesResult connes_area(const GaugeUnitary& u, const Triangle& tri, const QuadratureSpec& spec,
                         std::size_t max_cells = 400'000);

struct Integral4D {
  cplx value;
  double imag_residual = 0.0;
};

/// −2πi·winding·∫∫ p(0,x) p(x,y) p(y,0) x∧y dx dy on [−R, R]⁴ with a tensor
/// Gauss–Legendre rule. Needs a covariant kernel. Throws tolerance when the
/// imaginary residual exceeds target_tol.
Integral4D index_integral_4d(const IntegralKernel& p, int winding, const QuadratureSpec& spec);

struct MonteCarloEstimate {
  cplx value;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo estimate of Tr(P − UPU†)³ as the 6D integral of
/// Π p(x_i, x_{i+1})(1 − u(x_i)/u(x_{i+1})) over the cyclic triple (x, y, z).
///
/// Relative positions y − x, z − x are drawn from a gaussian matched to the
/// kernel envelope; the centroid is drawn from a density with |c|⁻³ tails,
/// the decay rate of the integrand in the centroid direction. Antithetic
/// pairs flip the relative positions. Each chunk of samples has its own
/// generator seeded from (seed, chunk), so the estimate is reproducible.
/// Throws tolerance when the standard error exceeds target_tol.
MonteCarloEstimate index_integral_6d_mc(const IntegralKernel& p, const GaugeUnitary& u,
                                        const QuadratureSpec& spec,
                                        double centroid_scale = 1.5);

/// ∫_{|x| < radius} k(x, x) dx with a polar product rule.
cplx trace_from_diagonal(const IntegralKernel& k, double radius, int radial_nodes = 96,
                         int angular_nodes = 128);

}  // namespace relindex
