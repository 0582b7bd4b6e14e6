#pragma once

// Hall transport from switch functions: the adiabatic curvature on the
// diagonal, its box traces, the closed-form limit, and the box-averaged Kubo
// expression.

#include "relindex/gauge.hpp"
#include "relindex/kernel.hpp"
#include "relindex/quadrature.hpp"

#include <utility>
#include <vector>

namespace relindex {

struct BoxRegion {
  double half_side = 1.0;  ///< box [−L, L]²
};

struct SwitchPair {
  Switch lambda1;
  Switch lambda2;
};

/// Default pair: tanh switches of unit scale centred at the origin.
SwitchPair default_switch_pair(double scale = 1.0);

struct SwitchIntegral {
  double value = 0.0;
  double tail = 0.0;  ///< bound on the part of the line outside [−T, T]
};

/// ∫ (Λ(x+a) − Λ(x)) dx over [−T, T], T = 50·scale + |a|. Throws tolerance
/// when the tail bound exceeds `tol`.
SwitchIntegral switch_integral_1d(const Switch& s, double a, double tol = 1e-8);

/// ∫∫ [(Λ₁(x₁+a₁) − Λ₁(x₁))(Λ₂(x₂+b₂) − Λ₂(x₂+a₂)) − (1 ↔ 2)] dx₁dx₂.
/// Each product factorizes into two line integrals.
SwitchIntegral switch_integral_2d(const SwitchPair& pair, Vec2 a, Vec2 b, double tol = 1e-8);

/// ∫_{−L}^{L} (Λ(x+a) − Λ(x)) dx
double switch_box_integral(const Switch& s, double a, double half_side);

/// ω₁₂(x,x) = i ∫∫ p(x,y) p⊥(y,z) p(z,x) B dy dz with
/// B = (Λ₁(y₁)−Λ₁(x₁))(Λ₂(z₂)−Λ₂(y₂)) − (1 ↔ 2).
/// B vanishes at y = z, so the identity part of p⊥ = 1 − p drops out and
/// ω₁₂(x,x) = −i ∫∫ p(x,y) p(y,z) p(z,x) B. Integrated over y = x + s,
/// z = x + t on a tensor rule of [−R, R]² per variable; any kernel.
cplx curvature_diagonal(const IntegralKernel& p, const SwitchPair& pair, Vec2 x,
                        const QuadratureSpec& spec);

struct TransportEstimate {
  double half_side = 0.0;
  double q = 0.0;
  double imag_residual = 0.0;
};

/// −2π ∫_box ω₁₂(x,x) dx for each L. For a covariant kernel the box
/// integral over x factorizes into switch_box_integral terms, so the 4D
/// kernel sum is formed once and shared by all L.
std::vector<TransportEstimate> hall_transport_box(const IntegralKernel& p,
                                                  const SwitchPair& pair,
                                                  const std::vector<double>& half_sides,
                                                  const QuadratureSpec& spec);

/// Q = 2πi ∫∫ p(0,y) p(y,z) p(z,0) y∧z, with y and z on polar product rules
/// of radius R. Throws tolerance when the imaginary residual exceeds
/// target_tol.
TransportEstimate hall_transport_closed_form(const IntegralKernel& p,
                                             const QuadratureSpec& spec,
                                             int radial_nodes = 40, int angular_nodes = 96);

/// −(i/|Ω|) Tr χ_Ω (P x₁ P⊥ x₂ P − P x₂ P⊥ x₁ P). The diagonal kernel of the
/// operator is −∫∫ p(x,y)p(y,z)p(z,x) y∧z, evaluated at a box_nodes² Gauss
/// grid of x in the box, with y, z on tensor rules of [−R, R]² around x.
TransportEstimate kubo_box(const IntegralKernel& p, double half_side,
                           const QuadratureSpec& spec, int box_nodes = 4);

}  // namespace relindex
