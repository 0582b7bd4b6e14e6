#pragma once

#include "relindex/types.hpp"

#include <cstddef>
#include <vector>

namespace relindex {

/// Gauss–Legendre nodes and weights on an interval.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss–Legendre rule mapped to [a, b].
Rule1D gauss_legendre(std::size_t n, double a, double b);

/// Composite rule: [a, b] split into `panels` equal panels of n-point
/// Gauss–Legendre each.
Rule1D composite_gauss_legendre(std::size_t n, std::size_t panels, double a, double b);

/// Equal-angle trapezoid rule on [0, 2π) with n nodes offset by half a step.
/// Exact for trigonometric polynomials of degree < n.
Rule1D periodic_trapezoid(std::size_t n);

/// Nodes and weights of a 2D product rule in polar coordinates:
/// Gauss–Legendre in r on [0, radius] (weight r dr) times equal angles.
struct PolarRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

PolarRule polar_rule(double radius, int radial_nodes, int angular_nodes);

}  // namespace relindex
