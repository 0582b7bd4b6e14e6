#include "relindex/hall.hpp"

#include "relindex/parallel.hpp"
#include "relindex/rules.hpp"

#include <algorithm>
#include <numbers>

namespace relindex {
namespace {

constexpr double kPi = std::numbers::pi;

// Line integral of Λ(x+a) − Λ(x) on [lo, hi], panels no wider than half a
// switch scale.
double line_integral(const Switch& s, double a, double lo, double hi) {
  if (hi <= lo || a == 0.0) return 0.0;
  const auto panels =
      static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / (0.5 * s.scale()))));
  const Rule1D r = composite_gauss_legendre(16, panels, lo, hi);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * (s(r.nodes[i] + a) - s(r.nodes[i]));
  return acc;
}

struct TensorRule2D {
  std::vector<Vec2> pts;
  std::vector<double> w;
};

TensorRule2D tensor_rule(int n, double radius) {
  const Rule1D g = gauss_legendre(static_cast<std::size_t>(n), -radius, radius);
  TensorRule2D t;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      t.pts.push_back({g.nodes[i], g.nodes[j]});
      t.w.push_back(g.weights[i] * g.weights[j]);
    }
  return t;
}

void require_axis_spec(const QuadratureSpec& spec) {
  if (spec.axis_nodes < 2 || !(spec.outer_radius > 0.0))
    throw Error(ErrorCode::invalid_argument, "need axis_nodes >= 2 and a positive radius");
}

}  // namespace

SwitchPair default_switch_pair(double scale) {
  return {tanh_switch(scale), tanh_switch(scale)};
}

SwitchIntegral switch_integral_1d(const Switch& s, double a, double tol) {
  const double t = 50.0 * s.scale() + std::abs(a);
  SwitchIntegral out;
  out.value = line_integral(s, a, -t, t);
  // Outside [−T, T] the integrand is bounded by |a| times the switch's
  // distance from its limits at ∓(T − |a|).
  const double edge = t - std::abs(a);
  out.tail = std::abs(a) * ((1.0 - s(edge)) + s(-edge));
  if (out.tail > tol)
    throw Error(ErrorCode::tolerance, "switch_integral_1d: tail " + std::to_string(out.tail));
  return out;
}

SwitchIntegral switch_integral_2d(const SwitchPair& pair, Vec2 a, Vec2 b, double tol) {
  const auto i1a = switch_integral_1d(pair.lambda1, a.x, tol);
  const auto i1b = switch_integral_1d(pair.lambda1, b.x, tol);
  const auto i2a = switch_integral_1d(pair.lambda2, a.y, tol);
  const auto i2b = switch_integral_1d(pair.lambda2, b.y, tol);
  SwitchIntegral out;
  out.value = i1a.value * (i2b.value - i2a.value) - i2a.value * (i1b.value - i1a.value);
  out.tail = i1a.tail + i1b.tail + i2a.tail + i2b.tail;
  return out;
}

double switch_box_integral(const Switch& s, double a, double half_side) {
  if (half_side < 0.0) throw Error(ErrorCode::invalid_argument, "negative box half side");
  return line_integral(s, a, -half_side, half_side);
}

cplx curvature_diagonal(const IntegralKernel& p, const SwitchPair& pair, Vec2 x,
                        const QuadratureSpec& spec) {
  require_axis_spec(spec);
  const TensorRule2D rule = tensor_rule(spec.axis_nodes, spec.outer_radius);
  const std::size_t n = rule.pts.size();
  std::vector<Vec2> pos(n);
  std::vector<cplx> from_x(n), to_x(n);
  std::vector<double> l1(n), l2(n);
  for (std::size_t j = 0; j < n; ++j) {
    pos[j] = x + rule.pts[j];
    from_x[j] = rule.w[j] * p(x, pos[j]);
    to_x[j] = rule.w[j] * p(pos[j], x);
    l1[j] = pair.lambda1(pos[j].x);
    l2[j] = pair.lambda2(pos[j].y);
  }
  const double l1x = pair.lambda1(x.x);
  const double l2x = pair.lambda2(x.y);

  const cplx sum = chunked_sum(n, 16, [&](std::size_t begin, std::size_t end) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = begin; j < end; ++j) {
      const double dy1 = l1[j] - l1x;
      const double dy2 = l2[j] - l2x;
      cplx row{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) {
        const double b = dy1 * (l2[k] - l2[j]) - dy2 * (l1[k] - l1[j]);
        if (b != 0.0) row += p(pos[j], pos[k]) * (b * to_x[k]);
      }
      acc += from_x[j] * row;
    }
    return acc;
  });
  return cplx(0.0, -1.0) * sum;
}

std::vector<TransportEstimate> hall_transport_box(const IntegralKernel& p,
                                                  const SwitchPair& pair,
                                                  const std::vector<double>& half_sides,
                                                  const QuadratureSpec& spec) {
  if (!p.is_covariant())
    throw Error(ErrorCode::precondition, "hall_transport_box needs a covariant kernel");
  require_axis_spec(spec);
  for (std::size_t i = 1; i < half_sides.size(); ++i)
    if (!(half_sides[i] > half_sides[i - 1]))
      throw Error(ErrorCode::invalid_argument, "box half sides must increase");

  const Rule1D g = gauss_legendre(static_cast<std::size_t>(spec.axis_nodes),
                                  -spec.outer_radius, spec.outer_radius);
  const std::size_t na = g.size();
  const TensorRule2D rule = tensor_rule(spec.axis_nodes, spec.outer_radius);
  const std::size_t n = rule.pts.size();  // index i*na + j ↔ (g[i], g[j])
  const Vec2 origin{};
  std::vector<cplx> left(n), right(n);
  for (std::size_t j = 0; j < n; ++j) {
    left[j] = rule.w[j] * p(origin, rule.pts[j]);
    right[j] = rule.w[j] * p(rule.pts[j], origin);
  }

  std::vector<TransportEstimate> out;
  for (double half : half_sides) {
    // F_k(a) = ∫_{−L}^{L} (Λ_k(x+a) − Λ_k(x)) dx at every axis node.
    std::vector<double> f1(na), f2(na);
    for (std::size_t i = 0; i < na; ++i) {
      f1[i] = switch_box_integral(pair.lambda1, g.nodes[i], half);
      f2[i] = switch_box_integral(pair.lambda2, g.nodes[i], half);
    }
    const cplx sum = chunked_sum(n, 16, [&](std::size_t begin, std::size_t end) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = begin; j < end; ++j) {
        const double fs1 = f1[j / na];
        const double fs2 = f2[j % na];
        cplx row{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
          const double b = fs1 * (f2[k % na] - fs2) - fs2 * (f1[k / na] - fs1);
          row += p(rule.pts[j], rule.pts[k]) * (b * right[k]);
        }
        acc += left[j] * row;
      }
      return acc;
    });
    const cplx q = cplx(0.0, 2.0 * kPi) * sum;
    out.push_back({half, q.real(), std::abs(q.imag())});
  }
  return out;
}

TransportEstimate hall_transport_closed_form(const IntegralKernel& p,
                                             const QuadratureSpec& spec, int radial_nodes,
                                             int angular_nodes) {
  const PolarRule rule = polar_rule(spec.outer_radius, radial_nodes, angular_nodes);
  const std::size_t n = rule.points.size();
  const Vec2 origin{};
  std::vector<cplx> left(n), right(n);
  for (std::size_t j = 0; j < n; ++j) {
    left[j] = rule.weights[j] * p(origin, rule.points[j]);
    right[j] = rule.weights[j] * p(rule.points[j], origin);
  }
  const cplx sum = chunked_sum(n, 16, [&](std::size_t begin, std::size_t end) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = begin; j < end; ++j) {
      const Vec2 y = rule.points[j];
      cplx row{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k)
        row += p(y, rule.points[k]) * (wedge(y, rule.points[k]) * right[k]);
      acc += left[j] * row;
    }
    return acc;
  });
  const cplx q = cplx(0.0, 2.0 * kPi) * sum;
  TransportEstimate out{0.0, q.real(), std::abs(q.imag())};
  if (out.imag_residual > spec.target_tol)
    throw Error(ErrorCode::tolerance, "hall_transport_closed_form: imaginary residual " +
                                          std::to_string(out.imag_residual));
  return out;
}

TransportEstimate kubo_box(const IntegralKernel& p, double half_side, const QuadratureSpec& spec,
                           int box_nodes) {
  require_axis_spec(spec);
  if (!(half_side > 0.0)) throw Error(ErrorCode::invalid_argument, "box half side must be > 0");
  const Rule1D bx = gauss_legendre(static_cast<std::size_t>(box_nodes), -half_side, half_side);
  const TensorRule2D rule = tensor_rule(spec.axis_nodes, spec.outer_radius);
  const std::size_t n = rule.pts.size();

  cplx total{0.0, 0.0};
  for (std::size_t a = 0; a < bx.size(); ++a)
    for (std::size_t b = 0; b < bx.size(); ++b) {
      const Vec2 x{bx.nodes[a], bx.nodes[b]};
      std::vector<Vec2> pos(n);
      std::vector<cplx> from_x(n), to_x(n);
      for (std::size_t j = 0; j < n; ++j) {
        pos[j] = x + rule.pts[j];
        from_x[j] = rule.w[j] * p(x, pos[j]);
        to_x[j] = rule.w[j] * p(pos[j], x);
      }
      const cplx diag = chunked_sum(n, 16, [&](std::size_t begin, std::size_t end) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = begin; j < end; ++j) {
          cplx row{0.0, 0.0};
          for (std::size_t k = 0; k < n; ++k)
            row += p(pos[j], pos[k]) * (wedge(pos[j], pos[k]) * to_x[k]);
          acc += from_x[j] * row;
        }
        return acc;
      });
      // Diagonal kernel of P x₁ P⊥ x₂ P − P x₂ P⊥ x₁ P is −diag.
      total += bx.weights[a] * bx.weights[b] * (-diag);
    }
  const double area = 4.0 * half_side * half_side;
  const cplx sigma = cplx(0.0, -1.0) / area * total;
  return {half_side, sigma.real(), std::abs(sigma.imag())};
}

}  // namespace relindex
