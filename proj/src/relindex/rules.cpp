#include "relindex/rules.hpp"

#include "relindex/types.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace relindex {
namespace {

struct TableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const {
    gsl_integration_glfixed_table_free(t);
  }
};

// Tables are immutable once built; cache them per order.
const gsl_integration_glfixed_table* table_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<gsl_integration_glfixed_table, TableDeleter>>
      cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot.reset(gsl_integration_glfixed_table_alloc(n));
    if (!slot) throw Error(ErrorCode::invalid_argument, "cannot build Gauss-Legendre table");
  }
  return slot.get();
}

}  // namespace

Rule1D gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "Gauss-Legendre order must be positive");
  const auto* table = table_for(n);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, i, &rule.nodes[i], &rule.weights[i], table);
  return rule;
}

Rule1D composite_gauss_legendre(std::size_t n, std::size_t panels, double a, double b) {
  if (panels == 0) throw Error(ErrorCode::invalid_argument, "need at least one panel");
  Rule1D out;
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const Rule1D r = gauss_legendre(n, a + h * p, a + h * (p + 1));
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

Rule1D periodic_trapezoid(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "trapezoid needs nodes");
  Rule1D rule;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes.push_back(step * (static_cast<double>(i) + 0.5));
    rule.weights.push_back(step);
  }
  return rule;
}

PolarRule polar_rule(double radius, int radial_nodes, int angular_nodes) {
  if (radius <= 0.0 || radial_nodes < 1 || angular_nodes < 1)
    throw Error(ErrorCode::invalid_argument, "polar rule needs positive sizes");
  const Rule1D rr = gauss_legendre(radial_nodes, 0.0, radius);
  const Rule1D th = periodic_trapezoid(angular_nodes);
  PolarRule rule;
  rule.points.reserve(rr.size() * th.size());
  rule.weights.reserve(rr.size() * th.size());
  for (std::size_t i = 0; i < rr.size(); ++i)
    for (std::size_t k = 0; k < th.size(); ++k) {
      const double r = rr.nodes[i];
      rule.points.push_back({r * std::cos(th.nodes[k]), r * std::sin(th.nodes[k])});
      rule.weights.push_back(rr.weights[i] * r * th.weights[k]);
    }
  return rule;
}

}  // namespace relindex
