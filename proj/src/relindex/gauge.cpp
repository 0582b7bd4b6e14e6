#include "relindex/gauge.hpp"

#include <algorithm>
#include <numbers>

namespace relindex {
namespace {

cplx unit_phase(Vec2 d) {
  const double r = d.norm();
  if (r == 0.0) return {1.0, 0.0};
  return {d.x / r, d.y / r};
}

cplx int_power(cplx z, int k) {
  if (k < 0) {
    z = std::conj(z);  // |z| = 1
    k = -k;
  }
  cplx out{1.0, 0.0};
  while (k > 0) {
    if (k & 1) out *= z;
    z *= z;
    k >>= 1;
  }
  return out;
}

}  // namespace

GaugeUnitary::GaugeUnitary(std::vector<Factor> factors, double lipschitz_c1,
                           double lipschitz_c2)
    : factors_(std::move(factors)), c1_(lipschitz_c1), c2_(lipschitz_c2) {}

cplx GaugeUnitary::evaluate(Vec2 x) const {
  cplx out{1.0, 0.0};
  for (const auto& f : factors_) out *= int_power(unit_phase(x - f.center), f.alpha);
  return out;
}

int GaugeUnitary::winding() const {
  int n = 0;
  for (const auto& f : factors_) n += f.alpha;
  return n;
}

Vec2 GaugeUnitary::singularity() const {
  return factors_.empty() ? Vec2{} : factors_.front().center;
}

GaugeUnitary GaugeUnitary::operator*(const GaugeUnitary& other) const {
  std::vector<Factor> merged = factors_;
  for (const auto& f : other.factors_) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Factor& g) { return g.center == f.center; });
    if (it != merged.end())
      it->alpha += f.alpha;
    else
      merged.push_back(f);
  }
  int total = 0;
  for (const auto& f : merged) total += std::abs(f.alpha);
  return GaugeUnitary(std::move(merged), 2.0 * total, 0.5);
}

GaugeUnitary flux_unitary(double alpha) {
  if (!std::isfinite(alpha) || alpha != std::round(alpha))
    throw Error(ErrorCode::invalid_argument,
                "flux_unitary: alpha must be an integer; fractional flux tubes make the "
                "index integrals divergent along the cut");
  const int a = static_cast<int>(alpha);
  return GaugeUnitary({{a, Vec2{}}}, 2.0 * std::abs(a), 0.5);
}

GaugeUnitary translate_unitary(const GaugeUnitary& u, Vec2 t) {
  auto factors = u.factors();
  for (auto& f : factors) f.center = f.center + t;
  return GaugeUnitary(std::move(factors), u.lipschitz_c1(), u.lipschitz_c2());
}

WindingEstimate numerical_winding(const GaugeUnitary& u, Vec2 center, double radius,
                                  int nodes) {
  if (nodes < 3 || radius <= 0.0)
    throw Error(ErrorCode::invalid_argument, "numerical_winding: bad circle");
  const double step = 2.0 * std::numbers::pi / nodes;
  double total = 0.0;
  cplx prev = u(center + Vec2{radius, 0.0});
  for (int k = 1; k <= nodes; ++k) {
    const double th = step * k;
    const cplx cur = u(center + Vec2{radius * std::cos(th), radius * std::sin(th)});
    total += std::arg(cur / prev);
    prev = cur;
  }
  WindingEstimate w;
  w.raw = total / (2.0 * std::numbers::pi);
  w.winding = static_cast<int>(std::lround(w.raw));
  w.residual = std::abs(w.raw - w.winding);
  return w;
}

double sampled_ratio_bound(const GaugeUnitary& u, std::mt19937_64& rng, int samples,
                           double max_radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec2 s = u.singularity();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double ry = max_radius * unit(rng) + 1e-3;
    const double ty = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 y{ry * std::cos(ty), ry * std::sin(ty)};
    const double rx = u.lipschitz_c2() * ry * unit(rng) + 1e-12;
    const double tx = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 x{rx * std::cos(tx), rx * std::sin(tx)};
    const double ratio = std::abs(u(s + x + y) - u(s + y)) * ry / rx;
    worst = std::max(worst, ratio);
  }
  return worst;
}

Switch::Switch(std::string name, std::function<double(double)> value,
               std::function<double(double)> derivative, double scale)
    : name_(std::move(name)),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      scale_(scale) {
  if (!(scale_ > 0.0)) throw Error(ErrorCode::invalid_argument, "switch scale must be > 0");
}

Switch tanh_switch(double scale, double center) {
  if (!(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "switch scale must be > 0");
  return Switch(
      "tanh",
      [scale, center](double x) { return 0.5 * (1.0 + std::tanh((x - center) / scale)); },
      [scale, center](double x) {
        const double c = std::cosh((x - center) / scale);
        return std::isfinite(c) ? 0.5 / (scale * c * c) : 0.0;
      },
      scale);
}

Switch erf_switch(double scale, double center) {
  if (!(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "switch scale must be > 0");
  return Switch(
      "erf",
      [scale, center](double x) { return 0.5 * (1.0 + std::erf((x - center) / scale)); },
      [scale, center](double x) {
        const double t = (x - center) / scale;
        return std::exp(-t * t) / (scale * std::sqrt(std::numbers::pi));
      },
      scale);
}

}  // namespace relindex
