#include "relindex/kernel.hpp"

#include <numbers>

namespace relindex {

IntegralKernel IntegralKernel::covariant(std::string name, int level,
                                         std::vector<double> poly, double phase,
                                         double gaussian_rate) {
  if (poly.empty()) throw Error(ErrorCode::invalid_argument, "empty kernel profile");
  IntegralKernel k;
  k.name_ = std::move(name);
  k.level_ = level;
  k.poly_ = std::move(poly);
  k.phase_ = phase;
  k.rate_ = gaussian_rate;
  k.real_ = (phase == 0.0);
  return k;
}

IntegralKernel IntegralKernel::general(std::string name, General fn, double gaussian_rate,
                                       bool real_valued) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "general kernel needs a callable");
  IntegralKernel k;
  k.name_ = std::move(name);
  k.fn_ = std::move(fn);
  k.rate_ = gaussian_rate;
  k.real_ = real_valued;
  return k;
}

IntegralKernel real_gaussian_kernel() {
  return IntegralKernel::covariant("real-gaussian", -1, {1.0 / std::numbers::pi}, 0.0, 0.5);
}

IntegralKernel gauge_conjugated(const IntegralKernel& p, std::function<double(Vec2)> theta) {
  return IntegralKernel::general(
      p.name() + "-conjugated",
      [p, theta = std::move(theta)](Vec2 x, Vec2 y) {
        return std::polar(1.0, theta(x) - theta(y)) * p(x, y);
      },
      p.gaussian_rate(), false);
}

}  // namespace relindex
