#pragma once

// Integral kernels p(x, y) on the plane.

#include "relindex/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace relindex {

/// Evaluable kernel with a gaussian decay envelope
/// |p(x, y)| ≲ poly(|x − y|)·exp(−gaussian_rate·|x − y|²).
///
/// Covariant kernels are stored as a radial profile f(|z|²) = p(0, z) plus a
/// magnetic phase, p(x, y) = exp(i·phase·Im(x ȳ))·f(|y − x|²), and evaluate
/// without indirection. General kernels wrap a callable.
class IntegralKernel {
 public:
  using Radial = std::function<double(double)>;
  using General = std::function<cplx(Vec2, Vec2)>;

  /// p(x, y) = exp(i·phase·Im(x ȳ)) f(|y − x|²), f given by polynomial
  /// coefficients in |z|² times exp(−|z|²/2).
  static IntegralKernel covariant(std::string name, int level, std::vector<double> poly,
                                  double phase, double gaussian_rate);
  static IntegralKernel general(std::string name, General fn, double gaussian_rate,
                                bool real_valued);

  cplx operator()(Vec2 x, Vec2 y) const {
    if (!fn_) {
      const Vec2 d = y - x;
      const double f = radial(d.norm2());
      if (phase_ == 0.0) return {f, 0.0};
      const double im = x.y * y.x - x.x * y.y;  // Im(x ȳ)
      return std::polar(f, phase_ * im);
    }
    return fn_(x, y);
  }

  /// p(0, z) for covariant kernels.
  double radial(double r2) const {
    double acc = 0.0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * r2 + *it;
    return acc * std::exp(-0.5 * r2);
  }

  bool is_covariant() const { return !fn_; }
  bool is_real() const { return real_; }
  int level() const { return level_; }
  double gaussian_rate() const { return rate_; }
  double phase_strength() const { return phase_; }
  const std::string& name() const { return name_; }

 private:
  IntegralKernel() = default;

  std::string name_;
  int level_ = -1;
  std::vector<double> poly_;
  double phase_ = 0.0;
  double rate_ = 0.5;
  bool real_ = false;
  General fn_;
};

/// Real, translation-invariant gaussian (1/π) exp(−|x − y|²/2). Time-reversal
/// invariant; used as the control case where every index quantity vanishes.
IntegralKernel real_gaussian_kernel();

/// e^{iθ(x)} p(x, y) e^{−iθ(y)}
IntegralKernel gauge_conjugated(const IntegralKernel& p, std::function<double(Vec2)> theta);

}  // namespace relindex
