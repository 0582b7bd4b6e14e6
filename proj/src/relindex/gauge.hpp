#pragma once

// Singular gauge transformations (flux tubes) and switch functions.

#include "relindex/types.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace relindex {

/// Unimodular multiplication operator u(x) = Π_k ((x − c_k)/|x − c_k|)^{α_k}
/// with integer α_k. Each factor takes the value 1 at its own center, which
/// is the z ∈ [0, ∞) convention of the flux-tube definition.
class GaugeUnitary {
 public:
  struct Factor {
    int alpha = 0;
    Vec2 center;
  };

  GaugeUnitary() = default;
  GaugeUnitary(std::vector<Factor> factors, double lipschitz_c1, double lipschitz_c2);

  cplx operator()(Vec2 x) const { return evaluate(x); }
  cplx evaluate(Vec2 x) const;

  /// N(U), the total number of flux quanta.
  int winding() const;
  Vec2 singularity() const;
  double lipschitz_c1() const { return c1_; }
  double lipschitz_c2() const { return c2_; }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Pointwise product u·v.
  GaugeUnitary operator*(const GaugeUnitary& other) const;

 private:
  std::vector<Factor> factors_;
  double c1_ = 0.0;
  double c2_ = 0.5;
};

/// u_α(z) = z^α/|z|^α. Non-integer α is rejected: the fractional flux tube
/// has a cut along [0, ∞) across which the index integrals diverge.
GaugeUnitary flux_unitary(double alpha);

/// x ↦ u(x − t)
GaugeUnitary translate_unitary(const GaugeUnitary& u, Vec2 t);

/// Accumulated phase of u along a circle, divided by 2π, computed from
/// principal-branch increments between `nodes` equally spaced points.
struct WindingEstimate {
  int winding = 0;
  double raw = 0.0;
  double residual = 0.0;  ///< |raw − winding|
};

WindingEstimate numerical_winding(const GaugeUnitary& u, Vec2 center, double radius,
                                  int nodes = 4096);

/// Largest sampled value of |u(s+x+y) − u(s+y)|·|y|/|x| over random pairs with
/// |x| ≤ C₂|y| (s the singularity). The Lipschitz-type hypothesis holds on the
/// sample iff the result is ≤ C₁.
double sampled_ratio_bound(const GaugeUnitary& u, std::mt19937_64& rng, int samples,
                           double max_radius = 20.0);

/// Monotone C¹ profile with unit total rise.
class Switch {
 public:
  Switch(std::string name, std::function<double(double)> value,
         std::function<double(double)> derivative, double scale);

  double operator()(double x) const { return value_(x); }
  double derivative(double x) const { return derivative_(x); }
  /// Width over which the profile rises; tails decay on this length scale.
  double scale() const { return scale_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  double scale_;
};

/// Λ(x) = (1 + tanh((x − center)/scale))/2
Switch tanh_switch(double scale, double center = 0.0);

/// Λ(x) = (1 + erf((x − center)/scale))/2
Switch erf_switch(double scale, double center = 0.0);

}  // namespace relindex
