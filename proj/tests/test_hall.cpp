#include "gen.hpp"

#include "relindex/hall.hpp"
#include "relindex/landau.hpp"

#include <numbers>

using namespace relindex;

namespace {

QuadratureSpec curvature_spec() {
  QuadratureSpec s;
  s.outer_radius = 7.0;
  s.axis_nodes = 32;
  return s;
}

}  // namespace

TEST_SUITE("hall") {

TEST_CASE("switch line integrals equal the shift") {
  for (const Switch& s : {tanh_switch(1.0), erf_switch(0.7), tanh_switch(2.0, 1.5)}) {
    for (double a : {0.0, 1.0, -2.5, 4.0}) {
      const SwitchIntegral r = switch_integral_1d(s, a);
      INFO(s.name() << " a " << a);
      CHECK(r.value == doctest::Approx(a).epsilon(1e-10).scale(1));
      CHECK(r.tail <= 1e-8);
    }
  }
  CHECK_THROWS_AS(switch_integral_1d(tanh_switch(1.0), 1.0, -1.0), Error);
}

TEST_CASE("switch plane integral equals a wedge b") {
  const SwitchPair pair{tanh_switch(1.0), erf_switch(1.3, 0.5)};
  gen::for_all(20, 4, [&](Rng& rng, int) {
    const Vec2 a = gen::point(rng, 3), b = gen::point(rng, 3);
    const SwitchIntegral r = switch_integral_2d(pair, a, b);
    CHECK(r.value == doctest::Approx(wedge(a, b)).scale(1).epsilon(1e-9));
  });
  CHECK(switch_integral_2d(default_switch_pair(), {1, 0}, {0, 1}).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(switch_integral_2d(default_switch_pair(), {1, 1}, {1, 1}).value) <= 1e-12);
}

TEST_CASE("box integral tends to the shift") {
  const Switch s = tanh_switch(1.0);
  CHECK(switch_box_integral(s, 1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(switch_box_integral(s, 1.0, 0.5) < 1.0);
  CHECK(switch_box_integral(s, 0.0, 5.0) == 0.0);
}

TEST_CASE("curvature of a real kernel vanishes") {
  const QuadratureSpec s = curvature_spec();
  for (Vec2 x : {Vec2{0, 0}, Vec2{1.5, -0.5}})
    CHECK(std::abs(curvature_diagonal(real_gaussian_kernel(), default_switch_pair(), x, s)) <= 1e-8);
}

TEST_CASE("curvature: covariance, antisymmetry, gauge independence") {
  const QuadratureSpec s = curvature_spec();
  const IntegralKernel p = landau_kernel(0);
  const SwitchPair pair = default_switch_pair();
  const cplx w0 = curvature_diagonal(p, pair, {0, 0}, s);
  CHECK(std::abs(w0) > 1e-3);

  // Moving x together with the switch centres leaves ω unchanged.
  const SwitchPair moved{tanh_switch(1.0, 3.0), tanh_switch(1.0, 2.0)};
  CHECK(std::abs(curvature_diagonal(p, moved, {3, 2}, s) - w0) <= 1e-8);

  // ω is linear in the differences of Λ₁.
  const Switch l1 = pair.lambda1;
  const Switch negated("negated", [l1](double t) { return -l1(t); },
                       [l1](double t) { return -l1.derivative(t); }, l1.scale());
  CHECK(curvature_diagonal(p, {negated, pair.lambda2}, {0, 0}, s) == -w0);

  const auto theta = [&](Vec2 y) { return 0.8 * pair.lambda1(y.x) - 0.3 * pair.lambda2(y.y); };
  const IntegralKernel conj = gauge_conjugated(p, theta);
  CHECK(std::abs(curvature_diagonal(conj, pair, {0, 0}, s) - w0) <= 1e-8);
  CHECK(std::abs(curvature_diagonal(conj, pair, {0.7, -0.4}, s) -
                 curvature_diagonal(p, pair, {0.7, -0.4}, s)) <= 1e-8);
}

TEST_CASE("closed form and Kubo expression") {
  QuadratureSpec s;
  s.target_tol = 1e-6;
  for (int m = 0; m <= 1; ++m) {
    const TransportEstimate q = hall_transport_closed_form(landau_kernel(m), s);
    INFO("m " << m);
    CHECK(std::abs(q.q - 1.0) <= 2e-2);
    CHECK(q.imag_residual <= s.target_tol);
  }
  CHECK(hall_transport_closed_form(real_gaussian_kernel(), s).q == doctest::Approx(0.0).scale(1));

  s.axis_nodes = 32;
  s.outer_radius = 7.0;
  const TransportEstimate k = kubo_box(landau_kernel(0), 3.0, s, 2);
  CHECK(2 * std::numbers::pi * k.q == doctest::Approx(1.0).epsilon(5e-2));
  CHECK(std::abs(kubo_box(real_gaussian_kernel(), 3.0, s, 2).q) <= 1e-10);
}

TEST_CASE("box transport") {
  QuadratureSpec s;
  s.axis_nodes = 32;
  s.outer_radius = 7.0;
  const std::vector<TransportEstimate> q =
      hall_transport_box(landau_kernel(0), default_switch_pair(), {0.01, 3.0, 6.0}, s);
  REQUIRE(q.size() == 3);
  CHECK(std::abs(q[0].q) <= 1e-2);
  CHECK(q[1].q < q[2].q);
  CHECK(q[2].q == doctest::Approx(1.0).epsilon(2e-2));

  const IntegralKernel general = gauge_conjugated(landau_kernel(0), [](Vec2 x) { return x.y; });
  CHECK_THROWS_AS(hall_transport_box(general, default_switch_pair(), {3.0}, s), Error);
  CHECK_THROWS_AS(hall_transport_box(landau_kernel(0), default_switch_pair(), {3.0, 2.0}, s),
                  Error);
}

}  // TEST_SUITE
