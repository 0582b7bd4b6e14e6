#include "gen.hpp"

#include "relindex/landau.hpp"
#include "relindex/quadrature.hpp"

#include <numbers>

using namespace relindex;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec area_spec(const Triangle& t) {
  QuadratureSpec s;
  double m = 0.0;
  for (Vec2 v : {t.a, t.b, t.c}) m = std::max({m, std::abs(v.x), std::abs(v.y)});
  s.outer_radius = std::max(10.0, 10.0 * m);
  return s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

const Triangle kUnit{{0, 0}, {1, 0}, {0, 1}};

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("oriented area") {
  CHECK(kUnit.oriented_area_twice() == 1.0);
  gen::for_all(50, 1, [](Rng& rng, int) {
    const Triangle t{gen::point(rng, 3), gen::point(rng, 3), gen::point(rng, 3)};
    const Vec2 s = gen::point(rng, 5);
    const Triangle shifted{t.a + s, t.b + s, t.c + s};
    const Triangle swapped{t.b, t.a, t.c};
    CHECK(shifted.oriented_area_twice() == doctest::Approx(t.oriented_area_twice()).scale(10));
    CHECK(swapped.oriented_area_twice() == doctest::Approx(-t.oriented_area_twice()));
    CHECK(wedge(t.a, t.b) == -wedge(t.b, t.a));
  });
}

TEST_CASE("area formula on the unit triangle") {
  const QuadratureSpec s = area_spec(kUnit);
  const ConnesResult r1 = connes_area(flux_unitary(1), kUnit, s);
  CHECK(rel(r1.value, {0, 2 * kPi}) <= 1e-3);
  CHECK(std::abs(r1.value.real()) <= 1e-3 * std::abs(r1.value));
  CHECK(r1.tail_error <= s.target_tol);
  CHECK(r1.cells > 0);
  const ConnesResult r2 = connes_area(flux_unitary(2), kUnit, s);
  CHECK(rel(r2.value, {0, 4 * kPi}) <= 1e-3);
}

TEST_CASE("degenerate triangle gives zero") {
  const Triangle t{{1, 1}, {1, 1}, {0, 2}};
  CHECK(connes_area(flux_unitary(1), t, QuadratureSpec{}).value == cplx(0, 0));
}

TEST_CASE("area formula: vertex swap antisymmetry and translation invariance") {
  gen::for_all(3, 12, [](Rng& rng, int) {
    Triangle t;
    do {
      t = {gen::point(rng, 2), gen::point(rng, 2), gen::point(rng, 2)};
    } while (std::abs(t.oriented_area_twice()) < 0.5);
    const Triangle swapped{t.b, t.a, t.c};
    const Vec2 s = gen::point(rng, 1);
    const Triangle shifted{t.a + s, t.b + s, t.c + s};
    QuadratureSpec spec = area_spec(shifted);
    spec.outer_radius = std::max(spec.outer_radius, area_spec(t).outer_radius);
    const cplx v = connes_area(flux_unitary(1), t, spec).value;
    const cplx w = connes_area(flux_unitary(1), swapped, spec).value;
    const cplx x = connes_area(flux_unitary(1), shifted, spec).value;
    CHECK(rel(-w, v) <= 1e-6);
    CHECK(rel(x, v) <= 1e-3);
    CHECK(std::abs(v.real()) <= 1e-3 * std::abs(v));
    CHECK(rel(v, {0, 2 * kPi * t.oriented_area_twice()}) <= 1e-3);
  });
}

TEST_CASE("area formula preconditions") {
  QuadratureSpec s;
  s.outer_radius = 5.0;
  CHECK_THROWS_AS(connes_area(flux_unitary(1), kUnit, s), Error);
  s.outer_radius = 10.0;
  s.puncture_radius = 0.2;
  CHECK_THROWS_AS(connes_area(flux_unitary(1), kUnit, s), Error);
  try {
    connes_area(flux_unitary(1), kUnit, s);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

TEST_CASE("4D index integral") {
  const QuadratureSpec s;
  const IntegralKernel p0 = landau_kernel(0);
  CHECK(index_integral_4d(p0, 0, s).value == cplx(0, 0));
  const Integral4D one = index_integral_4d(p0, 1, s);
  CHECK(std::abs(one.value.real() + 1.0) <= 2e-2);
  CHECK(one.imag_residual <= s.target_tol);
  const Integral4D two = index_integral_4d(p0, 2, s);
  CHECK(two.value == 2.0 * one.value);
  CHECK(std::abs(index_integral_4d(real_gaussian_kernel(), 1, s).value) <= 1e-6);
  const IntegralKernel general = gauge_conjugated(p0, [](Vec2 x) { return x.x; });
  CHECK_THROWS_AS(index_integral_4d(general, 1, s), Error);
}

TEST_CASE("6D Monte Carlo") {
  QuadratureSpec s;
  s.mc_samples = 200'000;
  s.target_tol = 1.0;
  const GaugeUnitary constant({}, 0.0, 0.5);
  const MonteCarloEstimate z = index_integral_6d_mc(landau_kernel(0), constant, s);
  CHECK(z.value == cplx(0, 0));

  const MonteCarloEstimate a = index_integral_6d_mc(real_gaussian_kernel(), flux_unitary(1), s);
  const MonteCarloEstimate b = index_integral_6d_mc(real_gaussian_kernel(), flux_unitary(1), s);
  CHECK(a.value == b.value);  // bit-reproducible
  CHECK(a.samples == s.mc_samples);
  CHECK(std::abs(a.value) <= 3.0 * a.std_error + 1e-12);

  s.target_tol = 1e-9;
  CHECK_THROWS_AS(index_integral_6d_mc(landau_kernel(0), flux_unitary(1), s), Error);
}

TEST_CASE("traces from diagonal kernels") {
  const double radius = 5.0;
  const cplx t = trace_from_diagonal(landau_kernel(0), radius);
  CHECK(t.real() == doctest::Approx(radius * radius).epsilon(1e-2));  // area/π

  const IntegralKernel p0 = landau_kernel(0);
  const GaugeUnitary u = flux_unitary(1);
  const IntegralKernel diff = IntegralKernel::general(
      "difference", [p0, u](Vec2 x, Vec2 y) { return p0(x, y) * (1.0 - u(x) / u(y)); }, 0.5, false);
  CHECK(std::abs(trace_from_diagonal(diff, radius)) <= 1e-15);

  const IntegralKernel rank1 = IntegralKernel::general(
      "rank-one",
      [](Vec2 x, Vec2 y) { return cplx(std::exp(-0.5 * (x.norm2() + y.norm2())) / kPi, 0); }, 0.5,
      true);
  CHECK(trace_from_diagonal(rank1, 10.0).real() == doctest::Approx(1.0).epsilon(1e-10));
}

}  // TEST_SUITE
