#include "gen.hpp"

#include "relindex/landau.hpp"
#include "relindex/rules.hpp"

#include <numbers>

using namespace relindex;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("landau") {

TEST_CASE("basis wavefunction examples") {
  CHECK(std::abs(basis_wavefunction(0, 0, {0, 0}) - cplx(1.0 / std::sqrt(kPi), 0)) <= 1e-15);
  CHECK(std::abs(basis_wavefunction(1, 0, {0, 0})) == 0.0);
  const CMatrix g = landau_gram(1, 1, 2);
  CHECK(std::abs(g(2, 2) - 1.0) <= 1e-8);
  CHECK_THROWS_AS(basis_wavefunction(-1, 0, {0, 0}), Error);
  CHECK_THROWS_AS(basis_wavefunction(0, -2, {0, 0}), Error);
}

TEST_CASE("lowest level has the closed form z^n e^{-|z|²/2}/sqrt(pi n!)") {
  gen::for_all(20, 3, [](Rng& rng, int) {
    const int n = gen::uniform_int(rng, 0, 6);
    const Vec2 z = gen::point(rng, 2.5);
    const cplx expect = std::pow(z.as_complex(), n) * std::exp(-0.5 * z.norm2()) /
                        std::sqrt(kPi * std::tgamma(n + 1.0));
    CHECK(std::abs(basis_wavefunction(n, 0, z) - expect) <= 1e-13);
  });
}

TEST_CASE("exact norm is (pi n! m!)^{-1/2}") {
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 4; ++m) {
      const LandauPolynomial p = landau_polynomial(n, m);
      INFO("n " << n << " m " << m);
      CHECK(p.normalization == doctest::Approx(landau_normalization(n, m)).epsilon(1e-12));
      // The (m+1)! variant agrees only at m = 0.
      const double other = 1.0 / std::sqrt(kPi * std::tgamma(n + 1.0) * std::tgamma(m + 2.0));
      if (m == 0) CHECK(other == doctest::Approx(p.normalization));
      else CHECK(std::abs(other - p.normalization) > 1e-3 * p.normalization);
    }
}

TEST_CASE("Gram matrices: orthonormal within a level, orthogonal across levels") {
  for (int m = 0; m <= 2; ++m) {
    const CMatrix g = landau_gram(m, m, 10);
    CHECK((g - CMatrix::Identity(11, 11)).cwiseAbs().maxCoeff() <= 1e-8);
  }
  CHECK(landau_gram(0, 1, 10).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(landau_gram(1, 2, 10).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("level kernels: origin value, diagonal, basis-sum oracle") {
  const IntegralKernel p0 = landau_kernel(0);
  CHECK(std::abs(p0({0, 0}, {0, 0}) - cplx(1.0 / kPi, 0)) <= 1e-15);
  for (int m = 0; m <= 3; ++m) {
    const IntegralKernel p = landau_kernel(m);
    const cplx origin = p({0, 0}, {0, 0});
    Rng rng(m + 1);
    for (int k = 0; k < 20; ++k) {
      const Vec2 x = gen::point(rng, 20);
      CHECK(std::abs(p(x, x) - origin) <= 1e-14);
    }
  }
  // p₁(0, z) = Σ_n ⟨0|n,1⟩⟨n,1|z⟩ with n ≤ 40 at |z| = 1.
  const LandauBasis b(1, 40);
  const IntegralKernel p1 = landau_kernel(1);
  for (double theta : {0.0, 0.7, 2.0, 4.1}) {
    const Vec2 z{std::cos(theta), std::sin(theta)};
    cplx sum{0, 0};
    for (int n = 0; n <= 40; ++n) sum += b(n, {0, 0}) * std::conj(b(n, z));
    CHECK(std::abs(p1({0, 0}, z) - sum) <= 1e-10);
  }
}

TEST_CASE("kernel Hermitian symmetry and magnetic covariance") {
  for (int m = 0; m <= 2; ++m) {
    const IntegralKernel p = landau_kernel(m);
    gen::for_all(40, 100 + m, [&](Rng& rng, int) {
      const Vec2 x = gen::point(rng, 4), y = gen::point(rng, 4);
      CHECK(std::abs(p(x, y) - std::conj(p(y, x))) <= 1e-10);
      const double im = x.y * y.x - x.x * y.y;
      CHECK(std::abs(p(x, y) - std::polar(1.0, im) * p({0, 0}, y - x)) <= 1e-12);
    });
  }
}

TEST_CASE("kernel reproduces itself") {
  const PolarRule rule = polar_rule(12.0, 80, 192);
  for (int m = 0; m <= 1; ++m) {
    const IntegralKernel p = landau_kernel(m);
    gen::for_all(4, 50 + m, [&](Rng& rng, int) {
      const Vec2 x = gen::point(rng, 0.7), y = gen::point(rng, 0.7);
      cplx acc{0, 0};
      for (std::size_t j = 0; j < rule.points.size(); ++j)
        acc += rule.weights[j] * p(x, rule.points[j]) * p(rule.points[j], y);
      CHECK(std::abs(acc - p(x, y)) <= 1e-6);
    });
  }
}

TEST_CASE("flux matrix pattern and the first entry") {
  const FluxMatrix f = flux_matrix(0, 20);
  CHECK(std::abs(f.matrix(0, 0)) <= 1e-8);
  CHECK(std::abs(f.matrix(3, 5)) <= 1e-8);
  // ⟨1,0| z/|z| |0,0⟩ reduces to 2∫ r² e^{−r²} dr = √π/2.
  const cplx c = f.matrix(1, 0);
  CHECK(std::abs(c.imag()) <= 1e-10);
  CHECK(c.real() == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-10));
  CHECK(std::abs(c) <= 1.0);
  for (int m = 0; m <= 2; ++m) {
    const FluxMatrix fm = flux_matrix(m, 20);
    INFO("m " << m);
    CHECK(fm.pattern_residual <= 1e-8);
    CHECK(shift_index(fm.matrix, 1e-8) == -1);
    for (int n = 1; n <= 20; ++n) {
      const double mag = std::abs(fm.matrix(n, n - 1));
      CHECK(mag > 0.0);
      CHECK(mag <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("shift index") {
  CHECK(shift_index(CMatrix::Identity(5, 5), 1e-12) == 0);
  CMatrix s = CMatrix::Zero(6, 6);
  for (int n = 0; n + 1 < 6; ++n) s(n + 1, n) = 1.0;
  CHECK(shift_index(s, 1e-12) == -1);
  CHECK(shift_index(s.transpose(), 1e-12) == 1);
  CHECK_THROWS_AS(shift_index(CMatrix::Zero(4, 4), 1e-12), Error);
  CHECK_THROWS_AS(shift_index(CMatrix::Constant(4, 4, 1.0), 1e-12), Error);
}

TEST_CASE("truncated pair") {
  const PolarGrid grid{6.0, 16, 64};
  const TruncatedPair same = truncated_projection_pair(0, GaugeUnitary({}, 0.0, 0.5), grid);
  CHECK(same.q.matrix() == same.p.matrix());

  // Landau degeneracy: trace per unit area is B/2π = 1/π.
  const double tr = same.p.matrix().trace().real();
  CHECK(tr / (kPi * 36.0) == doctest::Approx(1.0 / kPi).epsilon(0.05));

  CHECK_THROWS_AS(truncated_projection_pair(0, flux_unitary(1), PolarGrid{6.0, 3, 8}), Error);
}

}  // TEST_SUITE
