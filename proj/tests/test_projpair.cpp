#include "gen.hpp"

#include "relindex/lattice.hpp"
#include "relindex/projpair.hpp"

using namespace relindex;

TEST_SUITE("projpair") {

TEST_CASE("spectral count on diagonal and equal pairs") {
  const auto p = gen::diagonal_projection({1, 1, 1, 0, 0});
  const auto q = gen::diagonal_projection({1, 1, 0, 0, 0});
  const IndexReport r = index_by_spectral_count(p, q);
  CHECK(r.value == 1.0);
  CHECK(r.residual == 0.0);
  CHECK(r.method == IndexMethod::spectral_count);
  CHECK(index_by_spectral_count(p, p).value == 0.0);
}

TEST_CASE("unitary conjugate of a rank-12 projection in dim 64 has index 0") {
  Rng rng(11);
  const auto p = gen::projection(rng, 64, 12);
  const auto q = p.conjugated(haar_unitary(64, rng));
  CHECK(index_by_spectral_count(p, q, 1e-6).value == 0.0);
}

TEST_CASE("odd trace examples") {
  const auto a = gen::diagonal_projection({1, 0});
  const auto b = gen::diagonal_projection({0, 1});
  CHECK(index_by_odd_trace(a, b, 0).value == doctest::Approx(0.0));
  const auto p = gen::diagonal_projection({1, 1, 1, 0, 0});
  const auto q = gen::diagonal_projection({1, 1, 0, 0, 0});
  const IndexReport r = index_by_odd_trace(p, q, 1);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.trace_power == 1);
  CHECK(r.imag <= 1e-9);
}

TEST_CASE("odd trace stability") {
  Rng rng(5);
  const auto p = gen::projection(rng, 20, 9);
  const auto q = gen::projection(rng, 20, 6);
  for (const auto& [n, tr] : odd_trace_stability(p, q, 4)) {
    INFO("n = " << n);
    CHECK(std::abs(tr - 3.0) <= 1e-8);
  }
  for (const auto& [n, tr] : odd_trace_stability(p, p, 3)) CHECK(tr == 0.0);
  CHECK_THROWS_AS(odd_trace_stability(p, q, 0), Error);
}

TEST_CASE("fedosov trivial cases") {
  Rng rng(3);
  const auto p = gen::projection(rng, 16, 5);
  const UnitaryMatrix id(CMatrix::Identity(16, 16));
  CHECK(std::abs(index_by_fedosov(p, id, 1).value) <= 1e-12);

  const auto d = gen::diagonal_projection({1, 0, 1, 1, 0});
  CVector phases(5);
  for (int k = 0; k < 5; ++k) phases(k) = std::polar(1.0, 0.7 * k + 0.2);
  const UnitaryMatrix u(diagonal_matrix(phases));
  CHECK(std::abs(index_by_fedosov(d, u, 1).value) <= 1e-12);
}

TEST_CASE("fedosov matches the odd trace for a gap projection and a flux tube") {
  const auto h = build_hamiltonian(MagneticLatticeModel::clean(12, 12, {1, 3}));
  const GapProjection gp = gap_projection(h, -1.5);
  const UnitaryMatrix u = lattice_flux_unitary(h, {5.5, 5.5});
  const auto q = gp.projection.conjugated(u.matrix());
  const double via_fedosov = index_by_fedosov(gp.projection, u, 1).value;
  const double via_trace = index_by_odd_trace(gp.projection, q, 1).value;
  CHECK(std::abs(via_fedosov - via_trace) <= 1e-6);
}

TEST_CASE("additivity examples") {
  const auto p = gen::diagonal_projection({1, 1, 1, 1, 1, 0, 0});
  const auto q = gen::diagonal_projection({1, 1, 1, 0, 0, 0, 0});
  const auto r = gen::diagonal_projection({1, 1, 0, 0, 0, 0, 0});
  AdditivityResult a = additivity_check(p, q, r);
  CHECK(a.lhs == 3);
  CHECK(a.rhs == 3);
  a = additivity_check(p, p, p);
  CHECK(a.lhs == 0);
  CHECK(a.rhs == 0);

  Rng rng(48);
  a = additivity_check(gen::projection(rng, 48, 10), gen::projection(rng, 48, 7),
                       gen::projection(rng, 48, 4), 1e-6);
  CHECK(a.lhs == 6);
  CHECK(a.rhs == 6);
}

TEST_CASE("errors") {
  const auto p2 = gen::diagonal_projection({1, 0});
  const auto p3 = gen::diagonal_projection({1, 0, 0});
  CHECK_THROWS_AS(index_by_spectral_count(p2, p3), Error);
  CHECK_THROWS_AS(index_by_odd_trace(p2, p3, 1), Error);
  CHECK_THROWS_AS(index_by_odd_trace(p2, p2, -1), Error);
  CHECK_THROWS_AS(index_by_spectral_count(p2, p2, 1.5), Error);
  CHECK_THROWS_AS(index_by_spectral_count(p2, p2, 0.0), Error);

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(HermitianProjection{bad}, Error);
  bad(0, 0) = 1.0;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(HermitianProjection{bad}, Error);
  CHECK_THROWS_AS(UnitaryMatrix{CMatrix::Constant(2, 2, 1.0)}, Error);
}

TEST_CASE("antisymmetry, complement and conjugation invariance hold exactly") {
  gen::for_all(60, 2024, [](Rng& rng, int) {
    const int d = gen::uniform_int(rng, 2, 40);
    const int kp = gen::uniform_int(rng, 0, d), kq = gen::uniform_int(rng, 0, d);
    const auto p = gen::projection(rng, d, kp);
    const auto q = gen::projection(rng, d, kq);
    const double s = index_by_spectral_count(p, q, 1e-6).value;
    CHECK(s == kp - kq);
    CHECK(index_by_spectral_count(q, p, 1e-6).value == -s);
    CHECK(index_by_spectral_count(p.complement(), q.complement(), 1e-6).value == -s);
    const CMatrix w = haar_unitary(d, rng);
    CHECK(index_by_spectral_count(p.conjugated(w), q.conjugated(w), 1e-6).value == s);
  });
}

TEST_CASE("all methods agree on exact pairs") {
  gen::for_all(40, 77, [](Rng& rng, int) {
    const int d = gen::uniform_int(rng, 2, 32);
    const auto p = gen::projection(rng, d, gen::uniform_int(rng, 0, d));
    const auto q = gen::projection(rng, d, gen::uniform_int(rng, 0, d));
    const double s = index_by_spectral_count(p, q, 1e-6).value;
    for (int n = 0; n <= 3; ++n) CHECK(std::abs(index_by_odd_trace(p, q, n).value - s) <= 1e-8);

    const UnitaryMatrix u(haar_unitary(d, rng));
    const auto uq = p.conjugated(u.matrix());
    const double f = index_by_fedosov(p, u, 1).value;
    CHECK(std::abs(f - index_by_odd_trace(p, uq, 1).value) <= 1e-8);
    CHECK(std::abs(f - index_by_spectral_count(p, uq, 1e-6).value) <= 1e-8);
  });
}

TEST_CASE("(P − Q)² commutes with P") {
  gen::for_all(40, 9, [](Rng& rng, int) {
    const int d = gen::uniform_int(rng, 2, 48);
    const auto p = gen::projection(rng, d, gen::uniform_int(rng, 0, d));
    const auto q = gen::projection(rng, d, gen::uniform_int(rng, 0, d));
    CHECK(square_commutator_residual(p, q) <= 1e-10);
  });
}

TEST_CASE("random projections are uniform-rank idempotents") {
  gen::for_all(20, 4, [](Rng& rng, int) {
    const int d = gen::uniform_int(rng, 1, 30);
    const int k = gen::uniform_int(rng, 0, d);
    const auto p = gen::projection(rng, d, k);
    CHECK(p.idempotency_residual() <= 1e-12);
    CHECK(p.matrix().trace().real() == doctest::Approx(k).epsilon(1e-12));
  });
}

}  // TEST_SUITE
