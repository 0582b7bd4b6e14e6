#include "gen.hpp"

#include "relindex/lattice.hpp"

#include <algorithm>

using namespace relindex;

namespace {

constexpr Flux kThird{1, 3};

Vec2 grid_center(int size) { return {size / 2 - 0.5, size / 2 - 0.5}; }

struct Clean {
  LatticeHamiltonian h;
  GapProjection gp;
};

Clean clean_system(int size, Flux flux, double fermi,
                   LatticeGauge gauge = LatticeGauge::landau) {
  MagneticLatticeModel m = MagneticLatticeModel::clean(size, size, flux);
  m.gauge = gauge;
  LatticeHamiltonian h = build_hamiltonian(m);
  GapProjection gp = gap_projection(h, fermi);
  return {std::move(h), std::move(gp)};
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("2x2 cluster without flux") {
  const LatticeHamiltonian h = build_hamiltonian(MagneticLatticeModel::clean(2, 2, {0, 1}));
  const GapProjection gp = gap_projection(h, 1.0);
  const std::vector<double> expect{-2, 0, 0, 2};
  for (int k = 0; k < 4; ++k) CHECK(gp.eigenvalues(k) == doctest::Approx(expect[k]).scale(1));
  CHECK(gp.rank == 3);
  CHECK(gp.gap_width == doctest::Approx(1.0));
}

TEST_CASE("hermiticity and plaquette flux") {
  for (LatticeGauge g : {LatticeGauge::landau, LatticeGauge::symmetric}) {
    for (Flux f : {Flux{1, 3}, Flux{2, 7}, Flux{0, 1}}) {
      MagneticLatticeModel m = MagneticLatticeModel::clean(6, 5, f);
      m.gauge = g;
      const LatticeHamiltonian h = build_hamiltonian(m);
      CHECK(hermiticity_residual(h) <= 1e-14);
      CHECK(plaquette_flux_residual(h, f) <= 1e-12);
      CHECK(h.sites.size() == 30);
    }
  }
}

TEST_CASE("Hofstadter spectrum at flux 1/3 has three bulk clusters") {
  const Clean c = clean_system(24, kThird, -1.5);
  CHECK(count_bulk_clusters(c.gp, bulk_sites(c.h, 5), 0.3) == 3);
  CHECK(double(c.gp.rank) / 576.0 == doctest::Approx(1.0 / 3.0).epsilon(0.1));
  const BulkGap gap = bulk_gap(c.gp, bulk_sites(c.h, 5));
  CHECK(gap.below < -1.5);
  CHECK(gap.above > -1.5);
}

TEST_CASE("mask removes sites") {
  MagneticLatticeModel m = MagneticLatticeModel::clean(4, 4, kThird);
  m.mask.assign(16, 1);
  m.mask[m.grid_index(1, 2)] = 0;
  const LatticeHamiltonian h = build_hamiltonian(m);
  CHECK(h.matrix.rows() == 15);
  CHECK(h.index(1, 2) == -1);
  CHECK(h.index(0, 0) >= 0);
  CHECK(h.warnings.empty());

  m.mask.assign(16, 1);
  for (int j = 0; j < 4; ++j) m.mask[m.grid_index(2, j)] = 0;
  CHECK_FALSE(build_hamiltonian(m).warnings.empty());

  m.mask.assign(5, 1);
  CHECK_THROWS_AS(build_hamiltonian(m), Error);
}

TEST_CASE("gap projection edge cases") {
  const LatticeHamiltonian h = build_hamiltonian(MagneticLatticeModel::clean(6, 6, kThird));
  CHECK(gap_projection(h, -100.0).rank == 0);
  const GapProjection all = gap_projection(h, 100.0);
  CHECK(all.rank == 36);
  CHECK((all.projection.matrix() - CMatrix::Identity(36, 36)).cwiseAbs().maxCoeff() <= 1e-12);
  const GapProjection some = gap_projection(h, -1.0);
  CHECK_THROWS_AS(gap_projection(h, some.eigenvalues(3)), Error);
  const CMatrix& p = some.projection.matrix();
  CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("flux unitary on sites") {
  const LatticeHamiltonian h = build_hamiltonian(MagneticLatticeModel::clean(4, 4, kThird));
  const UnitaryMatrix u = lattice_flux_unitary(h, {1.5, 1.5});
  const CMatrix& m = u.matrix();
  CHECK(std::abs(m(h.index(3, 1), h.index(3, 1)) - cplx(3, -1) / std::sqrt(10.0)) <= 1e-14);
  CHECK(std::abs(m(h.index(2, 3), h.index(2, 3)) - cplx(1, 3) / std::sqrt(10.0)) <= 1e-14);
  const UnitaryMatrix east = lattice_flux_unitary(h, {0.5, 2.0});
  CHECK(std::abs(east.matrix()(h.index(1, 2), h.index(1, 2)) - cplx(1, 0)) <= 1e-14);
  CHECK(std::abs(east.matrix()(h.index(0, 2), h.index(0, 2)) - cplx(-1, 0)) <= 1e-14);
  CHECK_THROWS_AS(lattice_flux_unitary(h, {1.0, 1.0}), Error);
}

TEST_CASE("localized index") {
  const int size = 20;
  const Vec2 c = grid_center(size);
  const Clean clean = clean_system(size, kThird, -1.5);
  const LatticeIndexReport r =
      lattice_index(clean.gp, clean.h, lattice_flux_unitary(clean.h, c), c, {1, 5, true});
  CHECK(std::abs(r.report.value - 1.0) <= 0.05);
  CHECK(std::abs(r.trace_first) <= 1e-9);
  CHECK(std::abs(r.full_trace) <= 1e-9);
  CHECK_FALSE(r.unreliable);
  CHECK(r.bulk_count > 0);

  // Gauge choice does not change the index.
  const Clean sym = clean_system(size, kThird, -1.5, LatticeGauge::symmetric);
  const LatticeIndexReport s =
      lattice_index(sym.gp, sym.h, lattice_flux_unitary(sym.h, c), c, {1, 5, true});
  CHECK(s.report.value == doctest::Approx(r.report.value).epsilon(1e-6));

  // No flux: the Fermi sea has no Chern number.
  const Clean zero = clean_system(size, {0, 1}, -3.0123);
  const LatticeIndexReport z =
      lattice_index(zero.gp, zero.h, lattice_flux_unitary(zero.h, c), c, {1, 5, true});
  CHECK(std::abs(z.report.value) <= 1e-6);

  CHECK_THROWS_AS(lattice_index(clean.gp, clean.h, lattice_flux_unitary(clean.h, {2.5, 2.5}),
                                {2.5, 2.5}, {1, 5, true}),
                  Error);
  CHECK_NOTHROW(lattice_index(clean.gp, clean.h, lattice_flux_unitary(clean.h, {2.5, 2.5}),
                              {2.5, 2.5}, {1, 5, false}));
}

TEST_CASE("wedge mask") {
  const std::vector<char> w = wedge_mask(5, 5, {2, 2}, 90.0);
  CHECK(w.size() == 25);
  CHECK(w[2 * 5 + 2] == 0);  // apex
  CHECK(w[4 * 5 + 2] == 1);  // angle 0
  CHECK(w[4 * 5 + 4] == 1);
  CHECK(w[2 * 5 + 4] == 0);  // angle 90 excluded
  CHECK(w[0 * 5 + 2] == 0);
  CHECK(w[0 * 5 + 0] == 0);
  CHECK(std::count(w.begin(), w.end(), 1) == 6);
  CHECK_THROWS_AS(wedge_mask(5, 5, {2, 2}, 0.0), Error);
}

TEST_CASE("disorder") {
  DisorderEnsemble ens;
  ens.base = MagneticLatticeModel::clean(20, 20, kThird);
  ens.seeds = {1, 2};
  const Vec2 c = grid_center(20);
  const Clean clean = clean_system(20, kThird, -1.5);
  const double v0 =
      lattice_index(clean.gp, clean.h, lattice_flux_unitary(clean.h, c), c).report.value;

  ens.amplitude = 0.0;
  for (const DisorderDraw& d : disorder_constancy(ens, -1.5, c)) {
    CHECK_FALSE(d.rejected);
    CHECK(d.index.report.value == doctest::Approx(v0).epsilon(1e-12));
  }
  ens.amplitude = 0.2;
  for (const DisorderDraw& d : disorder_constancy(ens, -1.5, c)) {
    CHECK_FALSE(d.rejected);
    CHECK(d.index.report.rounded() == 1);
  }
  const auto a = disorder_constancy(ens, -1.5, c);
  const auto b = disorder_constancy(ens, -1.5, c);
  CHECK(a[0].index.report.value == b[0].index.report.value);

  ens.amplitude = 3.0;
  for (const DisorderDraw& d : disorder_constancy(ens, -1.5, c)) {
    CHECK(d.rejected);
    CHECK_FALSE(d.reason.empty());
  }
}

TEST_CASE("decay fit") {
  const Clean c = clean_system(24, kThird, -1.5);
  const DecayFit f = decay_fit(c.gp, c.h, 4);
  CHECK(f.rate < 0.0);
  CHECK(f.r_squared >= 0.9);
  CHECK(f.points.size() >= 3);

  const Clean all = clean_system(24, kThird, 100.0);
  CHECK_THROWS_AS(decay_fit(all.gp, all.h, 4), Error);
  const Clean small = clean_system(12, kThird, -1.5);
  CHECK_THROWS_AS(decay_fit(small.gp, small.h, 4), Error);
}

}  // TEST_SUITE
