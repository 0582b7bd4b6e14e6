#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <relindex.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  relindex_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("status names and errors") {
  CHECK(std::string(relindex_status_name(RELINDEX_OK)) == "ok");
  CHECK(std::strlen(relindex_version()) > 0);
  relindex_gauge* g = nullptr;
  CHECK(relindex_gauge_flux(0.5, &g) == RELINDEX_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(relindex_last_error()) > 0);
  CHECK(relindex_gauge_flux(1.0, nullptr) == RELINDEX_INVALID_ARGUMENT);
}

TEST_CASE("projection pairs") {
  // P − Q = diag(1, 0) has one eigenvalue +1.
  const relindex_complex pd[4] = {{1, 0}, {0, 0}, {0, 0}, {0, 0}};
  const relindex_complex qd[4] = {{0, 0}, {0, 0}, {0, 0}, {0, 0}};
  relindex_projection *p = nullptr, *q = nullptr;
  REQUIRE(relindex_projection_create(pd, 2, 1e-10, &p) == RELINDEX_OK);
  REQUIRE(relindex_projection_create(qd, 2, 1e-10, &q) == RELINDEX_OK);
  CHECK(relindex_projection_dim(p) == 2);
  relindex_index_report r{};
  REQUIRE(relindex_index_spectral(p, q, 1e-6, &r) == RELINDEX_OK);
  CHECK(r.value == 1.0);
  REQUIRE(relindex_index_odd_trace(p, q, 2, &r) == RELINDEX_OK);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.trace_power == 2);

  relindex_projection* pc = nullptr;
  REQUIRE(relindex_projection_complement(p, &pc) == RELINDEX_OK);
  relindex_complex m[4];
  REQUIRE(relindex_projection_matrix(pc, m) == RELINDEX_OK);
  CHECK(m[3].re == 1.0);
  CHECK(m[0].re == 0.0);

  relindex_projection* bad = nullptr;
  const relindex_complex half[4] = {{0.5, 0}, {0, 0}, {0, 0}, {0, 0}};
  CHECK(relindex_projection_create(half, 2, 1e-10, &bad) != RELINDEX_OK);

  relindex_projection *a = nullptr, *b = nullptr, *c = nullptr;
  REQUIRE(relindex_projection_random(8, 3, 1, &a) == RELINDEX_OK);
  REQUIRE(relindex_projection_random(8, 5, 2, &b) == RELINDEX_OK);
  REQUIRE(relindex_projection_random(8, 2, 3, &c) == RELINDEX_OK);
  long lhs = 0, rhs = 0;
  REQUIRE(relindex_additivity(a, b, c, 1e-6, &lhs, &rhs) == RELINDEX_OK);
  CHECK(lhs == rhs);
  CHECK(lhs == 1);
  CHECK(relindex_index_spectral(a, q, 1e-6, &r) == RELINDEX_DIMENSION);

  relindex_unitary* u = nullptr;
  REQUIRE(relindex_unitary_random(8, 4, &u) == RELINDEX_OK);
  relindex_projection* au = nullptr;
  REQUIRE(relindex_projection_conjugate(a, u, &au) == RELINDEX_OK);
  REQUIRE(relindex_index_spectral(a, au, 1e-6, &r) == RELINDEX_OK);
  CHECK(r.value == 0.0);

  for (relindex_projection* x : {p, q, pc, a, b, c, au}) relindex_projection_free(x);
  relindex_unitary_free(u);
  relindex_projection_free(nullptr);
}

TEST_CASE("gauge, switches and kernels") {
  relindex_gauge *u = nullptr, *t = nullptr, *prod = nullptr;
  REQUIRE(relindex_gauge_flux(1.0, &u) == RELINDEX_OK);
  relindex_complex v{};
  REQUIRE(relindex_gauge_evaluate(u, {0, 2}, &v) == RELINDEX_OK);
  CHECK(std::abs(v.re) <= 1e-15);
  CHECK(v.im == doctest::Approx(1.0));
  REQUIRE(relindex_gauge_translate(u, {3, 0}, &t) == RELINDEX_OK);
  REQUIRE(relindex_gauge_product(u, t, &prod) == RELINDEX_OK);
  CHECK(relindex_gauge_winding(prod) == 2);
  int w = 0;
  double res = 1;
  REQUIRE(relindex_gauge_numerical_winding(t, {3, 0}, 1.0, 256, &w, &res) == RELINDEX_OK);
  CHECK(w == 1);
  CHECK(res <= 1e-6);

  double s = 0;
  REQUIRE(relindex_switch_integral_1d(RELINDEX_SWITCH_ERF, 1.0, 2.0, 1e-8, &s) == RELINDEX_OK);
  CHECK(s == doctest::Approx(2.0));
  REQUIRE(relindex_switch_integral_2d(RELINDEX_SWITCH_TANH, 1.0, {2, 1}, {1, 3}, 1e-8, &s) ==
          RELINDEX_OK);
  CHECK(s == doctest::Approx(5.0));
  CHECK(relindex_switch_integral_1d(RELINDEX_SWITCH_TANH, 1.0, 1.0, -1.0, &s) == RELINDEX_TOLERANCE);

  relindex_kernel* k = nullptr;
  REQUIRE(relindex_kernel_landau(0, &k) == RELINDEX_OK);
  REQUIRE(relindex_kernel_evaluate(k, {0, 0}, {0, 0}, &v) == RELINDEX_OK);
  CHECK(v.re == doctest::Approx(1.0 / M_PI));
  CHECK(relindex_kernel_landau(-1, &k) == RELINDEX_INVALID_ARGUMENT);

  relindex_quadrature_spec spec;
  relindex_quadrature_spec_default(&spec);
  CHECK(spec.outer_radius == 8.0);
  relindex_complex area{};
  double tail = 0;
  const relindex_vec2 tri[3] = {{0, 0}, {1, 0}, {0, 1}};
  spec.outer_radius = 10.0;
  REQUIRE(relindex_connes_area(u, tri, &spec, &area, &tail) == RELINDEX_OK);
  CHECK(area.im == doctest::Approx(2 * M_PI).epsilon(1e-3));
  spec.outer_radius = 5.0;
  CHECK(relindex_connes_area(u, tri, &spec, &area, &tail) == RELINDEX_PRECONDITION);

  relindex_quadrature_spec_default(&spec);
  REQUIRE(relindex_index_integral_4d(k, 1, &spec, &v) == RELINDEX_OK);
  CHECK(v.re == doctest::Approx(-1.0).epsilon(2e-2));
  double q = 0;
  REQUIRE(relindex_hall_closed_form(k, &spec, &q) == RELINDEX_OK);
  CHECK(q == doctest::Approx(1.0).epsilon(2e-2));

  REQUIRE(relindex_trace_from_diagonal(k, 4.0, &v) == RELINDEX_OK);
  CHECK(v.re == doctest::Approx(16.0).epsilon(1e-2));

  for (relindex_gauge* g : {u, t, prod}) relindex_gauge_free(g);
  relindex_kernel_free(k);
}

TEST_CASE("Landau flux matrix and shift index") {
  std::vector<relindex_complex> f(11 * 11);
  double pattern = 1;
  REQUIRE(relindex_flux_matrix(0, 10, f.data(), &pattern) == RELINDEX_OK);
  CHECK(pattern <= 1e-8);
  CHECK(f[1 * 11 + 0].re == doctest::Approx(std::sqrt(M_PI) / 2));
  int shift = 0;
  REQUIRE(relindex_shift_index(f.data(), 11, 11, 1e-8, &shift) == RELINDEX_OK);
  CHECK(shift == -1);
  relindex_complex z{};
  REQUIRE(relindex_landau_wavefunction(0, 0, {0, 0}, &z) == RELINDEX_OK);
  CHECK(z.re == doctest::Approx(1.0 / std::sqrt(M_PI)));
}

TEST_CASE("lattice") {
  relindex_lattice* lat = nullptr;
  REQUIRE(relindex_lattice_create(20, 20, 1, 3, RELINDEX_GAUGE_LANDAU, &lat) == RELINDEX_OK);
  CHECK(relindex_lattice_sites(lat) == 400);
  relindex_index_report r{};
  CHECK(relindex_lattice_index(lat, {9.5, 9.5}, 1, 5, 1, &r) == RELINDEX_PRECONDITION);
  long rank = 0;
  double gap = 0;
  REQUIRE(relindex_lattice_solve(lat, -1.5, &rank, &gap) == RELINDEX_OK);
  CHECK(rank > 0);
  CHECK(gap > 0);
  REQUIRE(relindex_lattice_index(lat, {9.5, 9.5}, 1, 5, 1, &r) == RELINDEX_OK);
  CHECK(r.value == doctest::Approx(1.0).epsilon(0.05));

  const uint64_t seeds[2] = {1, 2};
  double values[2];
  int rejected[2];
  REQUIRE(relindex_lattice_disorder(lat, -1.5, 0.2, seeds, 2, {9.5, 9.5}, 1, 5, values,
                                    rejected) == RELINDEX_OK);
  CHECK(rejected[0] == 0);
  CHECK(std::lround(values[1]) == 1);

  std::vector<unsigned char> keep(400, 1);
  keep[0] = 0;
  REQUIRE(relindex_lattice_set_mask(lat, keep.data(), keep.size()) == RELINDEX_OK);
  CHECK(relindex_lattice_index(lat, {9.5, 9.5}, 1, 5, 1, &r) == RELINDEX_PRECONDITION);
  CHECK(relindex_lattice_set_mask(lat, keep.data(), 3) == RELINDEX_DIMENSION);
  relindex_lattice_free(lat);
  CHECK(relindex_lattice_create(0, 4, 1, 3, RELINDEX_GAUGE_LANDAU, &lat) != RELINDEX_OK);
}

TEST_CASE("experiments") {
  CHECK(relindex_experiment_count() == 9);
  CHECK(relindex_experiment_name(99) == nullptr);
  char* js = nullptr;
  REQUIRE(relindex_experiment_default_config("switch-check", &js) == RELINDEX_OK);
  CHECK(take(js).find("tol") != std::string::npos);
  CHECK(relindex_experiment_default_config("nope", &js) == RELINDEX_CONFIG);

  const char* sets[] = {"trials=4", "max_dim=8"};
  char* resolved = nullptr;
  REQUIRE(relindex_config_resolve("proj-suite", "{\"seed\": 3}", sets, 2, &resolved) ==
          RELINDEX_OK);
  const std::string cfg = take(resolved);
  CHECK(cfg.find("\"trials\": 4") != std::string::npos);
  CHECK(cfg.find("\"seed\": 3") != std::string::npos);
  const char* badset[] = {"trails=4"};
  CHECK(relindex_config_resolve("proj-suite", nullptr, badset, 1, &resolved) == RELINDEX_CONFIG);
  CHECK(relindex_config_resolve("proj-suite", "{not json", nullptr, 0, &resolved) ==
        RELINDEX_CONFIG);

  int pass = 0;
  char* report = nullptr;
  REQUIRE(relindex_experiment_run("proj-suite", cfg.c_str(), nullptr, "json", &pass, &report) ==
          RELINDEX_OK);
  CHECK(pass == 1);
  CHECK(take(report).find("\"rows\"") != std::string::npos);
}

}  // TEST_SUITE
