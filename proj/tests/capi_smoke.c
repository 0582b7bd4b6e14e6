/* Plain C consumer of the shared library. */
#include <relindex.h>

#include <math.h>
#include <stdio.h>

static int fail(const char* what) {
  fprintf(stderr, "capi_smoke: %s: %s\n", what, relindex_last_error());
  return 1;
}

int main(void) {
  relindex_gauge* u = NULL;
  relindex_kernel* k = NULL;
  relindex_quadrature_spec spec;
  relindex_complex v;
  relindex_lattice* lat = NULL;
  relindex_index_report r;
  long rank = 0;
  double gap = 0.0;

  printf("relindex %s\n", relindex_version());
  if (relindex_gauge_flux(1.0, &u) != RELINDEX_OK) return fail("gauge");
  if (relindex_kernel_landau(0, &k) != RELINDEX_OK) return fail("kernel");
  relindex_quadrature_spec_default(&spec);
  if (relindex_index_integral_4d(k, 1, &spec, &v) != RELINDEX_OK) return fail("integral");
  if (fabs(v.re + 1.0) > 2e-2) return fail("integral value");

  if (relindex_lattice_create(20, 20, 1, 3, RELINDEX_GAUGE_LANDAU, &lat) != RELINDEX_OK)
    return fail("lattice");
  if (relindex_lattice_solve(lat, -1.5, &rank, &gap) != RELINDEX_OK) return fail("solve");
  {
    relindex_vec2 c = {9.5, 9.5};
    if (relindex_lattice_index(lat, c, 1, 5, 1, &r) != RELINDEX_OK) return fail("index");
  }
  if (lround(r.value) != 1) return fail("index value");
  relindex_gauge_free(u);
  u = NULL;
  if (relindex_gauge_flux(0.25, &u) == RELINDEX_OK || u != NULL)
    return fail("fractional flux accepted");

  relindex_lattice_free(lat);
  relindex_kernel_free(k);
  printf("ok 4d=%.6f lattice=%.6f\n", v.re, r.value);
  return 0;
}
