#include "relindex.h"

#include "relindex/experiments.hpp"
#include "relindex/gauge.hpp"
#include "relindex/hall.hpp"
#include "relindex/kernel.hpp"
#include "relindex/landau.hpp"
#include "relindex/lattice.hpp"
#include "relindex/linalg.hpp"
#include "relindex/projpair.hpp"
#include "relindex/quadrature.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

using namespace relindex;
namespace ex = relindex::experiments;

struct relindex_projection {
  HermitianProjection p;
};
struct relindex_unitary {
  UnitaryMatrix u;
};
struct relindex_gauge {
  GaugeUnitary u;
};
struct relindex_kernel {
  IntegralKernel k;
};
struct relindex_lattice {
  MagneticLatticeModel model;
  std::optional<LatticeHamiltonian> h;
  std::optional<GapProjection> gp;
};

namespace {

thread_local std::string g_last_error;

relindex_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return RELINDEX_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return RELINDEX_DIMENSION;
    case ErrorCode::precondition: return RELINDEX_PRECONDITION;
    case ErrorCode::convergence: return RELINDEX_CONVERGENCE;
    case ErrorCode::tolerance: return RELINDEX_TOLERANCE;
    case ErrorCode::io: return RELINDEX_IO;
    case ErrorCode::config: return RELINDEX_CONFIG;
  }
  return RELINDEX_INTERNAL;
}

template <class F>
relindex_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RELINDEX_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return RELINDEX_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RELINDEX_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RELINDEX_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

CMatrix read_matrix(const relindex_complex* data, int rows, int cols) {
  require(data != nullptr && rows > 0 && cols > 0, "matrix data missing or empty");
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const auto& z = data[static_cast<std::size_t>(i) * cols + j];
      m(i, j) = cplx(z.re, z.im);
    }
  return m;
}

relindex_complex out_c(cplx z) { return {z.real(), z.imag()}; }
Vec2 in_v(relindex_vec2 v) { return {v.x, v.y}; }

void write_report(const IndexReport& r, relindex_index_report* out) {
  out->value = r.value;
  out->method = static_cast<relindex_method>(r.method);
  out->trace_power = r.trace_power;
  out->residual = r.residual;
  out->imag = r.imag;
}

QuadratureSpec in_spec(const relindex_quadrature_spec* s) {
  QuadratureSpec q;
  if (!s) return q;
  q.outer_radius = s->outer_radius;
  q.puncture_radius = s->puncture_radius;
  q.radial_nodes = s->radial_nodes;
  q.angular_nodes = s->angular_nodes;
  q.axis_nodes = s->axis_nodes;
  q.mc_samples = s->mc_samples;
  q.seed = s->seed;
  q.target_tol = s->target_tol;
  return q;
}

Switch make_switch(relindex_switch_kind kind, double scale) {
  require(scale > 0.0, "switch scale must be > 0");
  if (kind == RELINDEX_SWITCH_TANH) return tanh_switch(scale);
  if (kind == RELINDEX_SWITCH_ERF) return erf_switch(scale);
  throw Error(ErrorCode::invalid_argument, "unknown switch kind");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const relindex_lattice& solved(const relindex_lattice* lat) {
  require(lat != nullptr, "null lattice");
  if (!lat->gp) throw Error(ErrorCode::precondition, "lattice not solved; call relindex_lattice_solve");
  return *lat;
}

}  // namespace

extern "C" {

const char* relindex_version(void) { return "0.1.0"; }

const char* relindex_last_error(void) { return g_last_error.c_str(); }

const char* relindex_status_name(relindex_status s) {
  switch (s) {
    case RELINDEX_OK: return "ok";
    case RELINDEX_INVALID_ARGUMENT: return "invalid argument";
    case RELINDEX_DIMENSION: return "dimension mismatch";
    case RELINDEX_PRECONDITION: return "precondition violated";
    case RELINDEX_CONVERGENCE: return "no convergence";
    case RELINDEX_TOLERANCE: return "tolerance exceeded";
    case RELINDEX_IO: return "io error";
    case RELINDEX_CONFIG: return "config error";
    case RELINDEX_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void relindex_string_free(char* s) { std::free(s); }

relindex_status relindex_projection_create(const relindex_complex* data, int dim, double tol,
                                           relindex_projection** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new relindex_projection{HermitianProjection(read_matrix(data, dim, dim), tol)};
  });
}

relindex_status relindex_projection_random(int dim, int rank, uint64_t seed,
                                           relindex_projection** out) {
  return guard([&] {
    require(out != nullptr && dim > 0 && rank >= 0 && rank <= dim, "need 0 <= rank <= dim");
    Rng rng(seed);
    *out = new relindex_projection{HermitianProjection(random_projection(dim, rank, rng))};
  });
}

relindex_status relindex_projection_complement(const relindex_projection* p,
                                               relindex_projection** out) {
  return guard([&] {
    require(p && out, "null argument");
    *out = new relindex_projection{p->p.complement()};
  });
}

relindex_status relindex_projection_conjugate(const relindex_projection* p,
                                              const relindex_unitary* u,
                                              relindex_projection** out) {
  return guard([&] {
    require(p && u && out, "null argument");
    if (p->p.dim() != u->u.dim()) throw Error(ErrorCode::dimension_mismatch, "dimension mismatch");
    *out = new relindex_projection{p->p.conjugated(u->u.matrix())};
  });
}

int relindex_projection_dim(const relindex_projection* p) {
  return p ? static_cast<int>(p->p.dim()) : 0;
}

relindex_status relindex_projection_matrix(const relindex_projection* p, relindex_complex* data) {
  return guard([&] {
    require(p && data, "null argument");
    const CMatrix& m = p->p.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) data[i * m.cols() + j] = out_c(m(i, j));
  });
}

void relindex_projection_free(relindex_projection* p) { delete p; }

relindex_status relindex_unitary_create(const relindex_complex* data, int dim, double tol,
                                        relindex_unitary** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new relindex_unitary{UnitaryMatrix(read_matrix(data, dim, dim), tol)};
  });
}

relindex_status relindex_unitary_random(int dim, uint64_t seed, relindex_unitary** out) {
  return guard([&] {
    require(out != nullptr && dim > 0, "need dim > 0");
    Rng rng(seed);
    *out = new relindex_unitary{UnitaryMatrix(haar_unitary(dim, rng))};
  });
}

void relindex_unitary_free(relindex_unitary* u) { delete u; }

relindex_status relindex_index_spectral(const relindex_projection* p, const relindex_projection* q,
                                        double eig_tol, relindex_index_report* out) {
  return guard([&] {
    require(p && q && out, "null argument");
    write_report(index_by_spectral_count(p->p, q->p, eig_tol), out);
  });
}

relindex_status relindex_index_odd_trace(const relindex_projection* p, const relindex_projection* q,
                                         int n, relindex_index_report* out) {
  return guard([&] {
    require(p && q && out, "null argument");
    write_report(index_by_odd_trace(p->p, q->p, n), out);
  });
}

relindex_status relindex_index_fedosov(const relindex_projection* p, const relindex_unitary* u,
                                       int n, relindex_index_report* out) {
  return guard([&] {
    require(p && u && out, "null argument");
    write_report(index_by_fedosov(p->p, u->u, n), out);
  });
}

relindex_status relindex_additivity(const relindex_projection* p, const relindex_projection* q,
                                    const relindex_projection* r, double eig_tol, long* lhs,
                                    long* rhs) {
  return guard([&] {
    require(p && q && r && lhs && rhs, "null argument");
    const AdditivityResult a = additivity_check(p->p, q->p, r->p, eig_tol);
    *lhs = a.lhs;
    *rhs = a.rhs;
  });
}

relindex_status relindex_gauge_flux(double alpha, relindex_gauge** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new relindex_gauge{flux_unitary(alpha)};
  });
}

relindex_status relindex_gauge_translate(const relindex_gauge* u, relindex_vec2 t,
                                         relindex_gauge** out) {
  return guard([&] {
    require(u && out, "null argument");
    *out = new relindex_gauge{translate_unitary(u->u, in_v(t))};
  });
}

relindex_status relindex_gauge_product(const relindex_gauge* a, const relindex_gauge* b,
                                       relindex_gauge** out) {
  return guard([&] {
    require(a && b && out, "null argument");
    *out = new relindex_gauge{a->u * b->u};
  });
}

relindex_status relindex_gauge_evaluate(const relindex_gauge* u, relindex_vec2 x,
                                        relindex_complex* out) {
  return guard([&] {
    require(u && out, "null argument");
    *out = out_c(u->u(in_v(x)));
  });
}

int relindex_gauge_winding(const relindex_gauge* u) { return u ? u->u.winding() : 0; }

relindex_status relindex_gauge_numerical_winding(const relindex_gauge* u, relindex_vec2 center,
                                                 double radius, int nodes, int* winding,
                                                 double* residual) {
  return guard([&] {
    require(u && winding, "null argument");
    require(radius > 0.0 && nodes >= 8, "need radius > 0 and at least 8 nodes");
    const WindingEstimate w = numerical_winding(u->u, in_v(center), radius, nodes);
    *winding = w.winding;
    if (residual) *residual = w.residual;
  });
}

void relindex_gauge_free(relindex_gauge* u) { delete u; }

relindex_status relindex_switch_integral_1d(relindex_switch_kind kind, double scale, double a,
                                            double tol, double* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = switch_integral_1d(make_switch(kind, scale), a, tol).value;
  });
}

relindex_status relindex_switch_integral_2d(relindex_switch_kind kind, double scale,
                                            relindex_vec2 a, relindex_vec2 b, double tol,
                                            double* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    const SwitchPair pair{make_switch(kind, scale), make_switch(kind, scale)};
    *out = switch_integral_2d(pair, in_v(a), in_v(b), tol).value;
  });
}

relindex_status relindex_kernel_landau(int m, relindex_kernel** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new relindex_kernel{landau_kernel(m)};
  });
}

relindex_status relindex_kernel_real_gaussian(relindex_kernel** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new relindex_kernel{real_gaussian_kernel()};
  });
}

relindex_status relindex_kernel_evaluate(const relindex_kernel* k, relindex_vec2 x,
                                         relindex_vec2 y, relindex_complex* out) {
  return guard([&] {
    require(k && out, "null argument");
    *out = out_c(k->k(in_v(x), in_v(y)));
  });
}

void relindex_kernel_free(relindex_kernel* k) { delete k; }

void relindex_quadrature_spec_default(relindex_quadrature_spec* spec) {
  if (!spec) return;
  const QuadratureSpec q;
  *spec = {q.outer_radius, q.puncture_radius, q.radial_nodes, q.angular_nodes,
           q.axis_nodes,   q.mc_samples,      q.seed,         q.target_tol};
}

relindex_status relindex_connes_area(const relindex_gauge* u, const relindex_vec2 triangle[3],
                                     const relindex_quadrature_spec* spec, relindex_complex* value,
                                     double* tail_error) {
  return guard([&] {
    require(u && triangle && value, "null argument");
    const Triangle tri{in_v(triangle[0]), in_v(triangle[1]), in_v(triangle[2])};
    const ConnesResult r = connes_area(u->u, tri, in_spec(spec));
    *value = out_c(r.value);
    if (tail_error) *tail_error = r.tail_error;
  });
}

relindex_status relindex_index_integral_4d(const relindex_kernel* k, int winding,
                                           const relindex_quadrature_spec* spec,
                                           relindex_complex* out) {
  return guard([&] {
    require(k && out, "null argument");
    *out = out_c(index_integral_4d(k->k, winding, in_spec(spec)).value);
  });
}

relindex_status relindex_index_integral_6d_mc(const relindex_kernel* k, const relindex_gauge* u,
                                              const relindex_quadrature_spec* spec,
                                              relindex_complex* out, double* std_error) {
  return guard([&] {
    require(k && u && out, "null argument");
    const MonteCarloEstimate e = index_integral_6d_mc(k->k, u->u, in_spec(spec));
    *out = out_c(e.value);
    if (std_error) *std_error = e.std_error;
  });
}

relindex_status relindex_trace_from_diagonal(const relindex_kernel* k, double radius,
                                             relindex_complex* out) {
  return guard([&] {
    require(k && out, "null argument");
    require(radius > 0.0, "radius must be > 0");
    *out = out_c(trace_from_diagonal(k->k, radius));
  });
}

relindex_status relindex_landau_wavefunction(int n, int m, relindex_vec2 z,
                                             relindex_complex* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = out_c(basis_wavefunction(n, m, in_v(z)));
  });
}

relindex_status relindex_flux_matrix(int m, int n_max, relindex_complex* data,
                                     double* pattern_residual) {
  return guard([&] {
    require(data != nullptr, "null output");
    const FluxMatrix f = flux_matrix(m, n_max);
    const auto n = f.matrix.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) data[i * n + j] = out_c(f.matrix(i, j));
    if (pattern_residual) *pattern_residual = f.pattern_residual;
  });
}

relindex_status relindex_shift_index(const relindex_complex* data, int rows, int cols,
                                     double zero_tol, int* shift) {
  return guard([&] {
    require(shift != nullptr, "null output");
    *shift = shift_index(read_matrix(data, rows, cols), zero_tol);
  });
}

relindex_status relindex_truncated_landau_index(int m, const relindex_gauge* u, double radius,
                                                int radial_nodes, int angular_nodes, int n,
                                                relindex_index_report* out) {
  return guard([&] {
    require(u && out, "null argument");
    require(radius > 0.0 && radial_nodes > 0 && angular_nodes > 0, "bad polar grid");
    const PolarGrid grid{radius, radial_nodes, angular_nodes};
    write_report(truncated_landau_index(truncated_projection_pair(m, u->u, grid), n), out);
  });
}

relindex_status relindex_hall_closed_form(const relindex_kernel* k,
                                          const relindex_quadrature_spec* spec, double* q) {
  return guard([&] {
    require(k && q, "null argument");
    *q = hall_transport_closed_form(k->k, in_spec(spec)).q;
  });
}

relindex_status relindex_hall_transport_box(const relindex_kernel* k, double switch_scale,
                                            const double* half_sides, int count,
                                            const relindex_quadrature_spec* spec, double* q) {
  return guard([&] {
    require(k && half_sides && q && count > 0, "null argument or empty box list");
    require(switch_scale > 0.0, "switch scale must be > 0");
    const std::vector<double> ls(half_sides, half_sides + count);
    const auto est = hall_transport_box(k->k, default_switch_pair(switch_scale), ls, in_spec(spec));
    for (int i = 0; i < count; ++i) q[i] = est[i].q;
  });
}

relindex_status relindex_kubo_box(const relindex_kernel* k, double half_side,
                                  const relindex_quadrature_spec* spec, double* sigma) {
  return guard([&] {
    require(k && sigma, "null argument");
    *sigma = kubo_box(k->k, half_side, in_spec(spec)).q;
  });
}

relindex_status relindex_curvature_diagonal(const relindex_kernel* k, double switch_scale,
                                            relindex_vec2 x, const relindex_quadrature_spec* spec,
                                            relindex_complex* out) {
  return guard([&] {
    require(k && out, "null argument");
    require(switch_scale > 0.0, "switch scale must be > 0");
    *out = out_c(curvature_diagonal(k->k, default_switch_pair(switch_scale), in_v(x), in_spec(spec)));
  });
}

relindex_status relindex_lattice_create(int width, int height, long flux_p, long flux_q,
                                        relindex_lattice_gauge gauge, relindex_lattice** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    require(width > 0 && height > 0 && flux_q > 0, "need positive size and flux denominator");
    auto lat = std::make_unique<relindex_lattice>();
    lat->model = MagneticLatticeModel::clean(width, height, {flux_p, flux_q});
    lat->model.gauge = gauge == RELINDEX_GAUGE_SYMMETRIC ? LatticeGauge::symmetric : LatticeGauge::landau;
    *out = lat.release();
  });
}

relindex_status relindex_lattice_set_potential(relindex_lattice* lat, const double* values,
                                               size_t count) {
  return guard([&] {
    require(lat && values, "null argument");
    if (count != static_cast<std::size_t>(lat->model.width) * lat->model.height)
      throw Error(ErrorCode::dimension_mismatch, "potential needs width*height entries");
    lat->model.potential.assign(values, values + count);
    lat->h.reset();
    lat->gp.reset();
  });
}

relindex_status relindex_lattice_set_mask(relindex_lattice* lat, const unsigned char* keep,
                                          size_t count) {
  return guard([&] {
    require(lat && keep, "null argument");
    if (count != static_cast<std::size_t>(lat->model.width) * lat->model.height)
      throw Error(ErrorCode::dimension_mismatch, "mask needs width*height entries");
    lat->model.mask.assign(keep, keep + count);
    lat->h.reset();
    lat->gp.reset();
  });
}

relindex_status relindex_lattice_set_wedge(relindex_lattice* lat, relindex_vec2 apex,
                                           double angle_deg) {
  return guard([&] {
    require(lat != nullptr, "null lattice");
    lat->model.mask = wedge_mask(lat->model.width, lat->model.height, in_v(apex), angle_deg);
    lat->h.reset();
    lat->gp.reset();
  });
}

relindex_status relindex_lattice_solve(relindex_lattice* lat, double fermi, long* rank,
                                       double* gap_width) {
  return guard([&] {
    require(lat != nullptr, "null lattice");
    lat->gp.reset();
    lat->h = build_hamiltonian(lat->model);
    lat->gp = gap_projection(*lat->h, fermi);
    if (rank) *rank = lat->gp->rank;
    if (gap_width) *gap_width = lat->gp->gap_width;
  });
}

long relindex_lattice_sites(const relindex_lattice* lat) {
  if (!lat) return 0;
  if (lat->h) return static_cast<long>(lat->h->sites.size());
  long n = 0;
  for (int i = 0; i < lat->model.width; ++i)
    for (int j = 0; j < lat->model.height; ++j) n += lat->model.kept(i, j);
  return n;
}

relindex_status relindex_lattice_index(const relindex_lattice* lat, relindex_vec2 center, int n,
                                       int margin, int require_deep_center,
                                       relindex_index_report* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    const relindex_lattice& l = solved(lat);
    LatticeIndexOptions o;
    o.n = n;
    o.margin = margin;
    o.require_deep_center = require_deep_center != 0;
    const Vec2 c = in_v(center);
    write_report(lattice_index(*l.gp, *l.h, lattice_flux_unitary(*l.h, c), c, o).report, out);
  });
}

relindex_status relindex_lattice_decay_fit(const relindex_lattice* lat, int margin, double* rate,
                                           double* r_squared) {
  return guard([&] {
    require(rate != nullptr, "null output");
    const relindex_lattice& l = solved(lat);
    const DecayFit f = decay_fit(*l.gp, *l.h, margin);
    *rate = f.rate;
    if (r_squared) *r_squared = f.r_squared;
  });
}

relindex_status relindex_lattice_disorder(const relindex_lattice* lat, double fermi,
                                          double amplitude, const uint64_t* seeds, int count,
                                          relindex_vec2 center, int n, int margin, double* values,
                                          int* rejected) {
  return guard([&] {
    require(lat && seeds && values && rejected && count > 0, "null argument or no seeds");
    DisorderEnsemble ens{lat->model, amplitude, std::vector<std::uint64_t>(seeds, seeds + count)};
    LatticeIndexOptions o;
    o.n = n;
    o.margin = margin;
    const auto draws = disorder_constancy(ens, fermi, in_v(center), o);
    for (int i = 0; i < count; ++i) {
      rejected[i] = draws[i].rejected ? 1 : 0;
      values[i] = draws[i].rejected ? 0.0 : draws[i].index.report.value;
    }
  });
}

void relindex_lattice_free(relindex_lattice* lat) { delete lat; }

int relindex_experiment_count(void) { return static_cast<int>(ex::names().size()); }

const char* relindex_experiment_name(int i) {
  if (i < 0 || i >= relindex_experiment_count()) return nullptr;
  return ex::names()[i].c_str();
}

relindex_status relindex_experiment_default_config(const char* name, char** json) {
  return guard([&] {
    require(name && json, "null argument");
    *json = dup_string(ex::default_config(name).dump(2));
  });
}

relindex_status relindex_config_resolve(const char* name, const char* file_json,
                                        const char* const* assignments, int count,
                                        char** resolved_json) {
  return guard([&] {
    require(name && resolved_json && count >= 0, "null argument");
    ex::Json overrides = ex::Json::object();
    if (file_json) {
      overrides = ex::Json::parse(file_json, nullptr, false, true);
      if (overrides.is_discarded() || !overrides.is_object())
        throw Error(ErrorCode::config, "config file is not a JSON object");
    }
    for (int i = 0; i < count; ++i) {
      require(assignments && assignments[i], "null assignment");
      const std::string a = assignments[i];
      const auto eq = a.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::config, "assignment '" + a + "' is not key=value");
      ex::set_path(overrides, a.substr(0, eq), a.substr(eq + 1));
    }
    *resolved_json = dup_string(ex::resolve_config(name, overrides).dump(2));
  });
}

relindex_status relindex_experiment_run(const char* name, const char* config_json,
                                        const char* out_dir, const char* format, int* all_pass,
                                        char** report_json) {
  return guard([&] {
    require(name && all_pass, "null argument");
    ex::Json overrides = ex::Json::object();
    if (config_json) {
      overrides = ex::Json::parse(config_json, nullptr, false, true);
      if (overrides.is_discarded()) throw Error(ErrorCode::config, "config is not valid JSON");
    }
    const ex::Report rep = ex::run(name, ex::resolve_config(name, overrides));
    if (out_dir) ex::write_report(rep, out_dir, format ? format : "both");
    *all_pass = rep.all_pass ? 1 : 0;
    if (report_json) *report_json = dup_string(ex::to_json(rep).dump(2));
  });
}

}  // extern "C"
