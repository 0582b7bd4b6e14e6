#include "relindex/experiments.hpp"

#include "relindex/gauge.hpp"
#include "relindex/hall.hpp"
#include "relindex/landau.hpp"
#include "relindex/lattice.hpp"
#include "relindex/linalg.hpp"
#include "relindex/projpair.hpp"
#include "relindex/quadrature.hpp"
#include "relindex/types.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace relindex::experiments {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects rows; each row's wall time runs from the previous row (or start).
class Recorder {
 public:
  explicit Recorder(std::string experiment) : experiment_(std::move(experiment)) {}

  Row& add(std::string id, Json params, double value, double oracle, double residual,
           double tol) {
    return add_with(std::move(id), std::move(params), value, oracle, residual, tol,
                    residual <= tol);
  }

  Row& add_with(std::string id, Json params, double value, double oracle, double residual,
                double tol, bool pass) {
    Row r;
    r.experiment = experiment_;
    r.id = std::move(id);
    r.parameters = std::move(params);
    r.value = value;
    r.oracle = oracle;
    r.residual = residual;
    r.tolerance = tol;
    r.pass = pass && std::isfinite(value) && std::isfinite(residual);
    r.wall_time_s = seconds_since(mark_);
    mark_ = Clock::now();
    rows_.push_back(std::move(r));
    return rows_.back();
  }

  std::vector<Row> take() { return std::move(rows_); }

 private:
  std::string experiment_;
  std::vector<Row> rows_;
  Clock::time_point mark_ = Clock::now();
};

QuadratureSpec quad_spec(const Json& j) {
  QuadratureSpec s;
  s.outer_radius = j.at("outer_radius").get<double>();
  s.puncture_radius = j.at("puncture_radius").get<double>();
  s.radial_nodes = j.at("radial_nodes").get<int>();
  s.angular_nodes = j.at("angular_nodes").get<int>();
  s.axis_nodes = j.at("axis_nodes").get<int>();
  s.mc_samples = j.at("mc_samples").get<std::int64_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.target_tol = j.at("target_tol").get<double>();
  return s;
}

Json quad_defaults() {
  const QuadratureSpec s;
  return Json{{"outer_radius", s.outer_radius},   {"puncture_radius", s.puncture_radius},
              {"radial_nodes", s.radial_nodes},   {"angular_nodes", s.angular_nodes},
              {"axis_nodes", s.axis_nodes},       {"mc_samples", s.mc_samples},
              {"seed", s.seed},                   {"target_tol", s.target_tol}};
}

Flux flux_from(const Json& j) { return {j.at(0).get<long>(), j.at(1).get<long>()}; }

Vec2 vec_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Vec2 grid_center(int size) { return {size / 2.0 - 0.5, size / 2.0 - 0.5}; }

// ---------------------------------------------------------------- proj-suite

Json proj_suite_defaults() {
  return {{"trials", 200}, {"max_dim", 64}, {"seed", 1},      {"eig_tol", 1e-6},
          {"max_n", 3},    {"tol", 1e-8},   {"commutator_tol", 1e-10}};
}

std::vector<Row> proj_suite(const Json& cfg) {
  const int trials = cfg.at("trials");
  const int max_dim = cfg.at("max_dim");
  const double eig_tol = cfg.at("eig_tol");
  const int max_n = cfg.at("max_n");
  const double tol = cfg.at("tol");
  if (trials < 1 || max_dim < 2 || max_n < 0)
    throw Error(ErrorCode::config, "proj-suite: need trials >= 1, max_dim >= 2, max_n >= 0");
  Rng rng(cfg.at("seed").get<std::uint64_t>());
  Recorder rec("proj-suite");

  long rank_fail = 0, antisym_fail = 0, complement_fail = 0, conj_fail = 0, add_fail = 0;
  double odd_res = 0.0, odd_imag = 0.0, fedosov_res = 0.0, comm_res = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto d = std::uniform_int_distribution<int>(2, max_dim)(rng);
    std::uniform_int_distribution<int> rank_dist(0, d);
    const int kp = rank_dist(rng), kq = rank_dist(rng), kr = rank_dist(rng);
    const HermitianProjection p(random_projection(d, kp, rng));
    const HermitianProjection q(random_projection(d, kq, rng));
    const HermitianProjection r(random_projection(d, kr, rng));

    const long s = index_by_spectral_count(p, q, eig_tol).rounded();
    rank_fail += s != kp - kq;
    antisym_fail += index_by_spectral_count(q, p, eig_tol).rounded() != -s;
    complement_fail += index_by_spectral_count(p.complement(), q.complement(), eig_tol).rounded() != -s;
    const CMatrix w = haar_unitary(d, rng);
    conj_fail += index_by_spectral_count(p.conjugated(w), q.conjugated(w), eig_tol).rounded() != s;

    for (int n = 0; n <= max_n; ++n) {
      const IndexReport o = index_by_odd_trace(p, q, n);
      odd_res = std::max(odd_res, std::abs(o.value - (kp - kq)));
      odd_imag = std::max(odd_imag, o.imag);
    }
    const UnitaryMatrix u(haar_unitary(d, rng));
    const HermitianProjection uq = p.conjugated(u.matrix());
    const double via_trace = index_by_odd_trace(p, uq, 1).value;
    for (int n = 1; n <= std::max(1, max_n); ++n)
      fedosov_res = std::max(fedosov_res, std::abs(index_by_fedosov(p, u, n).value - via_trace));

    const AdditivityResult a = additivity_check(p, q, r, eig_tol);
    add_fail += a.lhs != a.rhs || a.lhs != kp - kr;
    comm_res = std::max(comm_res, square_commutator_residual(p, q));
  }

  const Json params{{"trials", trials}, {"max_dim", max_dim}};
  auto count_row = [&](const char* id, long fails) {
    rec.add(id, params, static_cast<double>(fails), 0.0, static_cast<double>(fails), 0.0);
  };
  count_row("rank_difference", rank_fail);
  count_row("antisymmetry", antisym_fail);
  count_row("complement", complement_fail);
  count_row("conjugation_invariance", conj_fail);
  count_row("additivity", add_fail);
  rec.add("odd_trace_n_independence", Json{{"trials", trials}, {"n_max", max_n}}, odd_res, 0.0,
          std::max(odd_res, odd_imag), tol);
  rec.add("fedosov_agreement", params, fedosov_res, 0.0, fedosov_res, tol);
  rec.add("square_commutator", params, comm_res, 0.0, comm_res,
          cfg.at("commutator_tol").get<double>());
  return rec.take();
}

// ---------------------------------------------------------------- connes-area

Json connes_defaults() {
  Json q = quad_defaults();
  q["outer_radius"] = 0.0;  // 0 = max(10, 10·largest vertex coordinate)
  return {{"trials", 20},      {"seed", 7},           {"box", 3.0},
          {"windings", {1, 2, -1}}, {"min_area", 0.1}, {"min_separation", 0.05},
          {"tol", 1e-3},       {"quadrature", q}};
}

std::vector<Row> connes_area_rows(const Json& cfg) {
  const int trials = cfg.at("trials");
  const double box = cfg.at("box");
  const double min_area = cfg.at("min_area");
  const double min_sep = cfg.at("min_separation");
  const double tol = cfg.at("tol");
  const auto windings = cfg.at("windings").get<std::vector<int>>();
  if (trials < 1 || windings.empty() || !(box > 0.0))
    throw Error(ErrorCode::config, "connes-area: need trials >= 1, windings, box > 0");
  const QuadratureSpec base = quad_spec(cfg.at("quadrature"));
  Rng rng(cfg.at("seed").get<std::uint64_t>());
  std::uniform_real_distribution<double> coord(-box, box);

  Recorder rec("connes-area");
  for (int t = 0; t < trials; ++t) {
    // Nearly degenerate triangles are redrawn: the relative error of a
    // vanishing area is not a meaningful oracle.
    Triangle tri;
    for (;;) {
      tri = {{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
      const double sep = std::min({(tri.a - tri.b).norm(), (tri.b - tri.c).norm(),
                                   (tri.c - tri.a).norm()});
      if (std::abs(tri.oriented_area_twice()) >= min_area && sep >= min_sep) break;
    }
    QuadratureSpec spec = base;
    if (spec.outer_radius <= 0.0) {
      double m = 0.0;
      for (Vec2 v : {tri.a, tri.b, tri.c}) m = std::max({m, std::abs(v.x), std::abs(v.y)});
      spec.outer_radius = std::max(10.0, 10.0 * m);
    }
    const double area = tri.oriented_area_twice();
    double worst = 0.0, first_value = 0.0, max_real = 0.0;
    for (std::size_t k = 0; k < windings.size(); ++k) {
      const cplx v = connes_area(flux_unitary(windings[k]), tri, spec).value;
      const double expect = 2.0 * kPi * windings[k] * area;
      worst = std::max(worst, std::abs(v - cplx(0.0, expect)) / std::abs(expect));
      max_real = std::max(max_real, std::abs(v.real()) / std::abs(v));
      if (k == 0) first_value = v.imag();
    }
    Json params{{"trial", t},
                {"a", {tri.a.x, tri.a.y}},
                {"b", {tri.b.x, tri.b.y}},
                {"c", {tri.c.x, tri.c.y}},
                {"area", area},
                {"windings", windings},
                {"outer_radius", spec.outer_radius},
                {"max_real_fraction", max_real}};
    rec.add("trial_" + std::to_string(t), std::move(params), first_value,
            2.0 * kPi * windings.front() * area, worst, tol);
  }
  return rec.take();
}

// ---------------------------------------------------------------- landau-index

Json landau_defaults() {
  Json mc = quad_defaults();
  mc["target_tol"] = 1e-2;
  return {{"levels", {0, 1, 2}},
          {"n_max", 20},
          {"pattern_tol", 1e-8},
          {"integral_tol", 2e-2},
          {"truncated_tol", 1e-2},
          {"trace_power", 1},
          {"grid", {{"radius", 8.0}, {"radial_nodes", 24}, {"angular_nodes", 96}}},
          {"max_idempotency_residual", 0.1},
          {"surrogate_tol", 1e-6},
          {"quadrature", quad_defaults()},
          {"monte_carlo", {{"enabled", true}, {"levels", {0}}, {"standard_errors", 3.0},
                           {"quadrature", mc}}}};
}

std::vector<Row> landau_index_rows(const Json& cfg) {
  const auto levels = cfg.at("levels").get<std::vector<int>>();
  const int n_max = cfg.at("n_max");
  const double pattern_tol = cfg.at("pattern_tol");
  const double integral_tol = cfg.at("integral_tol");
  const double truncated_tol = cfg.at("truncated_tol");
  const int power = cfg.at("trace_power");
  const QuadratureSpec spec = quad_spec(cfg.at("quadrature"));
  PolarGrid grid;
  grid.radius = cfg.at("grid").at("radius");
  grid.radial_nodes = cfg.at("grid").at("radial_nodes");
  grid.angular_nodes = cfg.at("grid").at("angular_nodes");
  for (int m : levels)
    if (m < 0 || m > 4) throw Error(ErrorCode::config, "landau-index: levels must lie in 0..4");

  Recorder rec("landau-index");
  std::map<int, double> integral_4d;
  for (int m : levels) {
    const FluxMatrix fm = flux_matrix(m, n_max);
    const int shift = shift_index(fm.matrix, pattern_tol);
    rec.add_with("shift_matrix_m" + std::to_string(m),
                 Json{{"m", m}, {"n_max", n_max}, {"quadrature_residual", fm.quadrature_residual}},
                 shift, -1.0, fm.pattern_residual, pattern_tol,
                 shift == -1 && fm.pattern_residual <= pattern_tol);

    const Integral4D v = index_integral_4d(landau_kernel(m), 1, spec);
    integral_4d[m] = v.value.real();
    rec.add("integral_4d_m" + std::to_string(m),
            Json{{"m", m}, {"winding", 1}, {"outer_radius", spec.outer_radius},
                 {"axis_nodes", spec.axis_nodes}, {"imag_residual", v.imag_residual}},
            v.value.real(), -1.0, std::abs(v.value.real() + 1.0), integral_tol);

    const TruncatedPair pair = truncated_projection_pair(
        m, flux_unitary(1), grid, cfg.at("max_idempotency_residual").get<double>());
    const IndexReport t = truncated_landau_index(pair, power);
    rec.add("truncated_pair_m" + std::to_string(m),
            Json{{"m", m},
                 {"n", power},
                 {"radius", grid.radius},
                 {"dim", pair.p.dim()},
                 {"idempotency_residual", pair.p.idempotency_residual()}},
            t.value, -1.0, std::abs(t.value + 1.0), truncated_tol);
  }

  const Integral4D s = index_integral_4d(real_gaussian_kernel(), 1, spec);
  rec.add("integral_4d_real_surrogate", Json{{"kernel", "real-gaussian"}, {"winding", 1}},
          s.value.real(), 0.0, std::abs(s.value), cfg.at("surrogate_tol").get<double>());

  const Json& mc = cfg.at("monte_carlo");
  if (mc.at("enabled").get<bool>()) {
    const QuadratureSpec mspec = quad_spec(mc.at("quadrature"));
    const double k = mc.at("standard_errors");
    for (int m : mc.at("levels").get<std::vector<int>>()) {
      const double oracle =
          integral_4d.count(m) ? -integral_4d[m]
                               : -index_integral_4d(landau_kernel(m), 1, spec).value.real();
      const MonteCarloEstimate e = index_integral_6d_mc(landau_kernel(m), flux_unitary(1), mspec);
      rec.add("monte_carlo_6d_m" + std::to_string(m),
              Json{{"m", m}, {"samples", e.samples}, {"seed", mspec.seed},
                   {"std_error", e.std_error}, {"imag", e.value.imag()}},
              e.value.real(), oracle, std::abs(e.value - cplx(oracle, 0.0)), k * e.std_error);
    }
    const MonteCarloEstimate e = index_integral_6d_mc(real_gaussian_kernel(), flux_unitary(1), mspec);
    rec.add("monte_carlo_6d_real_surrogate",
            Json{{"kernel", "real-gaussian"}, {"samples", e.samples}, {"seed", mspec.seed},
                 {"std_error", e.std_error}, {"imag", e.value.imag()}},
            e.value.real(), 0.0, std::abs(e.value), k * e.std_error);
  }
  return rec.take();
}

// ---------------------------------------------------------------- hall-transport

Json hall_defaults() {
  return {{"levels", {0, 1}},
          {"closed_form_tol", 2e-2},
          {"identity_tol", 1e-6},
          {"L_values", {3.0, 4.5, 6.0}},
          {"box_tol", 0.05},
          {"switch_scale", 1.0},
          {"kubo_L", 6.0},
          {"kubo_tol", 0.05},
          {"kubo_box_nodes", 4},
          {"consistency_tol", 0.01},
          {"shape_scales", {0.5, 2.0}},
          {"shape_L", 6.0},
          {"shape_tol", 0.01},
          {"surrogate_tol", 1e-6},
          {"quadrature", quad_defaults()}};
}

std::vector<Row> hall_transport_rows(const Json& cfg) {
  const auto levels = cfg.at("levels").get<std::vector<int>>();
  const auto half_sides = cfg.at("L_values").get<std::vector<double>>();
  const QuadratureSpec spec = quad_spec(cfg.at("quadrature"));
  const double closed_tol = cfg.at("closed_form_tol");
  const double box_tol = cfg.at("box_tol");
  const double surrogate_tol = cfg.at("surrogate_tol");
  if (half_sides.empty()) throw Error(ErrorCode::config, "hall-transport: empty L_values");

  Recorder rec("hall-transport");
  for (int m : levels) {
    const TransportEstimate q = hall_transport_closed_form(landau_kernel(m), spec);
    rec.add("closed_form_m" + std::to_string(m), Json{{"m", m}, {"imag_residual", q.imag_residual}},
            q.q, 1.0, std::abs(q.q - 1.0), closed_tol);
  }

  const IntegralKernel p0 = landau_kernel(0);
  const double closed0 = hall_transport_closed_form(p0, spec).q;
  const double index0 = index_integral_4d(p0, 1, spec).value.real();
  rec.add("closed_form_vs_index_4d", Json{{"m", 0}, {"index_4d", index0}}, closed0, -index0,
          std::abs(closed0 + index0), cfg.at("identity_tol").get<double>());

  const SwitchPair pair = default_switch_pair(cfg.at("switch_scale").get<double>());
  const auto box = hall_transport_box(p0, pair, half_sides, spec);
  for (const auto& b : box)
    rec.add("box_L" + Json(b.half_side).dump(),
            Json{{"m", 0}, {"L", b.half_side}, {"imag_residual", b.imag_residual}}, b.q, 1.0,
            std::abs(b.q - 1.0), box_tol);
  double worst_step = box.size() > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 1; i < box.size(); ++i)
    worst_step = std::max(worst_step, std::abs(box[i].q - 1.0) - std::abs(box[i - 1].q - 1.0));
  rec.add("box_monotone", Json{{"m", 0}, {"L_values", half_sides}}, worst_step, 0.0,
          std::max(0.0, worst_step), 0.0);

  const double kubo_L = cfg.at("kubo_L");
  const TransportEstimate kubo = kubo_box(p0, kubo_L, spec, cfg.at("kubo_box_nodes").get<int>());
  rec.add("kubo_box", Json{{"m", 0}, {"L", kubo_L}, {"imag_residual", kubo.imag_residual}},
          kubo.q, 1.0 / (2.0 * kPi), std::abs(kubo.q * 2.0 * kPi - 1.0),
          cfg.at("kubo_tol").get<double>());
  const double box_at_kubo = hall_transport_box(p0, pair, {kubo_L}, spec).front().q;
  rec.add("kubo_vs_box", Json{{"m", 0}, {"L", kubo_L}, {"box", box_at_kubo}},
          2.0 * kPi * kubo.q, box_at_kubo,
          std::abs(2.0 * kPi * kubo.q - box_at_kubo) / std::abs(box_at_kubo),
          cfg.at("consistency_tol").get<double>());

  const auto scales = cfg.at("shape_scales").get<std::vector<double>>();
  const double shape_L = cfg.at("shape_L");
  std::vector<double> shape_q;
  for (double s : scales)
    shape_q.push_back(hall_transport_box(p0, default_switch_pair(s), {shape_L}, spec).front().q);
  if (shape_q.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(shape_q.begin(), shape_q.end());
    rec.add("switch_shape", Json{{"m", 0}, {"L", shape_L}, {"scales", scales}, {"q", shape_q}},
            *hi - *lo, 0.0, (*hi - *lo) / std::abs(*hi), cfg.at("shape_tol").get<double>());
  }

  const IntegralKernel real = real_gaussian_kernel();
  const TransportEstimate rc = hall_transport_closed_form(real, spec);
  rec.add("closed_form_real_surrogate", Json{{"kernel", real.name()}}, rc.q, 0.0, std::abs(rc.q),
          surrogate_tol);
  const TransportEstimate rk = kubo_box(real, kubo_L, spec, cfg.at("kubo_box_nodes").get<int>());
  rec.add("kubo_real_surrogate", Json{{"kernel", real.name()}, {"L", kubo_L}}, rk.q, 0.0,
          std::abs(rk.q), surrogate_tol);
  const cplx rcurv = curvature_diagonal(real, pair, {0.0, 0.0}, spec);
  rec.add("curvature_real_surrogate", Json{{"kernel", real.name()}, {"x", {0.0, 0.0}}},
          rcurv.real(), 0.0, std::abs(rcurv), surrogate_tol);
  return rec.take();
}

// ---------------------------------------------------------------- switch-check

Json switch_defaults() {
  return {{"switch", "tanh"},
          {"scale", 1.0},
          {"offsets", {0.0, 2.0, -1.5}},
          {"pairs", {{{1.0, 0.0}, {0.0, 1.0}}, {{2.0, 1.0}, {1.0, 3.0}}, {{1.0, 1.0}, {1.0, 1.0}}}},
          {"tol", 1e-6}};
}

std::vector<Row> switch_check_rows(const Json& cfg) {
  const std::string kind = cfg.at("switch");
  const double scale = cfg.at("scale");
  const double tol = cfg.at("tol");
  if (!(scale > 0.0)) throw Error(ErrorCode::config, "switch-check: scale must be > 0");
  std::function<Switch(double)> make;
  if (kind == "tanh") make = [](double s) { return tanh_switch(s); };
  else if (kind == "erf") make = [](double s) { return erf_switch(s); };
  else throw Error(ErrorCode::config, "switch-check: switch must be tanh or erf");
  const Switch s = make(scale);

  Recorder rec("switch-check");
  for (double a : cfg.at("offsets").get<std::vector<double>>()) {
    const SwitchIntegral v = switch_integral_1d(s, a, tol);
    rec.add("integral_1d_a" + Json(a).dump(),
            Json{{"switch", kind}, {"scale", scale}, {"a", a}, {"tail", v.tail}}, v.value, a,
            std::abs(v.value - a), tol);
  }
  const SwitchPair pair{make(scale), make(scale)};
  int k = 0;
  for (const auto& ab : cfg.at("pairs")) {
    const Vec2 a = vec_from(ab.at(0)), b = vec_from(ab.at(1));
    const SwitchIntegral v = switch_integral_2d(pair, a, b, tol);
    rec.add("integral_2d_" + std::to_string(k++),
            Json{{"switch", kind}, {"scale", scale}, {"a", {a.x, a.y}}, {"b", {b.x, b.y}},
                 {"tail", v.tail}},
            v.value, wedge(a, b), std::abs(v.value - wedge(a, b)), tol);
  }
  return rec.take();
}

// ---------------------------------------------------------------- lattice

Json lattice_common() {
  return {{"flux", {1, 3}}, {"fermi", -1.5}, {"margin", 5}, {"trace_power", 1}};
}

struct LatticeRun {
  LatticeHamiltonian h;
  GapProjection gp;
};

LatticeRun solve(const MagneticLatticeModel& model, double fermi) {
  LatticeHamiltonian h = build_hamiltonian(model);
  GapProjection gp = gap_projection(h, fermi);
  return {std::move(h), std::move(gp)};
}

LatticeIndexReport index_at(const LatticeRun& r, Vec2 center, const LatticeIndexOptions& opts) {
  return lattice_index(r.gp, r.h, lattice_flux_unitary(r.h, center), center, opts);
}

Json lattice_defaults() {
  Json j = lattice_common();
  j.update({{"sizes", {20, 24, 28}},
            {"powers", {1, 2}},
            {"base_size", 24},
            {"spread_tol", 5e-2},
            {"translation", {2.0, 0.0}},
            {"translation_tol", 5e-2},
            {"gauge_tol", 1e-6},
            {"time_reversal_tol", 1e-6},
            {"trace_tol", 1e-9},
            {"monotone_noise", 1e-2}});
  return j;
}

std::vector<Row> lattice_index_rows(const Json& cfg) {
  const Flux flux = flux_from(cfg.at("flux"));
  const double fermi = cfg.at("fermi");
  const auto sizes = cfg.at("sizes").get<std::vector<int>>();
  const auto powers = cfg.at("powers").get<std::vector<int>>();
  const int base = cfg.at("base_size");
  const double spread_tol = cfg.at("spread_tol");
  LatticeIndexOptions opts;
  opts.margin = cfg.at("margin");
  opts.n = cfg.at("trace_power");
  if (sizes.empty() || powers.empty())
    throw Error(ErrorCode::config, "lattice-index: sizes and powers must be non-empty");

  Recorder rec("lattice-index");
  std::vector<double> values;
  std::vector<double> size_residual;
  double base_value = 0.0;
  for (int size : sizes) {
    const LatticeRun run = solve(MagneticLatticeModel::clean(size, size, flux), fermi);
    double worst = 0.0;
    for (int n : powers) {
      LatticeIndexOptions o = opts;
      o.n = n;
      const LatticeIndexReport r = index_at(run, grid_center(size), o);
      values.push_back(r.report.value);
      worst = std::max(worst, r.report.residual);
      if (size == base && n == opts.n) base_value = r.report.value;
      rec.add("size" + std::to_string(size) + "_n" + std::to_string(n),
              Json{{"size", size}, {"n", n}, {"flux", {flux.p, flux.q}}, {"fermi", fermi},
                   {"rank", run.gp.rank}, {"bulk_sites", r.bulk_count},
                   {"unreliable", r.unreliable}},
              r.report.value, std::round(r.report.value), r.report.residual, spread_tol);
    }
    size_residual.push_back(worst);
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::set<long> rounded;
  for (double v : values) rounded.insert(std::lround(v));
  rec.add_with("spread", Json{{"sizes", sizes}, {"powers", powers}}, *hi - *lo,
               static_cast<double>(*rounded.begin()), *hi - *lo, spread_tol,
               *hi - *lo <= spread_tol && rounded.size() == 1);
  double worst_increase = 0.0;
  for (std::size_t i = 1; i < size_residual.size(); ++i)
    worst_increase = std::max(worst_increase, size_residual[i] - size_residual[i - 1]);
  rec.add("residual_monotone", Json{{"sizes", sizes}, {"residuals", size_residual}},
          worst_increase, 0.0, std::max(0.0, worst_increase),
          cfg.at("monotone_noise").get<double>());

  const LatticeRun run = solve(MagneticLatticeModel::clean(base, base, flux), fermi);
  if (std::find(sizes.begin(), sizes.end(), base) == sizes.end())
    base_value = index_at(run, grid_center(base), opts).report.value;
  const Vec2 shifted = grid_center(base) + vec_from(cfg.at("translation"));
  const LatticeIndexReport tr = index_at(run, shifted, opts);
  rec.add("translation", Json{{"size", base}, {"center", {shifted.x, shifted.y}}},
          tr.report.value, base_value, std::abs(tr.report.value - base_value),
          cfg.at("translation_tol").get<double>());
  const LatticeIndexReport plain = index_at(run, grid_center(base), opts);
  rec.add("trace_first_power", Json{{"size", base}}, plain.trace_first, 0.0,
          std::abs(plain.trace_first), cfg.at("trace_tol").get<double>());

  MagneticLatticeModel sym = MagneticLatticeModel::clean(base, base, flux);
  sym.gauge = LatticeGauge::symmetric;
  const LatticeIndexReport gs = index_at(solve(sym, fermi), grid_center(base), opts);
  rec.add("symmetric_gauge", Json{{"size", base}}, gs.report.value, base_value,
          std::abs(gs.report.value - base_value), cfg.at("gauge_tol").get<double>());

  const LatticeIndexReport z =
      index_at(solve(MagneticLatticeModel::clean(base, base, {0, 1}), fermi), grid_center(base), opts);
  rec.add("flux_zero", Json{{"size", base}, {"flux", {0, 1}}}, z.report.value, 0.0,
          std::abs(z.report.value), cfg.at("time_reversal_tol").get<double>());
  return rec.take();
}

Json wedge_defaults() {
  Json j = lattice_common();
  j.update({{"size", 24},
            {"angle_deg", 90.0},
            {"half_plane_cut", 4},
            {"half_plane_shift", {2.0, 0.0}},
            {"tol", 5e-2}});
  return j;
}

std::vector<Row> wedge_rows(const Json& cfg) {
  const Flux flux = flux_from(cfg.at("flux"));
  const double fermi = cfg.at("fermi");
  const int size = cfg.at("size");
  const double angle = cfg.at("angle_deg");
  const double tol = cfg.at("tol");
  LatticeIndexOptions opts;
  opts.margin = cfg.at("margin");
  opts.n = cfg.at("trace_power");
  const Vec2 center = grid_center(size);

  Recorder rec("wedge");
  // The flux tube sits at the apex, outside the wedge, so the deep-center
  // precondition cannot hold by construction.
  MagneticLatticeModel w = MagneticLatticeModel::clean(size, size, flux);
  w.mask = wedge_mask(size, size, center, angle);
  LatticeIndexOptions wopts = opts;
  wopts.require_deep_center = false;
  const LatticeIndexReport wr = index_at(solve(w, fermi), center, wopts);
  rec.add("wedge", Json{{"size", size}, {"angle_deg", angle}, {"apex", {center.x, center.y}},
                        {"bulk_sites", wr.bulk_count}},
          wr.report.value, 0.0, std::abs(wr.report.value), tol);

  const LatticeIndexReport full =
      index_at(solve(MagneticLatticeModel::clean(size, size, flux), fermi), center, opts);
  const double full_int = std::round(full.report.value);
  rec.add_with("full_plane_control", Json{{"size", size}}, full.report.value, full_int,
               full.report.residual, tol, full.report.residual <= tol && full_int != 0.0);

  const int cut = cfg.at("half_plane_cut");
  MagneticLatticeModel hp = MagneticLatticeModel::clean(size, size, flux);
  hp.mask.assign(static_cast<std::size_t>(size) * size, 0);
  for (int i = cut; i < size; ++i)
    for (int j = 0; j < size; ++j) hp.mask[hp.grid_index(i, j)] = 1;
  const Vec2 hc = center + vec_from(cfg.at("half_plane_shift"));
  const LatticeIndexReport hr = index_at(solve(hp, fermi), hc, opts);
  rec.add("half_plane", Json{{"size", size}, {"cut", cut}, {"center", {hc.x, hc.y}}},
          hr.report.value, full.report.value, std::abs(hr.report.value - full.report.value), tol);
  return rec.take();
}

Json disorder_defaults() {
  Json j = lattice_common();
  j.update({{"size", 24},
            {"amplitude_factor", 0.2},
            {"seeds", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
            {"min_gap_margin", 0.05},
            {"closing_amplitude", 3.0},
            {"closing_seeds", {1, 2, 3}}});
  return j;
}

std::vector<Row> disorder_rows(const Json& cfg) {
  const Flux flux = flux_from(cfg.at("flux"));
  const double fermi = cfg.at("fermi");
  const int size = cfg.at("size");
  const double min_margin = cfg.at("min_gap_margin");
  LatticeIndexOptions opts;
  opts.margin = cfg.at("margin");
  opts.n = cfg.at("trace_power");
  const Vec2 center = grid_center(size);

  Recorder rec("disorder");
  const MagneticLatticeModel clean = MagneticLatticeModel::clean(size, size, flux);
  const LatticeRun run = solve(clean, fermi);
  const BulkGap gap = bulk_gap(run.gp, bulk_sites(run.h, opts.margin));
  const double clean_value = index_at(run, center, opts).report.value;
  const double target = std::round(clean_value);
  const double amplitude = cfg.at("amplitude_factor").get<double>() * gap.width();

  DisorderEnsemble ens{clean, amplitude, cfg.at("seeds").get<std::vector<std::uint64_t>>()};
  std::set<long> seen;
  bool any_rejected = false;
  for (const DisorderDraw& d : disorder_constancy(ens, fermi, center, opts, min_margin)) {
    Json params{{"seed", d.seed}, {"amplitude", amplitude}, {"bulk_gap_width", gap.width()},
                {"gap_margin", d.gap_margin}};
    if (d.rejected) {
      any_rejected = true;
      params["rejected"] = d.reason;
      rec.add_with("seed_" + std::to_string(d.seed), std::move(params), 0.0, target, 1.0, 0.0,
                   false);
      continue;
    }
    const double v = d.index.report.value;
    seen.insert(std::lround(v));
    rec.add("seed_" + std::to_string(d.seed), std::move(params), v, target,
            std::abs(std::round(v) - target), 0.0);
  }
  rec.add_with("constancy", Json{{"amplitude", amplitude}, {"seeds", ens.seeds.size()}},
               static_cast<double>(seen.size()), 1.0,
               std::abs(static_cast<double>(seen.size()) - 1.0), 0.0,
               seen.size() == 1 && !any_rejected);

  DisorderEnsemble zero{clean, 0.0, {ens.seeds.empty() ? 1 : ens.seeds.front()}};
  const DisorderDraw z = disorder_constancy(zero, fermi, center, opts, min_margin).front();
  const double zv = z.rejected ? 0.0 : z.index.report.value;
  rec.add_with("zero_amplitude", Json{{"amplitude", 0.0}}, zv, clean_value,
               std::abs(zv - clean_value), 1e-12, !z.rejected && std::abs(zv - clean_value) <= 1e-12);

  DisorderEnsemble closing{clean, cfg.at("closing_amplitude").get<double>(),
                           cfg.at("closing_seeds").get<std::vector<std::uint64_t>>()};
  long rejected = 0;
  for (const DisorderDraw& d : disorder_constancy(closing, fermi, center, opts, min_margin))
    rejected += d.rejected;
  const auto want = static_cast<double>(closing.seeds.size());
  rec.add("gap_closing_rejected", Json{{"amplitude", closing.amplitude}, {"seeds", closing.seeds}},
          static_cast<double>(rejected), want, std::abs(want - rejected), 0.0);
  return rec.take();
}

Json decay_defaults() {
  Json j = lattice_common();
  j.erase("margin");
  j.erase("trace_power");
  j.update({{"size", 24},
            {"margin", 4},
            {"min_r_squared", 0.9},
            {"compare_flux", {1, 5}},
            {"wide_fermi", -2.0},
            {"narrow_fermi", -0.6}});
  return j;
}

std::vector<Row> decay_rows(const Json& cfg) {
  const Flux flux = flux_from(cfg.at("flux"));
  const int size = cfg.at("size");
  const int margin = cfg.at("margin");
  const double min_r2 = cfg.at("min_r_squared");

  Recorder rec("decay-fit");
  const LatticeRun run = solve(MagneticLatticeModel::clean(size, size, flux), cfg.at("fermi"));
  const DecayFit f = decay_fit(run.gp, run.h, margin);
  Json pts = Json::array();
  for (const auto& [d, lg] : f.points) pts.push_back({d, lg});
  rec.add_with("rate", Json{{"size", size}, {"flux", {flux.p, flux.q}}, {"points", pts}}, f.rate,
               0.0, std::max(0.0, f.rate), 0.0, f.rate < 0.0);
  rec.add("r_squared", Json{{"size", size}}, f.r_squared, 1.0, 1.0 - f.r_squared, 1.0 - min_r2);

  const Flux cf = flux_from(cfg.at("compare_flux"));
  const double wide_e = cfg.at("wide_fermi"), narrow_e = cfg.at("narrow_fermi");
  const LatticeRun crun = solve(MagneticLatticeModel::clean(size, size, cf), wide_e);
  const double wide = decay_fit(crun.gp, crun.h, margin).rate;
  const GapProjection narrow_gp = gap_projection(crun.h, narrow_e);
  const double narrow = decay_fit(narrow_gp, crun.h, margin).rate;
  const double diff = std::abs(wide) - std::abs(narrow);
  rec.add_with("wider_gap_steeper",
               Json{{"flux", {cf.p, cf.q}}, {"wide_fermi", wide_e}, {"narrow_fermi", narrow_e},
                    {"wide_rate", wide}, {"narrow_rate", narrow}},
               diff, 0.0, std::max(0.0, -diff), 0.0, diff > 0.0);

  // Fermi energy above the spectrum: the projection is the identity and
  // the fit must refuse.
  const double top = run.gp.eigenvalues.maxCoeff() + 1.0;
  bool refused = false;
  try {
    decay_fit(gap_projection(run.h, top), run.h, margin);
  } catch (const Error&) {
    refused = true;
  }
  rec.add("identity_refused", Json{{"fermi", top}}, refused ? 1.0 : 0.0, 1.0,
          refused ? 0.0 : 1.0, 0.0);
  return rec.take();
}

// ---------------------------------------------------------------- registry

struct Entry {
  std::function<Json()> defaults;
  std::function<std::vector<Row>(const Json&)> run;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"proj-suite", {proj_suite_defaults, proj_suite}},
      {"connes-area", {connes_defaults, connes_area_rows}},
      {"landau-index", {landau_defaults, landau_index_rows}},
      {"hall-transport", {hall_defaults, hall_transport_rows}},
      {"switch-check", {switch_defaults, switch_check_rows}},
      {"lattice-index", {lattice_defaults, lattice_index_rows}},
      {"wedge", {wedge_defaults, wedge_rows}},
      {"disorder", {disorder_defaults, disorder_rows}},
      {"decay-fit", {decay_defaults, decay_rows}},
  };
  return r;
}

const Entry& entry(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::config, "unknown experiment '" + name + "'");
  return it->second;
}

void merge_checked(Json& into, const Json& patch, const std::string& where) {
  if (!patch.is_object()) throw Error(ErrorCode::config, "config " + where + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!into.contains(key)) throw Error(ErrorCode::config, "unknown config key '" + path + "'");
    Json& slot = into[key];
    if (slot.is_object())
      merge_checked(slot, value, path);
    else if (slot.is_number() != value.is_number() || slot.is_array() != value.is_array() ||
             slot.is_boolean() != value.is_boolean() || slot.is_string() != value.is_string())
      throw Error(ErrorCode::config, "config key '" + path + "' has the wrong type");
    else
      slot = value;
  }
}

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"proj-suite",    "connes-area",   "landau-index",
                                          "hall-transport", "switch-check", "lattice-index",
                                          "wedge",          "disorder",      "decay-fit"};
  return n;
}

bool known(const std::string& name) { return registry().count(name) != 0; }

Json default_config(const std::string& name) { return entry(name).defaults(); }

Json resolve_config(const std::string& name, const Json& overrides) {
  Json cfg = default_config(name);
  if (!overrides.is_null()) merge_checked(cfg, overrides, "");
  return cfg;
}

void set_path(Json& tree, const std::string& dotted, const std::string& value) {
  if (dotted.empty()) throw Error(ErrorCode::config, "empty config key");
  Json parsed = Json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  Json* node = &tree;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object() && !node->is_null())
      throw Error(ErrorCode::config, "config key '" + dotted + "' passes through a value");
    node = &(*node)[parts[i]];
  }
  if (!node->is_object() && !node->is_null())
    throw Error(ErrorCode::config, "config key '" + dotted + "' passes through a value");
  (*node)[parts.back()] = std::move(parsed);
}

Report run(const std::string& name, const Json& config) {
  const Entry& e = entry(name);
  const auto t0 = Clock::now();
  Report rep;
  rep.experiment = name;
  rep.config = config;
  try {
    rep.rows = e.run(config);
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::config, std::string("config: ") + ex.what());
  }
  rep.all_pass = !rep.rows.empty() &&
                 std::all_of(rep.rows.begin(), rep.rows.end(), [](const Row& r) { return r.pass; });
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

Json to_json(const Report& report) {
  Json rows = Json::array();
  for (const Row& r : report.rows)
    rows.push_back({{"experiment", r.experiment},
                    {"id", r.id},
                    {"parameters", r.parameters},
                    {"value", r.value},
                    {"oracle", r.oracle},
                    {"residual", r.residual},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass},
                    {"wall_time_s", r.wall_time_s}});
  return {{"schema_version", kSchemaVersion},
          {"experiment", report.experiment},
          {"config", report.config},
          {"rows", rows},
          {"all_pass", report.all_pass},
          {"wall_time_s", report.wall_time_s}};
}

std::string to_csv(const Report& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const Row& r : report.rows) {
    out += r.experiment + "," + r.id + "," + fmt_double(r.value) + "," + fmt_double(r.oracle) +
           "," + fmt_double(r.residual) + "," + fmt_double(r.tolerance) + "," +
           (r.pass ? "true" : "false") + "," + fmt_double(r.wall_time_s) + "," +
           csv_quote(r.parameters.dump()) + "\n";
  }
  return out;
}

void write_report(const Report& report, const std::string& dir, const std::string& format) {
  const bool json = format == "json" || format == "both";
  const bool csv = format == "csv" || format == "both";
  if (!json && !csv) throw Error(ErrorCode::config, "format must be csv, json or both");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir + ": " + ec.message());
  auto put = [&](const std::string& file, const std::string& text) {
    const auto path = std::filesystem::path(dir) / file;
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::io, "cannot write " + path.string());
  };
  if (json) put("report.json", to_json(report).dump(2) + "\n");
  if (csv) put("report.csv", to_csv(report));
  put("config.echo", report.config.dump(2) + "\n");
}

}  // namespace relindex::experiments
