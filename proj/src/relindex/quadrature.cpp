#include "relindex/quadrature.hpp"

#include "relindex/parallel.hpp"
#include "relindex/rules.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <queue>
#include <limits>
#include <random>
#include <tuple>

namespace relindex {
namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- area integral

struct AreaIntegrand {
  const GaugeUnitary& u;
  Vec2 a, b, c;
  std::array<Vec2, 3> punctures;
  double eps2;

  cplx operator()(Vec2 x) const {
    for (const Vec2& p : punctures)
      if ((x - p).norm2() < eps2) return {0.0, 0.0};
    const cplx ua = u(x - a);
    const cplx ub = u(x - b);
    const cplx uc = u(x - c);
    // |u| = 1, so 1/u = conj(u).
    return (1.0 - ua * std::conj(ub)) * (1.0 - ub * std::conj(uc)) * (1.0 - uc * std::conj(ua));
  }
};

struct Cell {
  double r0, r1, t0, t1;
  cplx value;
  double err;
  bool operator<(const Cell& o) const { return err < o.err; }
};

class PolarCubature {
 public:
  explicit PolarCubature(const AreaIntegrand& f) : f_(f), unit_(gauss_legendre(6, 0.0, 1.0)) {}

  cplx rule(double r0, double r1, double t0, double t1) const {
    cplx acc{0.0, 0.0};
    const double dr = r1 - r0;
    const double dt = t1 - t0;
    for (std::size_t i = 0; i < unit_.size(); ++i) {
      const double r = r0 + dr * unit_.nodes[i];
      cplx inner{0.0, 0.0};
      for (std::size_t k = 0; k < unit_.size(); ++k) {
        const double t = t0 + dt * unit_.nodes[k];
        inner += unit_.weights[k] * f_({r * std::cos(t), r * std::sin(t)});
      }
      acc += unit_.weights[i] * r * inner;
    }
    return acc * dr * dt;
  }

  Cell make(double r0, double r1, double t0, double t1) const {
    Cell cell{r0, r1, t0, t1, {}, 0.0};
    const double rm = 0.5 * (r0 + r1);
    const double tm = 0.5 * (t0 + t1);
    const cplx whole = rule(r0, r1, t0, t1);
    cell.value = rule(r0, rm, t0, tm) + rule(rm, r1, t0, tm) + rule(r0, rm, tm, t1) +
                 rule(rm, r1, tm, t1);
    cell.err = std::abs(whole - cell.value);
    return cell;
  }

 private:
  const AreaIntegrand& f_;
  Rule1D unit_;
};

cplx exterior_rule(const AreaIntegrand& f, double radius, std::size_t s_nodes,
                   std::size_t t_nodes) {
  const Rule1D s = gauss_legendre(s_nodes, 0.0, 1.0);
  const Rule1D t = periodic_trapezoid(t_nodes);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double si = s.nodes[i];
    const double r = radius / si;
    cplx inner{0.0, 0.0};
    for (std::size_t k = 0; k < t.size(); ++k)
      inner += t.weights[k] * f({r * std::cos(t.nodes[k]), r * std::sin(t.nodes[k])});
    acc += s.weights[i] * radius * radius / (si * si * si) * inner;
  }
  return acc;
}

}  // namespace

ConnesResult connes_area(const GaugeUnitary& u, const Triangle& tri, const QuadratureSpec& spec,
                         std::size_t max_cells) {
  ConnesResult out;
  if (tri.a == tri.b || tri.b == tri.c || tri.c == tri.a) return out;  // a factor vanishes

  const Vec2 s = u.singularity();
  const std::array<Vec2, 3> punct{tri.a + s, tri.b + s, tri.c + s};
  double max_coord = 0.0;
  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    max_coord = std::max({max_coord, std::abs(punct[i].x), std::abs(punct[i].y)});
    min_sep = std::min(min_sep, (punct[i] - punct[(i + 1) % 3]).norm());
  }
  const double radius = spec.outer_radius;
  const double eps = spec.puncture_radius;
  if (radius < 10.0 * max_coord)
    throw Error(ErrorCode::precondition, "connes_area: outer radius below 10x largest puncture coordinate");
  if (!(eps >= 0.0) || eps >= 0.1 * min_sep)
    throw Error(ErrorCode::precondition, "connes_area: puncture radius not below 0.1x vertex separation");
  if (!(spec.target_tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "connes_area: target_tol must be positive");

  const AreaIntegrand f{u, tri.a, tri.b, tri.c, punct, eps * eps};
  const PolarCubature cub(f);

  // Radial panels refine geometrically toward the origin, where the
  // punctures sit relative to the disk.
  std::vector<double> r_edges{0.0};
  for (double r = 0.25; r < radius; r *= 2.0) r_edges.push_back(r);
  r_edges.push_back(radius);
  constexpr int kAngular = 24;

  std::priority_queue<Cell> heap;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < r_edges.size(); ++i)
    for (int k = 0; k < kAngular; ++k) {
      Cell c = cub.make(r_edges[i], r_edges[i + 1], 2 * kPi * k / kAngular,
                        2 * kPi * (k + 1) / kAngular);
      total_err += c.err;
      heap.push(c);
    }

  while (total_err > spec.target_tol && heap.size() < max_cells) {
    const Cell c = heap.top();
    heap.pop();
    total_err -= c.err;
    const double rm = 0.5 * (c.r0 + c.r1);
    const double tm = 0.5 * (c.t0 + c.t1);
    for (const Cell& child : {cub.make(c.r0, rm, c.t0, tm), cub.make(rm, c.r1, c.t0, tm),
                              cub.make(c.r0, rm, tm, c.t1), cub.make(rm, c.r1, tm, c.t1)}) {
      total_err += child.err;
      heap.push(child);
    }
  }

  // Sum in a fixed order and recompute the error from scratch; the running
  // total drifts.
  std::vector<Cell> cells;
  cells.reserve(heap.size());
  while (!heap.empty()) {
    cells.push_back(heap.top());
    heap.pop();
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    return std::tie(x.r0, x.t0) < std::tie(y.r0, y.t0);
  });
  out.cells = cells.size();
  for (const Cell& c : cells) {
    out.interior += c.value;
    out.interior_error += c.err;
  }
  if (out.interior_error > spec.target_tol)
    throw Error(ErrorCode::convergence,
                "connes_area: cell budget exhausted at error " + std::to_string(out.interior_error));

  const cplx fine = exterior_rule(f, radius, 48, 512);
  const cplx coarse = exterior_rule(f, radius, 24, 256);
  out.tail = fine;
  out.tail_error = std::abs(fine - coarse);

  int flux = 0;
  for (const auto& fac : u.factors()) flux += std::abs(fac.alpha);
  const double k = (tri.a - tri.b).norm() * (tri.b - tri.c).norm() * (tri.c - tri.a).norm();
  const double gap = radius - max_coord * std::numbers::sqrt2;
  const double half_pi = 0.5 * kPi;
  out.tail_bound = std::pow(flux * half_pi, 3) * k * 2.0 * kPi *
                   (1.0 / gap + max_coord * std::numbers::sqrt2 / (2.0 * gap * gap));

  out.value = out.interior + out.tail;
  if (out.tail_error > spec.target_tol)
    throw Error(ErrorCode::tolerance,
                "connes_area: tail error " + std::to_string(out.tail_error) + " above target");
  return out;
}

// ---------------------------------------------------------------- 4D index integral

Integral4D index_integral_4d(const IntegralKernel& p, int winding, const QuadratureSpec& spec) {
  if (!p.is_covariant())
    throw Error(ErrorCode::precondition, "index_integral_4d needs a covariant kernel");
  if (spec.axis_nodes < 2 || !(spec.outer_radius > 0.0))
    throw Error(ErrorCode::invalid_argument, "index_integral_4d: bad node spec");
  const Rule1D g = gauss_legendre(spec.axis_nodes, -spec.outer_radius, spec.outer_radius);
  const std::size_t n = g.size();
  std::vector<Vec2> pts;
  std::vector<double> w;
  pts.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      pts.push_back({g.nodes[i], g.nodes[j]});
      w.push_back(g.weights[i] * g.weights[j]);
    }
  const Vec2 origin{};
  std::vector<cplx> left(pts.size()), right(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    left[j] = w[j] * p(origin, pts[j]);
    right[j] = w[j] * p(pts[j], origin);
  }

  const cplx integral = chunked_sum(pts.size(), 16, [&](std::size_t begin, std::size_t end) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = begin; j < end; ++j) {
      cplx row{0.0, 0.0};
      const Vec2 x = pts[j];
      for (std::size_t k = 0; k < pts.size(); ++k)
        row += p(x, pts[k]) * (wedge(x, pts[k]) * right[k]);
      acc += left[j] * row;
    }
    return acc;
  });

  Integral4D out;
  out.value = cplx(0.0, -2.0 * kPi * winding) * integral;
  out.imag_residual = std::abs(out.value.imag());
  if (out.imag_residual > spec.target_tol)
    throw Error(ErrorCode::tolerance, "index_integral_4d: imaginary residual " +
                                          std::to_string(out.imag_residual));
  return out;
}

// ---------------------------------------------------------------- 6D Monte Carlo

MonteCarloEstimate index_integral_6d_mc(const IntegralKernel& p, const GaugeUnitary& u,
                                        const QuadratureSpec& spec, double centroid_scale) {
  if (spec.mc_samples < 4) throw Error(ErrorCode::invalid_argument, "need at least 4 samples");
  if (!(p.gaussian_rate() > 0.0))
    throw Error(ErrorCode::precondition, "6D Monte Carlo needs a gaussian kernel envelope");
  if (!(centroid_scale > 0.0)) throw Error(ErrorCode::invalid_argument, "bad centroid scale");

  const double sigma = std::sqrt(0.5 / p.gaussian_rate());
  const double s = centroid_scale;
  const auto n_pairs = static_cast<std::size_t>(spec.mc_samples / 2);
  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t n_chunks = (n_pairs + kChunk - 1) / kChunk;

  struct Stats {
    cplx sum;
    double sumsq = 0.0;
  };
  std::vector<Stats> stats(n_chunks);

  auto integrand = [&](Vec2 x, Vec2 y, Vec2 z) {
    const cplx ux = u(x), uy = u(y), uz = u(z);
    return p(x, y) * (1.0 - ux * std::conj(uy)) * p(y, z) * (1.0 - uy * std::conj(uz)) *
           p(z, x) * (1.0 - uz * std::conj(ux));
  };

  chunked_sum(n_chunks, 1, [&](std::size_t chunk, std::size_t) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, sigma);
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(n_pairs, begin + kChunk);
    Stats st;
    for (std::size_t i = begin; i < end; ++i) {
      const double uu = unit(rng);
      const double rc = s * std::sqrt(1.0 / ((1.0 - uu) * (1.0 - uu)) - 1.0);
      const double tc = 2.0 * kPi * unit(rng);
      const Vec2 c{rc * std::cos(tc), rc * std::sin(tc)};
      const Vec2 d1{gauss(rng), gauss(rng)};
      const Vec2 d2{gauss(rng), gauss(rng)};

      const double qc = std::pow(1.0 + rc * rc / (s * s), -1.5) / (2.0 * kPi * s * s);
      const double qd = std::exp(-(d1.norm2() + d2.norm2()) / (2.0 * sigma * sigma)) /
                        std::pow(2.0 * kPi * sigma * sigma, 2);
      const double weight = 1.0 / (qc * qd);

      const Vec2 shift = (1.0 / 3.0) * (d1 + d2);
      const Vec2 x = c - shift;
      const Vec2 xa = c + shift;
      const cplx val =
          0.5 * weight * (integrand(x, x + d1, x + d2) + integrand(xa, xa - d1, xa - d2));
      st.sum += val;
      st.sumsq += std::norm(val);
    }
    stats[chunk] = st;
    return cplx{};
  });

  cplx sum{};
  double sumsq = 0.0;
  for (const auto& st : stats) {
    sum += st.sum;
    sumsq += st.sumsq;
  }
  const double n = static_cast<double>(n_pairs);
  MonteCarloEstimate out;
  out.value = sum / n;
  const double var = std::max(0.0, (sumsq / n - std::norm(out.value)) * n / (n - 1.0));
  out.std_error = std::sqrt(var / n);
  out.samples = static_cast<std::int64_t>(2 * n_pairs);
  if (out.std_error > spec.target_tol)
    throw Error(ErrorCode::tolerance, "6D Monte Carlo standard error " +
                                          std::to_string(out.std_error) + " above target");
  return out;
}

// ---------------------------------------------------------------- diagonal traces

cplx trace_from_diagonal(const IntegralKernel& k, double radius, int radial_nodes,
                         int angular_nodes) {
  const PolarRule rule = polar_rule(radius, radial_nodes, angular_nodes);
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < rule.points.size(); ++j)
    acc += rule.weights[j] * k(rule.points[j], rule.points[j]);
  return acc;
}

}  // namespace relindex
