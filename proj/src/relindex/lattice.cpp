#include "relindex/lattice.hpp"

#include "relindex/linalg.hpp"
#include "relindex/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numbers>
#include <queue>
#include <random>

namespace relindex {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_grid(int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::invalid_argument, "lattice dimensions must be positive");
}

cplx hop_phase(const MagneticLatticeModel& m, int ia, int ja, int ib, int jb) {
  const double phi = m.flux.value();
  if (m.gauge == LatticeGauge::landau) {
    if (ia == ib) return std::polar(1.0, kTwoPi * phi * ia * (jb - ja));
    return {1.0, 0.0};
  }
  const double w = static_cast<double>(ia) * jb - static_cast<double>(ja) * ib;
  return std::polar(1.0, std::numbers::pi * phi * w);
}

}  // namespace

MagneticLatticeModel MagneticLatticeModel::clean(int width, int height, Flux flux) {
  require_grid(width, height);
  MagneticLatticeModel m;
  m.width = width;
  m.height = height;
  m.flux = flux;
  return m;
}

bool MagneticLatticeModel::kept(int i, int j) const {
  if (i < 0 || j < 0 || i >= width || j >= height) return false;
  return mask.empty() || mask[grid_index(i, j)] != 0;
}

long LatticeHamiltonian::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= width || j >= height) return -1;
  return index_of[static_cast<std::size_t>(i) * height + j];
}

LatticeHamiltonian build_hamiltonian(const MagneticLatticeModel& m) {
  require_grid(m.width, m.height);
  if (m.flux.q <= 0 || m.flux.value() < 0.0 || m.flux.value() >= 1.0)
    throw Error(ErrorCode::invalid_argument, "flux per plaquette must be a fraction in [0, 1)");
  const std::size_t cells = static_cast<std::size_t>(m.width) * m.height;
  if (!m.potential.empty() && m.potential.size() != cells)
    throw Error(ErrorCode::dimension_mismatch, "potential size does not match the grid");
  if (!m.mask.empty() && m.mask.size() != cells)
    throw Error(ErrorCode::dimension_mismatch, "mask size does not match the grid");

  LatticeHamiltonian h;
  h.width = m.width;
  h.height = m.height;
  h.index_of.assign(cells, -1);
  for (int i = 0; i < m.width; ++i)
    for (int j = 0; j < m.height; ++j)
      if (m.kept(i, j)) {
        h.index_of[m.grid_index(i, j)] = static_cast<long>(h.sites.size());
        h.sites.emplace_back(i, j);
      }
  const auto n = static_cast<Eigen::Index>(h.sites.size());
  if (n == 0) throw Error(ErrorCode::invalid_argument, "mask removes every site");

  h.matrix = CMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto [i, j] = h.sites[a];
    if (!m.potential.empty()) h.matrix(a, a) += m.potential[m.grid_index(i, j)];
    for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
      const long b = h.index(i + di, j + dj);
      if (b < 0) continue;
      const cplx t = -hop_phase(m, i, j, i + di, j + dj);
      h.matrix(b, a) = t;
      h.matrix(a, b) = std::conj(t);
    }
  }

  // Connected components by breadth-first search over kept neighbours.
  std::vector<char> seen(h.sites.size(), 0);
  int components = 0;
  for (std::size_t s = 0; s < h.sites.size(); ++s) {
    if (seen[s]) continue;
    ++components;
    std::queue<std::size_t> todo;
    todo.push(s);
    seen[s] = 1;
    while (!todo.empty()) {
      const auto [i, j] = h.sites[todo.front()];
      todo.pop();
      for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
        const long b = h.index(i + di, j + dj);
        if (b >= 0 && !seen[b]) {
          seen[b] = 1;
          todo.push(static_cast<std::size_t>(b));
        }
      }
    }
  }
  if (components > 1)
    h.warnings.push_back("disconnected domain: " + std::to_string(components) + " components");
  return h;
}

double hermiticity_residual(const LatticeHamiltonian& h) {
  return max_abs_entry(h.matrix - h.matrix.adjoint());
}

double plaquette_flux_residual(const LatticeHamiltonian& h, const Flux& flux) {
  const cplx expected = std::polar(1.0, kTwoPi * flux.value());
  double worst = 0.0;
  for (const auto& [i, j] : h.sites) {
    const long s00 = h.index(i, j), s10 = h.index(i + 1, j), s11 = h.index(i + 1, j + 1),
               s01 = h.index(i, j + 1);
    if (s10 < 0 || s11 < 0 || s01 < 0) continue;
    // Phase of the hop a → b is −H(b, a); go round counterclockwise.
    const cplx loop = (-h.matrix(s10, s00)) * (-h.matrix(s11, s10)) * (-h.matrix(s01, s11)) *
                      (-h.matrix(s00, s01));
    worst = std::max(worst, std::abs(loop - expected));
  }
  return worst;
}

GapProjection gap_projection(const LatticeHamiltonian& h, double fermi, double min_gap) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::convergence, "Hamiltonian eigensolver failed");
  const RVector& ev = es.eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  long rank = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    gap = std::min(gap, std::abs(ev(k) - fermi));
    rank += ev(k) < fermi;
  }
  if (gap < min_gap)
    throw Error(ErrorCode::precondition,
                "Fermi energy " + std::to_string(fermi) +
                    " is not in a spectral gap (nearest eigenvalue at distance " +
                    std::to_string(gap) + ")");
  const CMatrix occ = es.eigenvectors().leftCols(rank);
  CMatrix p = occ * occ.adjoint();
  p = 0.5 * (p + p.adjoint()).eval();
  return {HermitianProjection(std::move(p), 1e-9), fermi, gap, ev, es.eigenvectors(), rank};
}

std::vector<int> boundary_distance(const LatticeHamiltonian& h) {
  std::vector<int> dist(h.sites.size());
  const int cap = std::max(h.width, h.height) + 1;
  for (std::size_t s = 0; s < h.sites.size(); ++s) {
    const auto [i, j] = h.sites[s];
    int d = 1;
    for (; d <= cap; ++d) {
      bool missing = false;
      for (int a = -d; a <= d && !missing; ++a)
        for (int b = -d; b <= d; ++b) {
          if (std::max(std::abs(a), std::abs(b)) != d) continue;
          if (h.index(i + a, j + b) < 0) {
            missing = true;
            break;
          }
        }
      if (missing) break;
    }
    dist[s] = d;
  }
  return dist;
}

std::vector<char> bulk_sites(const LatticeHamiltonian& h, int margin) {
  const auto dist = boundary_distance(h);
  std::vector<char> bulk(dist.size());
  for (std::size_t s = 0; s < dist.size(); ++s) bulk[s] = dist[s] > margin;
  return bulk;
}

namespace {

std::vector<char> bulk_states(const GapProjection& gp, const std::vector<char>& bulk) {
  const auto n = gp.eigenvectors.rows();
  if (static_cast<std::size_t>(n) != bulk.size())
    throw Error(ErrorCode::dimension_mismatch, "bulk mask does not match the projection");
  double fraction = 0.0;
  for (char b : bulk) fraction += b;
  fraction /= static_cast<double>(bulk.size());
  std::vector<char> is_bulk(static_cast<std::size_t>(gp.eigenvalues.size()));
  for (Eigen::Index k = 0; k < gp.eigenvalues.size(); ++k) {
    double w = 0.0;
    for (Eigen::Index s = 0; s < n; ++s)
      if (bulk[s]) w += std::norm(gp.eigenvectors(s, k));
    is_bulk[k] = w > 0.5 * fraction;
  }
  return is_bulk;
}

}  // namespace

BulkGap bulk_gap(const GapProjection& gp, const std::vector<char>& bulk) {
  const auto is_bulk = bulk_states(gp, bulk);
  BulkGap g{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (Eigen::Index k = 0; k < gp.eigenvalues.size(); ++k) {
    if (!is_bulk[k]) continue;
    const double e = gp.eigenvalues(k);
    if (e < gp.fermi_energy)
      g.below = std::max(g.below, e);
    else
      g.above = std::min(g.above, e);
  }
  return g;
}

int count_bulk_clusters(const GapProjection& gp, const std::vector<char>& bulk,
                        double separation) {
  const auto is_bulk = bulk_states(gp, bulk);
  int clusters = 0;
  double last = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < gp.eigenvalues.size(); ++k) {  // ascending
    if (!is_bulk[k]) continue;
    if (gp.eigenvalues(k) - last > separation) ++clusters;
    last = gp.eigenvalues(k);
  }
  return clusters;
}

UnitaryMatrix lattice_flux_unitary(const LatticeHamiltonian& h, Vec2 center) {
  CVector d(static_cast<Eigen::Index>(h.sites.size()));
  for (std::size_t s = 0; s < h.sites.size(); ++s) {
    const Vec2 rel = h.position(static_cast<long>(s)) - center;
    const double r = rel.norm();
    if (r < 1e-9) throw Error(ErrorCode::invalid_argument, "flux center coincides with a site");
    d(static_cast<Eigen::Index>(s)) = {rel.x / r, rel.y / r};
  }
  return UnitaryMatrix(diagonal_matrix(d), 1e-12);
}

LatticeIndexReport lattice_index(const GapProjection& gp, const LatticeHamiltonian& h,
                                 const UnitaryMatrix& u, Vec2 center,
                                 const LatticeIndexOptions& opts) {
  const auto n = gp.projection.dim();
  if (u.dim() != n || static_cast<std::size_t>(n) != h.sites.size())
    throw Error(ErrorCode::dimension_mismatch, "lattice_index: dimension mismatch");
  if (opts.n < 0) throw Error(ErrorCode::invalid_argument, "trace power index must be >= 0");
  if (opts.require_deep_center) {
    // Distance from the flux center to the nearest removed or off-grid site.
    double nearest = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= h.width; ++i)
      for (int j = -1; j <= h.height; ++j)
        if (h.index(i, j) < 0)
          nearest = std::min(nearest, (Vec2{double(i), double(j)} - center).norm());
    if (nearest < opts.margin)
      throw Error(ErrorCode::precondition, "flux center is closer than " +
                                               std::to_string(opts.margin) +
                                               " sites to the boundary");
  }

  const CMatrix& p = gp.projection.matrix();
  const CMatrix q = u.matrix() * p * u.matrix().adjoint();
  const CMatrix a = p - q;
  const CMatrix a2 = a * a;
  CMatrix even = a2;  // A^{2n}
  for (int k = 1; k < opts.n; ++k) even = even * a2;
  const auto bulk = bulk_sites(h, opts.margin);

  cplx local{0.0, 0.0}, full{0.0, 0.0};
  long count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // (A^{2n+1})_ii = Σ_k (A^{2n})_ik A_ki
    const cplx d = opts.n == 0 ? a(i, i) : cplx(even.row(i).transpose().cwiseProduct(a.col(i)).sum());
    full += d;
    if (bulk[i]) {
      local += d;
      ++count;
    }
  }

  LatticeIndexReport out;
  out.report.value = local.real();
  out.report.imag = std::abs(local.imag());
  out.report.method = IndexMethod::odd_trace;
  out.report.trace_power = opts.n;
  out.report.residual = std::abs(out.report.value - std::round(out.report.value));
  out.full_trace = full.real();
  out.trace_first = a.trace().real();
  out.unreliable = out.report.residual > 0.1;
  out.bulk_count = count;
  return out;
}

std::vector<char> wedge_mask(int width, int height, Vec2 apex, double angle_deg) {
  require_grid(width, height);
  if (!(angle_deg > 0.0) || angle_deg > 360.0)
    throw Error(ErrorCode::invalid_argument, "wedge angle must lie in (0, 360]");
  const double limit = angle_deg * std::numbers::pi / 180.0;
  std::vector<char> mask(static_cast<std::size_t>(width) * height, 0);
  for (int i = 0; i < width; ++i)
    for (int j = 0; j < height; ++j) {
      const Vec2 d = Vec2{double(i), double(j)} - apex;
      if (d.norm() < 1e-12) continue;
      double ang = std::atan2(d.y, d.x);
      if (ang < 0.0) ang += 2.0 * std::numbers::pi;
      mask[static_cast<std::size_t>(i) * height + j] = ang < limit;
    }
  return mask;
}

std::vector<DisorderDraw> disorder_constancy(const DisorderEnsemble& ens, double fermi,
                                             Vec2 center, const LatticeIndexOptions& opts,
                                             double min_gap_margin) {
  if (ens.amplitude < 0.0) throw Error(ErrorCode::invalid_argument, "negative disorder amplitude");
  std::vector<DisorderDraw> draws(ens.seeds.size());
  chunked_sum(ens.seeds.size(), 1, [&](std::size_t k, std::size_t) {
    DisorderDraw& d = draws[k];
    d.seed = ens.seeds[k];
    MagneticLatticeModel m = ens.base;
    const std::size_t cells = static_cast<std::size_t>(m.width) * m.height;
    if (m.potential.empty()) m.potential.assign(cells, 0.0);
    std::mt19937_64 rng(d.seed);
    std::uniform_real_distribution<double> dist(-ens.amplitude, ens.amplitude);
    for (auto& v : m.potential) v += dist(rng);

    const LatticeHamiltonian h = build_hamiltonian(m);
    try {
      const GapProjection gp = gap_projection(h, fermi);
      d.gap_margin = bulk_gap(gp, bulk_sites(h, opts.margin)).margin(fermi);
      if (d.gap_margin < min_gap_margin) {
        d.rejected = true;
        d.reason = "bulk gap closed (margin " + std::to_string(d.gap_margin) + ")";
        return cplx{};
      }
      d.index = lattice_index(gp, h, lattice_flux_unitary(h, center), center, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::precondition) throw;
      d.rejected = true;
      d.reason = e.what();
    }
    return cplx{};
  });
  return draws;
}

DecayFit decay_fit(const GapProjection& gp, const LatticeHamiltonian& h, int margin) {
  if (h.width < 20 || h.height < 20)
    throw Error(ErrorCode::precondition, "decay_fit needs a domain of at least 20x20 sites");
  const auto bulk = bulk_sites(h, margin);
  const int d_max = h.width / 2;
  std::vector<double> best(static_cast<std::size_t>(d_max) + 1, 0.0);
  std::vector<char> seen(best.size(), 0);
  const CMatrix& p = gp.projection.matrix();
  for (std::size_t a = 0; a < h.sites.size(); ++a) {
    if (!bulk[a]) continue;
    for (std::size_t b = 0; b < h.sites.size(); ++b) {
      if (!bulk[b]) continue;
      const long d = std::lround((h.position(long(a)) - h.position(long(b))).norm());
      if (d < 3 || d > d_max) continue;
      seen[d] = 1;
      best[d] = std::max(best[d], std::abs(p(long(a), long(b))));
    }
  }

  DecayFit fit;
  for (int d = 3; d <= d_max; ++d) {
    if (!seen[d]) continue;
    if (best[d] <= 1e-12)
      throw Error(ErrorCode::precondition,
                  "decay_fit: kernel vanishes at distance " + std::to_string(d) +
                      "; nothing to fit (diagonal projection)");
    fit.points.emplace_back(d, std::log(best[d]));
  }
  if (fit.points.size() < 3)
    throw Error(ErrorCode::precondition, "decay_fit: insufficient distance range");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(fit.points.size());
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += double(x) * x;
    sxy += x * y;
  }
  fit.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.rate * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (const auto& [x, y] : fit.points) {
    ss_res += std::pow(y - (fit.intercept + fit.rate * x), 2);
    ss_tot += std::pow(y - mean, 2);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return fit;
}

}  // namespace relindex
