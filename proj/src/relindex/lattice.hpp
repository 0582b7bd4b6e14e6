#pragma once

// Tight-binding magnetic lattice: Peierls Hamiltonians on masked open grids,
// Fermi projections, localized index traces, sampled disorder and decay fits.

#include "relindex/projpair.hpp"
#include "relindex/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace relindex {

enum class LatticeGauge { landau, symmetric };

struct Flux {
  long p = 0;
  long q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

/// Open grid of width × height sites at integer coordinates (i, j), hopping −1
/// with Peierls phases for a uniform flux per plaquette.
struct MagneticLatticeModel {
  int width = 0;
  int height = 0;
  Flux flux;
  std::vector<double> potential;  ///< per site, index i*height + j; empty = 0
  std::vector<char> mask;         ///< per site, index i*height + j; empty = all kept
  LatticeGauge gauge = LatticeGauge::landau;

  static MagneticLatticeModel clean(int width, int height, Flux flux);
  std::size_t grid_index(int i, int j) const { return static_cast<std::size_t>(i) * height + j; }
  bool kept(int i, int j) const;
};

struct LatticeHamiltonian {
  CMatrix matrix;
  std::vector<std::pair<int, int>> sites;  ///< matrix index → (i, j)
  std::vector<long> index_of;              ///< grid index → matrix index, −1 if masked
  std::vector<std::string> warnings;
  int width = 0;
  int height = 0;

  long index(int i, int j) const;
  Vec2 position(long k) const {
    return {static_cast<double>(sites[k].first), static_cast<double>(sites[k].second)};
  }
};

/// The hop from site a to site b carries −exp(i∫_a^b A): Landau gauge puts
/// 2πφ·i on vertical hops out of column i; symmetric gauge uses πφ·(r_a ∧ r_b).
/// Masked sites are removed; a disconnected domain adds a warning.
LatticeHamiltonian build_hamiltonian(const MagneticLatticeModel& model);

/// max |H − H†|
double hermiticity_residual(const LatticeHamiltonian& h);

/// Largest deviation of the hop-phase product around an interior plaquette
/// from exp(2πiφ).
double plaquette_flux_residual(const LatticeHamiltonian& h, const Flux& flux);

struct GapProjection {
  HermitianProjection projection;
  double fermi_energy = 0.0;
  /// Distance from fermi_energy to the nearest eigenvalue.
  double gap_width = 0.0;
  RVector eigenvalues;
  CMatrix eigenvectors;
  long rank = 0;
};

/// Projection onto eigenvectors with eigenvalue < fermi. Throws precondition
/// when an eigenvalue lies within min_gap of fermi (no spectral gap there).
GapProjection gap_projection(const LatticeHamiltonian& h, double fermi, double min_gap = 1e-9);

/// Chebyshev distance from each site to the nearest removed or off-grid site.
std::vector<int> boundary_distance(const LatticeHamiltonian& h);

/// Sites with boundary distance > margin.
std::vector<char> bulk_sites(const LatticeHamiltonian& h, int margin);

struct BulkGap {
  double below = 0.0;  ///< highest bulk eigenvalue under fermi (−inf if none)
  double above = 0.0;  ///< lowest bulk eigenvalue over fermi (+inf if none)
  double width() const { return above - below; }
  /// Distance from fermi to the nearer edge.
  double margin(double fermi) const { return std::min(fermi - below, above - fermi); }
};

/// Eigenvalues whose eigenvector weight on the bulk exceeds half the bulk's
/// share of sites count as bulk states; edge states are ignored.
BulkGap bulk_gap(const GapProjection& gp, const std::vector<char>& bulk);

/// Number of groups of bulk eigenvalues separated by more than `separation`.
int count_bulk_clusters(const GapProjection& gp, const std::vector<char>& bulk,
                        double separation);

/// Diagonal u₁(site − center).
UnitaryMatrix lattice_flux_unitary(const LatticeHamiltonian& h, Vec2 center);

struct LatticeIndexOptions {
  int n = 1;
  int margin = 5;
  bool require_deep_center = true;
};

struct LatticeIndexReport {
  IndexReport report;      ///< localized Tr(P − UPU†)^{2n+1}
  double full_trace = 0.0; ///< the same power traced over every site
  double trace_first = 0.0;///< Tr(P − UPU†) over every site
  bool unreliable = false; ///< residual > 0.1
  long bulk_count = 0;
};

/// Tr(P − UPU†)^{2n+1} restricted to bulk sites. On a finite grid the full
/// trace of any power vanishes (both projections have the same rank); the
/// bulk restriction isolates the contribution near the flux tube from the
/// compensating one along the boundary.
LatticeIndexReport lattice_index(const GapProjection& gp, const LatticeHamiltonian& h,
                                 const UnitaryMatrix& u, Vec2 center,
                                 const LatticeIndexOptions& opts = {});

/// Sites at polar angle in [0, angle_deg) about `apex`, excluding the apex.
std::vector<char> wedge_mask(int width, int height, Vec2 apex, double angle_deg);

struct DisorderEnsemble {
  MagneticLatticeModel base;
  double amplitude = 0.0;
  std::vector<std::uint64_t> seeds;
};

struct DisorderDraw {
  std::uint64_t seed = 0;
  bool rejected = false;
  std::string reason;
  double gap_margin = 0.0;  ///< distance from fermi to the nearest bulk eigenvalue
  LatticeIndexReport index;
};

/// Index per seed with i.i.d. uniform [−amplitude, amplitude] on-site
/// disorder added to the base potential. Draws whose bulk gap margin falls
/// below min_gap_margin are rejected and reported instead of indexed.
std::vector<DisorderDraw> disorder_constancy(const DisorderEnsemble& ens, double fermi,
                                             Vec2 center, const LatticeIndexOptions& opts = {},
                                             double min_gap_margin = 0.05);

struct DecayFit {
  double rate = 0.0;  ///< slope of log max|p| against distance
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<int, double>> points;  ///< (distance, log max|p|)
};

/// Least-squares fit of log max|P_xy| against rounded distance d ∈ [3, width/2]
/// over pairs of sites with boundary distance > margin.
DecayFit decay_fit(const GapProjection& gp, const LatticeHamiltonian& h, int margin = 4);

}  // namespace relindex
