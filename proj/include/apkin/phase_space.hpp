#pragma once

/// 2D velocity lattice, moments, discrete Maxwellian (with optional exact
/// moment correction), entropy, and distribution-field snapshot IO.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "apkin/linalg.hpp"

namespace apkin {

/// Uniform midpoint lattice on [-vmax, vmax]^2, nv points per direction.
/// Node velocities are v_j = -vmax + (j + 1/2) dv, so the lattice is
/// symmetric under v -> -v. Quadrature weight dv^2 per node.
struct VelocityGrid {
  std::size_t nv = 0;
  double vmax = 0.0;
  double dv = 0.0;
  Vec coords;  ///< per-direction node coordinates, length nv

  VelocityGrid(std::size_t nv_, double vmax_);
  std::size_t size() const { return nv * nv; }
  double weight() const { return dv * dv; }
  /// Node (j, k) has velocity (coords[j], coords[k]) at flat index j*nv + k.
  double vx(std::size_t idx) const { return coords[idx / nv]; }
  double vy(std::size_t idx) const { return coords[idx % nv]; }
};

/// Conserved moments (rho, rho*u, E) at one space cell; d = 2 velocity
/// dimensions, so E = d/2 rho T + rho |u|^2 / 2 and T = (E - rho|u|^2)/(d rho).
struct MomentState {
  double rho = 0.0;
  double mx = 0.0;  ///< rho * u_x
  double my = 0.0;  ///< rho * u_y
  double energy = 0.0;

  double ux() const { return mx / rho; }
  double uy() const { return my / rho; }
  double temperature() const { return (energy - 0.5 * (mx * mx + my * my) / rho) / rho; }
  bool admissible() const { return rho > 0.0 && temperature() > 0.0; }
};

/// f(x_i, v_jk) on nx space cells sharing one velocity grid; cell i occupies
/// values[i * grid.size() .. (i+1) * grid.size()).
struct DistributionField {
  std::size_t nx = 0;
  VelocityGrid grid;
  Vec values;

  DistributionField(std::size_t nx_, VelocityGrid grid_)
      : nx(nx_), grid(std::move(grid_)), values(nx_ * grid.size(), 0.0) {}
  double* cell(std::size_t i) { return values.data() + i * grid.size(); }
  const double* cell(std::size_t i) const { return values.data() + i * grid.size(); }
};

/// Quadrature moments <phi f> with phi = (1, v, |v|^2/2).
MomentState moments(const double* f, const VelocityGrid& grid);
MomentState moments(const Vec& f, const VelocityGrid& grid);

/// Raw sampled Maxwellian rho/(2 pi T) exp(-|v-u|^2 / (2T)).
Vec maxwellian(const MomentState& m, const VelocityGrid& grid);

/// Maxwellian whose *discrete* moments equal m exactly (fixed point on the
/// sampling parameters); used by all solver paths so conservation is exact.
Vec maxwellian_corrected(const MomentState& m, const VelocityGrid& grid, double tol = 1e-14,
                         int max_iter = 100);

/// H(f) = quadrature of f log f; entries below 1e-300 contribute zero.
/// Throws std::domain_error on strictly negative entries.
double entropy(const double* f, const VelocityGrid& grid);
double entropy(const Vec& f, const VelocityGrid& grid);

/// Relative L1 distance of f from the (corrected) Maxwellian with f's moments.
double equilibrium_distance(const double* f, const VelocityGrid& grid);

/// Binary snapshot: header nx, nv (little-endian int64), vmax (double),
/// then nx*nv*nv row-major doubles.
void write_snapshot(const std::string& path, const DistributionField& field);
DistributionField read_snapshot(const std::string& path);

/// CSV of per-cell moments: x,rho,ux,uy,T (header row), x at cell centers of
/// the periodic unit interval.
std::string moments_csv(const DistributionField& field);

}  // namespace apkin
