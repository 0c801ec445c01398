#pragma once

/// Spatial transport L(f) = -v_x df/dx on a periodic 1D grid via third-order
/// finite-difference WENO upwinding.

#include "apkin/phase_space.hpp"

namespace apkin {

/// Periodic cells on [0, 1]: dx = 1/nx, centers x_i = (i + 1/2) dx.
struct SpaceGrid {
  std::size_t nx = 0;
  double dx = 0.0;

  explicit SpaceGrid(std::size_t nx_);
  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx; }
};

/// Third-order WENO upwind derivative of a periodic array; wind_sign > 0
/// biases the stencil to the left, wind_sign < 0 to the right.
Vec weno3_derivative(const Vec& q, double wind_sign, double dx);

/// L(f) = -v_x df/dx per velocity node, upwinded by sign(v_x).
DistributionField advection_rhs(const DistributionField& f);

/// Time step dt = cfl * dx / vmax; the default cfl = 1/2 gives dx / (2 vmax).
double cfl_dt(const SpaceGrid& grid, double vmax, double cfl = 0.5);

}  // namespace apkin
