#include "apkin/transport.hpp"

#include <cmath>
#include <stdexcept>

namespace apkin {

namespace {

constexpr double kWenoEps = 1e-6;

/// WENO3 numerical value at the i+1/2 interface for left-biased (wind > 0)
/// reconstruction from point values q_{i-1}, q_i, q_{i+1}.
double weno3_face(double qm, double q0, double qp) {
  const double p0 = 1.5 * q0 - 0.5 * qm;
  const double p1 = 0.5 * (q0 + qp);
  const double b0 = (q0 - qm) * (q0 - qm);
  const double b1 = (qp - q0) * (qp - q0);
  const double a0 = (1.0 / 3.0) / ((kWenoEps + b0) * (kWenoEps + b0));
  const double a1 = (2.0 / 3.0) / ((kWenoEps + b1) * (kWenoEps + b1));
  return (a0 * p0 + a1 * p1) / (a0 + a1);
}

}  // namespace

SpaceGrid::SpaceGrid(std::size_t nx_) : nx(nx_) {
  if (nx < 5) throw std::invalid_argument("SpaceGrid: nx must be >= 5 (WENO3 stencil)");
  dx = 1.0 / static_cast<double>(nx);
}

Vec weno3_derivative(const Vec& q, double wind_sign, double dx) {
  const std::size_t n = q.size();
  if (n < 5) throw std::invalid_argument("weno3_derivative: need at least 5 cells");
  const auto at = [&q, n](std::ptrdiff_t i) {
    return q[static_cast<std::size_t>((i % static_cast<std::ptrdiff_t>(n) + n) % n)];
  };
  // Numerical flux value at interface i+1/2, upwinded by the wind sign; the
  // wind < 0 case mirrors the stencil about the interface.
  Vec face(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = static_cast<std::ptrdiff_t>(i);
    face[i] = wind_sign >= 0.0 ? weno3_face(at(s - 1), at(s), at(s + 1))
                               : weno3_face(at(s + 2), at(s + 1), at(s));
  }
  Vec deriv(n);
  for (std::size_t i = 0; i < n; ++i) deriv[i] = (face[i] - face[(i + n - 1) % n]) / dx;
  return deriv;
}

DistributionField advection_rhs(const DistributionField& f) {
  DistributionField out(f.nx, f.grid);
  const SpaceGrid sg(f.nx);
  const std::size_t nvv = f.grid.size();
  Vec q(f.nx);
  for (std::size_t idx = 0; idx < nvv; ++idx) {
    const double vx = f.grid.vx(idx);
    if (vx == 0.0) continue;  // zero advection speed
    for (std::size_t i = 0; i < f.nx; ++i) q[i] = f.cell(i)[idx];
    const Vec d = weno3_derivative(q, vx, sg.dx);
    for (std::size_t i = 0; i < f.nx; ++i) out.cell(i)[idx] = -vx * d[i];
  }
  return out;
}

double cfl_dt(const SpaceGrid& grid, double vmax, double cfl) {
  if (!(vmax > 0.0)) throw std::invalid_argument("cfl_dt: vmax must be positive");
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl_dt: cfl must be positive");
  return cfl * grid.dx / vmax;
}

}  // namespace apkin
