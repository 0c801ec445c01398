#pragma once

/// Test-only reference apparatus for the spectral collision operator: a
/// periodized two-Maxwellian profile and a brute-force (g, omega) quadrature
/// of the truncated 2D Boltzmann integral
///   Q_R(f)(v) = sigma int_{|g|<=R} int_{S^1}
///                 [ f(v - g^-) f(v - g^+) - f(v) f(v - g) ] domega dg,
/// with g^{+-} = (g +- |g| omega)/2. The loss term is omega-independent.

#include <cmath>
#include <functional>
#include <vector>

#include "apkin/phase_space.hpp"

namespace apkin::testref {

struct MaxwellianParams {
  double rho, ux, uy, t;
};

/// Sum of Maxwellians periodized over the [-L, L]^2 box (images |j|_inf <= 2),
/// so the sampled lattice data and the analytic function agree to rounding.
class PeriodizedProfile {
 public:
  PeriodizedProfile(std::vector<MaxwellianParams> parts, double box_halfwidth)
      : parts_(std::move(parts)), l_(box_halfwidth) {}

  double operator()(double vx, double vy) const {
    double s = 0.0;
    for (int j1 = -2; j1 <= 2; ++j1)
      for (int j2 = -2; j2 <= 2; ++j2) {
        const double wx = vx + 2.0 * l_ * j1, wy = vy + 2.0 * l_ * j2;
        for (const auto& p : parts_) {
          const double dx = wx - p.ux, dy = wy - p.uy;
          s += p.rho / (2.0 * M_PI * p.t) * std::exp(-(dx * dx + dy * dy) / (2.0 * p.t));
        }
      }
    return s;
  }

  apkin::Vec sample(const apkin::VelocityGrid& grid) const {
    apkin::Vec f(grid.size());
    for (std::size_t j = 0; j < grid.nv; ++j)
      for (std::size_t k = 0; k < grid.nv; ++k)
        f[j * grid.nv + k] = (*this)(grid.coords[j], grid.coords[k]);
    return f;
  }

 private:
  std::vector<MaxwellianParams> parts_;
  double l_;
};

/// The frozen two-Maxwellian test profile for the operator comparison.
inline PeriodizedProfile two_maxwellian_profile(double box_halfwidth) {
  return PeriodizedProfile({{0.6, 0.35, 0.0, 1.0}, {0.4, -0.35, 0.0, 1.2}}, box_halfwidth);
}

/// Gauss-Legendre nodes/weights on [0, r_hi].
inline void gauss_legendre(std::size_t n, double r_hi, apkin::Vec& x, apkin::Vec& w) {
  x.resize(n);
  w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev initial guess on [-1, 1].
    double t = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[i] = 0.5 * r_hi * (t + 1.0);
    w[i] = r_hi / ((1.0 - t * t) * dp * dp);
  }
}

/// Brute-force quadrature of Q_R(f) at one velocity; n_r radial Gauss-Legendre
/// points, n_phi x n_theta equispaced angles.
inline double brute_force_q(const std::function<double(double, double)>& f, double vx, double vy,
                            double sigma, double radius, std::size_t n_r = 32,
                            std::size_t n_phi = 32, std::size_t n_theta = 32) {
  apkin::Vec r_nodes, r_weights;
  gauss_legendre(n_r, radius, r_nodes, r_weights);
  const double w_phi = 2.0 * M_PI / static_cast<double>(n_phi);
  const double w_theta = 2.0 * M_PI / static_cast<double>(n_theta);
  const double f_v = f(vx, vy);

  double q = 0.0;
  for (std::size_t ir = 0; ir < n_r; ++ir) {
    const double r = r_nodes[ir];
    for (std::size_t ip = 0; ip < n_phi; ++ip) {
      const double phi = w_phi * static_cast<double>(ip);
      const double gx = r * std::cos(phi), gy = r * std::sin(phi);
      double gain = 0.0;
      for (std::size_t it = 0; it < n_theta; ++it) {
        const double theta = w_theta * static_cast<double>(it);
        const double ox = r * std::cos(theta), oy = r * std::sin(theta);  // |g| omega
        gain += f(vx - 0.5 * (gx - ox), vy - 0.5 * (gy - oy)) *
                f(vx - 0.5 * (gx + ox), vy - 0.5 * (gy + oy));
      }
      const double loss = 2.0 * M_PI * f_v * f(vx - gx, vy - gy);
      q += r_weights[ir] * r * (w_theta * gain - loss);
    }
  }
  return sigma * w_phi * q;
}

/// Oracle evaluation on every node of the grid.
inline apkin::Vec brute_force_q_grid(const std::function<double(double, double)>& f,
                                     const apkin::VelocityGrid& grid, double sigma, double radius,
                                     std::size_t n_r = 32, std::size_t n_phi = 32,
                                     std::size_t n_theta = 32) {
  apkin::Vec q(grid.size());
  for (std::size_t j = 0; j < grid.nv; ++j)
    for (std::size_t k = 0; k < grid.nv; ++k)
      q[j * grid.nv + k] =
          brute_force_q(f, grid.coords[j], grid.coords[k], sigma, radius, n_r, n_phi, n_theta);
  return q;
}

}  // namespace apkin::testref
