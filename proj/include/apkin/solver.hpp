#pragma once

/// IMEX time steppers: standard (implicit collision) and penalized (implicit
/// BGK penalizer, explicit deviation) steps for the transport-coupled
/// equation, space-homogeneous variants, and the explicit-RK Euler-limit
/// reference on the moment system.

#include <functional>

#include "apkin/collision.hpp"
#include "apkin/tableau.hpp"
#include "apkin/transport.hpp"

namespace apkin {

enum class StepMode {
  StandardBGK,
  PenalizedBoltzmann,
  HomogeneousBGK,
  HomogeneousPenalized,
  HomogeneousLinearized,
};

struct StepConfig {
  ImexTableau tableau;
  StepMode mode = StepMode::StandardBGK;
  double eps = 1.0;    ///< Knudsen number
  double dt = 0.0;
  double mu = 1.0;     ///< relaxation / penalization rate (fixed per run)
  double alpha = 1.0;  ///< lambda / mu for HomogeneousLinearized
};

/// One step of the standard IMEX scheme for the BGK equation: stage moments
/// advance by the explicit RK recursion, each stage Maxwellian is built from
/// them, and the stiff relaxation is solved in closed form per node.
DistributionField imex_step_standard(const DistributionField& f_n, const StepConfig& cfg);

/// One penalized IMEX step: the deviation G_P(F) = Q_B(F) - mu (M[F] - F) is
/// treated explicitly, only the BGK penalizer implicitly. `collision`
/// evaluates Q_B on one velocity slice.
DistributionField imex_step_penalized(const DistributionField& f_n, const StepConfig& cfg,
                                      const std::function<Vec(const Vec&)>& collision);

/// Space-homogeneous step on a single velocity slice; the mode selects the
/// BGK, penalized-Boltzmann (needs `op`), or linearized-penalization variant.
Vec homogeneous_step(const Vec& f_n, const StepConfig& cfg, const VelocityGrid& grid,
                     const SpectralBoltzmann* op = nullptr);

/// Explicit RK (explicit tableau part) on the limiting Euler system
/// dU/dt + d/dx <v_x phi M[U]> = 0, with the flux from the velocity-grid
/// quadrature of the corrected Maxwellian and the same WENO3 derivative:
/// the exact eps -> 0 limit of the kinetic moment scheme.
std::vector<MomentState> euler_reference_step(const std::vector<MomentState>& u_n,
                                              const ImexTableau& t, double dt,
                                              const VelocityGrid& vgrid);

/// Reference §-style initial data on the periodic unit interval:
/// rho0 = (2 + sin 2 pi x)/3, u0 = (cos 2 pi x)/5 along x, T0 = (3 + cos 2 pi x)/4.
std::vector<MomentState> default_initial_moments(std::size_t nx);

/// Equilibrium initial data f0 = M[rho0, u0, T0] (moment-corrected).
DistributionField initial_equilibrium(std::size_t nx, const VelocityGrid& grid);

/// Bimodal non-equilibrium data
/// f0 = rho0 / (2 pi T0)^{1/2} * (exp(-|v-u0|^2/2T0) + exp(-|v+3u0|^2/2T0)) / 2.
DistributionField initial_nonequilibrium(std::size_t nx, const VelocityGrid& grid);

}  // namespace apkin
