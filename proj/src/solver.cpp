#include "apkin/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace apkin {

namespace {

[[noreturn]] void inadmissible(std::size_t cell, std::size_t stage, const MomentState& m) {
  throw std::runtime_error("imex_step: inadmissible stage moments at cell " +
                           std::to_string(cell) + ", stage " + std::to_string(stage) +
                           " (rho = " + std::to_string(m.rho) +
                           ", T = " + std::to_string(m.temperature()) + ")");
}

/// Shared stage loop of the standard and penalized steps. `deviation` (may be
/// null) evaluates (1/eps) G_P on a stage slice; it rides along with L in the
/// explicit part and has zero moments, so the moment recursion is unchanged.
DistributionField imex_step_impl(const DistributionField& f_n, const StepConfig& cfg,
                                 const std::function<Vec(const Vec&, const MomentState&)>* deviation) {
  const ImexTableau& t = cfg.tableau;
  const std::size_t nu = t.nu, nx = f_n.nx, nvv = f_n.grid.size();
  const double zfac = cfg.dt * cfg.mu / cfg.eps;  // Delta t mu / eps
  for (std::size_t i = 0; i < nu; ++i)
    if (t.a_im[i][i] < 0.0)
      throw std::runtime_error("imex_step: negative implicit diagonal entry");

  // Per-stage storage: stage value F, its transport term L, the stage
  // Maxwellian M (moment-corrected), and the explicit deviation if any.
  std::vector<DistributionField> F, L, M, G;
  F.reserve(nu);
  L.reserve(nu);
  M.reserve(nu);
  if (deviation) G.reserve(nu);

  // Stage moments per cell, advanced by the explicit recursion on <phi L>.
  std::vector<std::vector<MomentState>> lm(nu);  // moments of L_j per cell

  std::vector<MomentState> u_n(nx);
  for (std::size_t c = 0; c < nx; ++c) u_n[c] = moments(f_n.cell(c), f_n.grid);

  for (std::size_t i = 0; i < nu; ++i) {
    // (1) stage moments U_i
    DistributionField m_i(nx, f_n.grid);
    for (std::size_t c = 0; c < nx; ++c) {
      MomentState u = u_n[c];
      for (std::size_t j = 0; j < i; ++j) {
        const double a = cfg.dt * t.a_ex[i][j];
        u.rho += a * lm[j][c].rho;
        u.mx += a * lm[j][c].mx;
        u.my += a * lm[j][c].my;
        u.energy += a * lm[j][c].energy;
      }
      if (!u.admissible()) inadmissible(c, i, u);
      // (2) stage Maxwellian from the moments
      const Vec eq = maxwellian_corrected(u, f_n.grid);
      std::copy(eq.begin(), eq.end(), m_i.cell(c));
    }
    M.push_back(std::move(m_i));

    // (3) closed-form diagonal solve for F_i
    DistributionField f_i(nx, f_n.grid);
    const double diag = zfac * t.a_im[i][i];
    for (std::size_t c = 0; c < nx; ++c) {
      const double* fn = f_n.cell(c);
      const double* mi = M[i].cell(c);
      double* fi = f_i.cell(c);
      for (std::size_t k = 0; k < nvv; ++k) {
        double rhs = fn[k];
        for (std::size_t j = 0; j < i; ++j) {
          rhs += cfg.dt * t.a_ex[i][j] * L[j].cell(c)[k];
          if (deviation) rhs += cfg.dt * t.a_ex[i][j] * G[j].cell(c)[k];
          rhs += zfac * t.a_im[i][j] * (M[j].cell(c)[k] - F[j].cell(c)[k]);
        }
        fi[k] = (rhs + diag * mi[k]) / (1.0 + diag);
      }
    }
    F.push_back(std::move(f_i));

    // (4) transport term and its moments; deviation term if penalized
    L.push_back(advection_rhs(F[i]));
    lm[i].resize(nx);
    for (std::size_t c = 0; c < nx; ++c) lm[i][c] = moments(L[i].cell(c), f_n.grid);
    if (deviation) {
      DistributionField g_i(nx, f_n.grid);
      for (std::size_t c = 0; c < nx; ++c) {
        Vec slice(F[i].cell(c), F[i].cell(c) + nvv);
        const MomentState u = moments(slice, f_n.grid);
        const Vec g = (*deviation)(slice, u);
        std::copy(g.begin(), g.end(), g_i.cell(c));
      }
      G.push_back(std::move(g_i));
    }
  }

  DistributionField out(nx, f_n.grid);
  for (std::size_t c = 0; c < nx; ++c) {
    const double* fn = f_n.cell(c);
    double* o = out.cell(c);
    for (std::size_t k = 0; k < nvv; ++k) {
      double v = fn[k];
      for (std::size_t i = 0; i < nu; ++i) {
        v += cfg.dt * t.w_ex[i] * L[i].cell(c)[k];
        if (deviation) v += cfg.dt * t.w_ex[i] * G[i].cell(c)[k];
        v += zfac * t.w_im[i] * (M[i].cell(c)[k] - F[i].cell(c)[k]);
      }
      o[k] = v;
    }
  }
  return out;
}

}  // namespace

DistributionField imex_step_standard(const DistributionField& f_n, const StepConfig& cfg) {
  if (cfg.mode != StepMode::StandardBGK)
    throw std::invalid_argument("imex_step_standard: mode must be StandardBGK");
  return imex_step_impl(f_n, cfg, nullptr);
}

DistributionField imex_step_penalized(const DistributionField& f_n, const StepConfig& cfg,
                                      const std::function<Vec(const Vec&)>& collision) {
  if (cfg.mode != StepMode::PenalizedBoltzmann)
    throw std::invalid_argument("imex_step_penalized: mode must be PenalizedBoltzmann");
  const double inv_eps = 1.0 / cfg.eps;
  const std::function<Vec(const Vec&, const MomentState&)> deviation =
      [&](const Vec& f, const MomentState& m) {
        Vec g = collision(f);
        const Vec eq = maxwellian_corrected(m, f_n.grid);
        for (std::size_t k = 0; k < g.size(); ++k)
          g[k] = inv_eps * (g[k] - cfg.mu * (eq[k] - f[k]));
        return g;
      };
  return imex_step_impl(f_n, cfg, &deviation);
}

Vec homogeneous_step(const Vec& f_n, const StepConfig& cfg, const VelocityGrid& grid,
                     const SpectralBoltzmann* op) {
  const ImexTableau& t = cfg.tableau;
  const std::size_t nu = t.nu, nvv = grid.size();
  const double z = cfg.dt * cfg.mu / cfg.eps;
  const Vec m = maxwellian_corrected(moments(f_n, grid), grid);

  switch (cfg.mode) {
    case StepMode::HomogeneousBGK: {
      // Deviation form of (I + zA) F = f^n e + z A M e: with G = F - M e,
      // (I + zA) G = (f^n - M) e and f^{n+1} = f^n - z w^T G. Equivalent
      // algebraically, but avoids the O(z eps_mach) cancellation of forming
      // z a_ij (M - F_j) at large z.
      std::vector<Vec> G(nu);
      for (std::size_t i = 0; i < nu; ++i) {
        G[i].resize(nvv);
        const double diag = z * t.a_im[i][i];
        for (std::size_t k = 0; k < nvv; ++k) {
          double rhs = f_n[k] - m[k];
          for (std::size_t j = 0; j < i; ++j) rhs -= z * t.a_im[i][j] * G[j][k];
          G[i][k] = rhs / (1.0 + diag);
        }
      }
      Vec out(f_n);
      for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t k = 0; k < nvv; ++k) out[k] -= z * t.w_im[i] * G[i][k];
      return out;
    }
    case StepMode::HomogeneousPenalized: {
      if (!op) throw std::invalid_argument("homogeneous_step: penalized mode needs the operator");
      // (I + zA) F = f^n e + z(A - A~) M e + z A~ P(F)/mu, P(F) = Q_B(F) + mu F.
      std::vector<Vec> F(nu), P(nu);  // P stores P(F)/mu
      for (std::size_t i = 0; i < nu; ++i) {
        F[i].resize(nvv);
        const double diag = z * t.a_im[i][i];
        for (std::size_t k = 0; k < nvv; ++k) {
          double rhs = f_n[k] + diag * m[k];
          for (std::size_t j = 0; j < i; ++j)
            rhs += z * (t.a_im[i][j] - t.a_ex[i][j]) * m[k] - z * t.a_im[i][j] * F[j][k] +
                   z * t.a_ex[i][j] * P[j][k];
          F[i][k] = rhs / (1.0 + diag);
        }
        P[i] = op->apply(F[i]);
        for (std::size_t k = 0; k < nvv; ++k) P[i][k] = P[i][k] / cfg.mu + F[i][k];
      }
      Vec out(f_n);
      for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t k = 0; k < nvv; ++k)
          out[k] += z * t.w_ex[i] * (P[i][k] - m[k]) + z * t.w_im[i] * (m[k] - F[i][k]);
      return out;
    }
    case StepMode::HomogeneousLinearized: {
      // Deviation form: with B = A - (alpha-1) A~ and w' = w - (alpha-1) w~,
      // (I + zB) G = (f^n - M) e and f^{n+1} = f^n - z w'^T G, which is the
      // affine map R(alpha, z) f^n + (1 - R(alpha, z)) M.
      const double am1 = cfg.alpha - 1.0;
      std::vector<Vec> G(nu);
      for (std::size_t i = 0; i < nu; ++i) {
        G[i].resize(nvv);
        const double diag = z * t.a_im[i][i];
        for (std::size_t k = 0; k < nvv; ++k) {
          double rhs = f_n[k] - m[k];
          for (std::size_t j = 0; j < i; ++j)
            rhs -= z * (t.a_im[i][j] - am1 * t.a_ex[i][j]) * G[j][k];
          G[i][k] = rhs / (1.0 + diag);
        }
      }
      Vec out(f_n);
      for (std::size_t i = 0; i < nu; ++i) {
        const double wp = t.w_im[i] - am1 * t.w_ex[i];
        for (std::size_t k = 0; k < nvv; ++k) out[k] -= z * wp * G[i][k];
      }
      return out;
    }
    default:
      throw std::invalid_argument("homogeneous_step: mode is not homogeneous");
  }
}

namespace {

/// Moments of the Euler flux <v_x phi M[U]> per cell, differentiated by WENO3.
std::vector<MomentState> euler_flux_divergence(const std::vector<MomentState>& u,
                                               const VelocityGrid& vgrid) {
  const std::size_t nx = u.size();
  DistributionField field(nx, vgrid);
  for (std::size_t c = 0; c < nx; ++c) {
    const Vec eq = maxwellian_corrected(u[c], vgrid);
    std::copy(eq.begin(), eq.end(), field.cell(c));
  }
  const DistributionField rhs = advection_rhs(field);  // -v_x d/dx M[U]
  std::vector<MomentState> k(nx);
  for (std::size_t c = 0; c < nx; ++c) k[c] = moments(rhs.cell(c), vgrid);
  return k;
}

}  // namespace

std::vector<MomentState> euler_reference_step(const std::vector<MomentState>& u_n,
                                              const ImexTableau& t, double dt,
                                              const VelocityGrid& vgrid) {
  const std::size_t nu = t.nu, nx = u_n.size();
  std::vector<std::vector<MomentState>> k(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    std::vector<MomentState> u_i = u_n;
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t c = 0; c < nx; ++c) {
        const double a = dt * t.a_ex[i][j];
        u_i[c].rho += a * k[j][c].rho;
        u_i[c].mx += a * k[j][c].mx;
        u_i[c].my += a * k[j][c].my;
        u_i[c].energy += a * k[j][c].energy;
      }
    for (std::size_t c = 0; c < nx; ++c)
      if (!u_i[c].admissible())
        throw std::runtime_error("euler_reference_step: inadmissible stage moments at cell " +
                                 std::to_string(c) + ", stage " + std::to_string(i));
    k[i] = euler_flux_divergence(u_i, vgrid);
  }
  std::vector<MomentState> out = u_n;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t c = 0; c < nx; ++c) {
      const double w = dt * t.w_ex[i];
      out[c].rho += w * k[i][c].rho;
      out[c].mx += w * k[i][c].mx;
      out[c].my += w * k[i][c].my;
      out[c].energy += w * k[i][c].energy;
    }
  return out;
}

std::vector<MomentState> default_initial_moments(std::size_t nx) {
  std::vector<MomentState> u(nx);
  for (std::size_t c = 0; c < nx; ++c) {
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(nx);
    const double rho = (2.0 + std::sin(2.0 * M_PI * x)) / 3.0;
    const double ux = std::cos(2.0 * M_PI * x) / 5.0;
    const double temp = (3.0 + std::cos(2.0 * M_PI * x)) / 4.0;
    u[c].rho = rho;
    u[c].mx = rho * ux;
    u[c].my = 0.0;
    u[c].energy = rho * temp + 0.5 * rho * ux * ux;
  }
  return u;
}

DistributionField initial_equilibrium(std::size_t nx, const VelocityGrid& grid) {
  const std::vector<MomentState> u = default_initial_moments(nx);
  DistributionField f(nx, grid);
  for (std::size_t c = 0; c < nx; ++c) {
    const Vec eq = maxwellian_corrected(u[c], grid);
    std::copy(eq.begin(), eq.end(), f.cell(c));
  }
  return f;
}

DistributionField initial_nonequilibrium(std::size_t nx, const VelocityGrid& grid) {
  DistributionField f(nx, grid);
  for (std::size_t c = 0; c < nx; ++c) {
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(nx);
    const double rho = (2.0 + std::sin(2.0 * M_PI * x)) / 3.0;
    const double ux = std::cos(2.0 * M_PI * x) / 5.0;
    const double temp = (3.0 + std::cos(2.0 * M_PI * x)) / 4.0;
    const double pref = 0.5 * rho / std::sqrt(2.0 * M_PI * temp);
    double* cell = f.cell(c);
    for (std::size_t j = 0; j < grid.nv; ++j)
      for (std::size_t k = 0; k < grid.nv; ++k) {
        const double vx = grid.coords[j], vy = grid.coords[k];
        const double d1 = (vx - ux) * (vx - ux) + vy * vy;
        const double d2 = (vx + 3.0 * ux) * (vx + 3.0 * ux) + vy * vy;
        cell[j * grid.nv + k] =
            pref * (std::exp(-d1 / (2.0 * temp)) + std::exp(-d2 / (2.0 * temp)));
      }
  }
  return f;
}

}  // namespace apkin
