#pragma once

/// Collision operators: BGK relaxation and a direct Fourier-Galerkin spectral
/// evaluation of the 2D Maxwell-molecule Boltzmann operator, plus the
/// penalization split Q_B = G_P + Q_P.

#include <complex>
#include <string>

#include "apkin/phase_space.hpp"

namespace apkin {

/// sigma normalization making mu = rho for Maxwell molecules (|S^1| = 2 pi).
inline constexpr double kDefaultSigma = 1.0 / (2.0 * M_PI);

/// Fraction of vmax giving the dealiased support radius S; the truncation
/// radius of the collision integral is R = 2S (standard support condition
/// S = vmax * sqrt(2) / (3 + sqrt(2)) for the [-vmax, vmax]^2 box).
double default_support_fraction();

/// Q_BGK(f) = mu (M[m] - f) with the moment-corrected Maxwellian, so the
/// result has zero moments to rounding.
Vec bgk_apply(const Vec& f, const MomentState& m, double mu, const VelocityGrid& grid);

/// Precomputed Fourier-Galerkin form of the 2D Maxwell-molecule collision
/// operator (constant kernel sigma, angular cut-off radius R).
class SpectralBoltzmann {
 public:
  /// Builds (or loads from cache_dir, keyed by (nv, vmax, sigma)) the
  /// O(nv^4) kernel-mode table. nv must be >= 8.
  SpectralBoltzmann(std::size_t nv, double vmax, double sigma = kDefaultSigma,
                    const std::string& cache_dir = "");
  ~SpectralBoltzmann();
  SpectralBoltzmann(const SpectralBoltzmann&) = delete;
  SpectralBoltzmann& operator=(const SpectralBoltzmann&) = delete;

  std::size_t nv() const { return nv_; }
  double vmax() const { return vmax_; }
  double sigma() const { return sigma_; }
  double truncation_radius() const { return radius_; }

  /// Galerkin evaluation of Q_B(f) on the lattice; bilinear in f, conserves
  /// mass exactly (the k = 0 kernel mode vanishes).
  Vec apply(const Vec& f) const;

  /// beta(l,m) - beta(m,m) at (l_idx * nv^2 + m_idx), modes centered so that
  /// index 0 is mode -nv/2.
  const Vec& kernel_weights() const { return weights_; }

 private:
  std::size_t nv_;
  double vmax_;
  double sigma_;
  double radius_;
  Vec weights_;  ///< beta(l,m) - beta(m,m), index (l_idx * nv^2 + m_idx), centered modes
  std::vector<std::complex<double>> phase_;  ///< per-dimension mode phase for midpoint nodes
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;

  void build_weights();
  bool load_cache(const std::string& path);
  void save_cache(const std::string& path) const;
};

inline Vec boltzmann_apply(const SpectralBoltzmann& op, const Vec& f) { return op.apply(f); }

/// Loss-rate bound for Maxwell molecules: mu = sigma |S^1| rho (exact).
/// Throws on negative entries of f.
double estimate_mu(const Vec& f, const VelocityGrid& grid, double sigma = kDefaultSigma);

/// Q_B = G_P + Q_P with Q_P = mu (M[m] - f) and G_P = Q_B - Q_P; by
/// construction <phi G_P> equals the conservation defect of Q_B.
struct PenalizationSplit {
  Vec g_part;
  Vec q_part;
  double mu = 0.0;
};

PenalizationSplit penalize(const Vec& qb, const Vec& f, const MomentState& m, double mu,
                           const VelocityGrid& grid);

}  // namespace apkin
